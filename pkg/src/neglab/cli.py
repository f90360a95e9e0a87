"""Command-line front end.

Subcommands::

    neglab gen          emit a state as matrix JSON
    neglab eval         evaluate negativity functionals on a state file
    neglab compose      check composability on a pair of state files
    neglab monotonic    Monte-Carlo monotonicity / lemma campaign
    neglab inequalities norm sandwich and distillability-bound chain
    neglab series       exact formal-series computations

Exit status: 0 when every check passes, 1 when a verification fails (the
report is still written), 2 on I/O or validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import channels, grouplaw, linops, negativity, series, states
from .errors import NegLabError, InvalidParameter
from .negativity import Functional

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
COMPOSE_TOL = 1e-8
CHAIN_TOL = 1e-10
SANDWICH_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _p_list(values) -> list[float]:
    out = []
    for v in values:
        for item in str(v).split(","):
            if item.strip():
                out.append(negativity.decode_p(item))
    if not out:
        raise InvalidParameter("empty --p list")
    return out


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NEGLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InvalidParameter(f"NEGLAB_SEED must be an integer, got {env!r}") from exc


def _read_state(path: str):
    with open(path) as fh:
        return linops.load_matrix(fh.read())


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------------------------

def cmd_gen(args) -> int:
    recipe = states.StateRecipe(
        kind=args.kind, w=args.w, f=args.f, d=args.d, N=args.N, rank=args.rank,
        d1=args.d1, d2=args.d2, k_terms=args.k_terms,
        seed=_seed(args) if args.kind in ("ginibre", "random_pure", "random_separable") else None,
    )
    rho, bp = states.generate(recipe)
    record = linops.matrix_to_dict(rho, bp)
    record["recipe"] = recipe.to_dict()
    _emit(record, args.out)
    return EXIT_OK


_P1_FUNCTIONALS = (Functional.NEGATIVITY, Functional.LOG_NEGATIVITY, Functional.TRACE_NORM_GROUP,
                   Functional.Q_NEGATIVITY)
_Q_FUNCTIONALS = (Functional.Q_NEGATIVITY, Functional.PNORM_Q_NEGATIVITY)


def cmd_eval(args) -> int:
    rho, bp = _read_state(args.state)
    spec = grouplaw.parse_spec(args.spec)
    ps = _p_list(args.p)
    reports = []
    if args.functional is None:
        plan = [(Functional.TRACE_NORM_GROUP if p == 1 else Functional.PNORM_GROUP, p) for p in ps]
    else:
        names = list(Functional) if args.functional == "all" else [Functional(args.functional)]
        if spec.family != grouplaw.TSALLIS or spec.q <= 1:
            names = [n for n in names if n not in _Q_FUNCTIONALS or args.functional != "all"]
        plan = [(n, p) for n in names for p in ([1.0] if n in _P1_FUNCTIONALS else ps)]
    for name, p in plan:
        reports.append(negativity.evaluate(name, rho, bp, spec, p, state=args.state).to_dict())
    config = {"subcommand": "eval", "state": args.state, "spec": spec.to_dict(),
              "p": [negativity.encode_p(p) for p in ps], "functional": args.functional}
    _emit({"config": config, "reports": reports}, args.out)
    return EXIT_OK


def cmd_compose(args) -> int:
    if len(args.state) != 2:
        raise InvalidParameter("compose needs exactly two --state files")
    (sigma, bp1), (tau, bp2) = (_read_state(p) for p in args.state)
    joint, bp = linops.interleave_product(sigma, bp1, tau, bp2)
    specs = [grouplaw.parse_spec(s) for s in args.spec]
    ps = _p_list(args.p)
    rows = []
    for spec in specs:
        for p in ps:
            a = negativity.pnorm_group_negativity(spec, p, sigma, bp1)
            b = negativity.pnorm_group_negativity(spec, p, tau, bp2)
            joint_value = negativity.pnorm_group_negativity(spec, p, joint, bp)
            predicted = grouplaw.group_law(spec, a, b)
            err = abs(joint_value - predicted)
            rows.append({"spec": spec.to_dict(), "p": negativity.encode_p(p), "sigma": a, "tau": b,
                         "joint": joint_value, "law": predicted, "error": err, "pass": err <= COMPOSE_TOL})
    passed = all(r["pass"] for r in rows)
    config = {"subcommand": "compose", "state": list(args.state),
              "spec": [s.to_dict() for s in specs], "p": [negativity.encode_p(p) for p in ps]}
    _emit({"config": config, "results": rows, "passed": passed}, args.out)
    return EXIT_OK if passed else EXIT_FAIL


def _campaign_config(args) -> channels.CampaignConfig:
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    else:
        data = {}
    if args.trials is not None:
        data["trials"] = args.trials
    if args.dims is not None:
        data["dims"] = args.dims
    if args.p is not None:
        data["p"] = [negativity.encode_p(p) for p in _p_list(args.p)]
    if args.spec is not None:
        data["specs"] = [grouplaw.parse_spec(s).to_dict() for s in args.spec]
        data.pop("spec", None)
    if args.outcomes is not None:
        data["outcomes"] = args.outcomes
    if args.seed is not None or "seed" not in data:
        data["seed"] = _seed(args)
    if args.workers is not None:
        data["workers"] = args.workers
    return channels.CampaignConfig.from_dict(data)


def _campaign_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "spec", "p", "max", "mean", "bound", "pass"])
    for r in report["monotonicity"]:
        writer.writerow(["monotonicity", grouplaw.from_dict(r["spec"]), r["p"], repr(r["max_defect"]),
                         repr(r["mean_defect"]), repr(r["bound_k"]), r["pass"]])
    for r in report["lemma"]:
        writer.writerow(["lemma", "", r["p"], repr(r["max_excess"]), "", "0", r["pass"]])
    return buf.getvalue()


def cmd_monotonic(args) -> int:
    config = _campaign_config(args)
    report = channels.run_campaign(config)
    report["config"]["subcommand"] = "monotonic"
    _emit(report, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(_campaign_csv(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def inequality_checks(dims, trials: int, ps, seed: int) -> dict:
    """Norm sandwich on random Hermitian matrices and the bound chain on random states."""
    bp = linops.Bipartition(*dims)
    N = bp.dim
    rng = np.random.default_rng(seed)
    chain = {p: {"upper": -math.inf, "lower": -math.inf} for p in ps}
    sandwich = {p: {"left": -math.inf, "right": -math.inf} for p in ps}
    normalized_one = 0.0
    for _ in range(trials):
        rank = int(rng.integers(1, N + 1))
        rho, _ = states.ginibre(N, rank, rng, bp)
        spectrum = negativity.pt_spectrum(rho, bp)
        L = grouplaw.glog(grouplaw.additive(), linops.schatten_norm_from_spectrum(spectrum, 1))
        normalized_one = max(normalized_one, abs(negativity.normalized_pnorm_negativity(1, rho, bp) - L))
        X = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        H = X + X.conj().T
        h1 = linops.schatten_norm(H, 1)
        for p in ps:
            Lp = grouplaw.glog(grouplaw.additive(), linops.schatten_norm_from_spectrum(spectrum, p))
            Lt = Lp - negativity.maximally_mixed_log_norm(p, N)
            chain[p]["lower"] = max(chain[p]["lower"], Lp - L)
            chain[p]["upper"] = max(chain[p]["upper"], L - Lt)
            hp = linops.schatten_norm(H, p)
            sandwich[p]["left"] = max(sandwich[p]["left"], (hp - h1) / h1)
            sandwich[p]["right"] = max(sandwich[p]["right"], (h1 - negativity.norm_ratio_bound(p, N) * hp) / h1)
    rows = []
    for p in ps:
        ok_chain = chain[p]["lower"] <= CHAIN_TOL and chain[p]["upper"] <= CHAIN_TOL
        ok_sand = sandwich[p]["left"] <= SANDWICH_TOL and sandwich[p]["right"] <= SANDWICH_TOL
        rows.append({
            "p": negativity.encode_p(p),
            "chain_max_Lp_minus_L": chain[p]["lower"],
            "chain_max_L_minus_normalized": chain[p]["upper"],
            "sandwich_max_rel_left": sandwich[p]["left"],
            "sandwich_max_rel_right": sandwich[p]["right"],
            "pass": bool(ok_chain and ok_sand),
        })
    return {"results": rows, "normalized_p1_max_error": normalized_one,
            "passed": all(r["pass"] for r in rows) and normalized_one == 0.0}


def cmd_inequalities(args) -> int:
    ps = _p_list(args.p)
    seed = _seed(args)
    report = inequality_checks(args.dims, args.trials, ps, seed)
    report["config"] = {"subcommand": "inequalities", "dims": list(args.dims), "trials": args.trials,
                        "p": [negativity.encode_p(p) for p in ps], "seed": seed}
    _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_series(args) -> int:
    data = {}
    if args.input:
        with open(args.input) as fh:
            data = json.load(fh)
    T = args.T if args.T is not None else int(data.get("T", series.DEFAULT_ORDER))
    if not 1 <= T <= series.MAX_ORDER:
        raise InvalidParameter(f"T must be in [1, {series.MAX_ORDER}], got {T}")
    b = args.b if args.b is not None else data.get("b")
    spec_text = args.spec
    spec = grouplaw.parse_spec(spec_text) if spec_text else (
        grouplaw.from_dict(data["spec"]) if "spec" in data else None)
    if (b is None) == (spec is None):
        raise InvalidParameter("series needs exactly one of --b or --spec")
    config = {"subcommand": "series", "T": T, "lazard": bool(args.lazard or data.get("lazard", False))}
    if b is not None:
        F = series.delta_series(b, T)
        G = series.compositional_inverse(F)
        config["b"] = [str(series.as_fraction(v)) for v in b]
        report = {"F": series.series_to_strings(F), "G": series.series_to_strings(G),
                  "a": [str(c) for c in series.delta_coefficients(G)]}
        law_source = G
    else:
        G = series.glog_taylor(spec, T)
        config["spec"] = spec.to_dict()
        report = {"G": series.series_to_strings(G),
                  "G_inverse": series.series_to_strings(series.compositional_inverse(G))}
        law_source = G
    passed = True
    if config["lazard"]:
        phi = series.lazard_law(law_source)
        axioms = series.verify_fgl_axioms(phi)
        report["lazard"] = series.table_to_strings(phi)
        report["axioms"] = axioms.to_dict()
        passed = axioms.passed and axioms.commutativity
    report["config"] = config
    report["passed"] = passed
    _emit(report, args.out)
    return EXIT_OK if passed else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="neglab", description="Group negativities of bipartite quantum states.")
    parser.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, seed=False):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, help="RNG seed (falls back to $NEGLAB_SEED, then 0)")

    g = sub.add_parser("gen", help="generate a state")
    g.add_argument("--kind", required=True, choices=states.KINDS)
    g.add_argument("--w", type=float)
    g.add_argument("--f", type=float)
    g.add_argument("--d", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--rank", type=int)
    g.add_argument("--d1", type=int)
    g.add_argument("--d2", type=int)
    g.add_argument("--k-terms", type=int, default=8)
    common(g, seed=True)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="evaluate functionals on a state")
    e.add_argument("--state", required=True)
    e.add_argument("--spec", default="additive")
    e.add_argument("--p", nargs="+", default=["1"])
    e.add_argument("--functional", choices=[f.value for f in Functional] + ["all"])
    common(e)
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("compose", help="check composability on two states")
    c.add_argument("--state", action="append", required=True, help="give twice: sigma then tau")
    c.add_argument("--spec", nargs="+", default=["additive"])
    c.add_argument("--p", nargs="+", default=["1"])
    common(c)
    c.set_defaults(func=cmd_compose)

    m = sub.add_parser("monotonic", help="Monte-Carlo monotonicity campaign")
    m.add_argument("--config", help="campaign config JSON; flags override its fields")
    m.add_argument("--dims", nargs=2, type=int)
    m.add_argument("--trials", type=int)
    m.add_argument("--p", nargs="+")
    m.add_argument("--spec", nargs="+")
    m.add_argument("--outcomes", type=int)
    m.add_argument("--workers", type=int)
    m.add_argument("--csv", help="also write a flat CSV table here")
    common(m, seed=True)
    m.set_defaults(func=cmd_monotonic)

    i = sub.add_parser("inequalities", help="norm sandwich and bound-chain checks")
    i.add_argument("--dims", nargs=2, type=int, default=[2, 2])
    i.add_argument("--trials", type=int, default=1000)
    i.add_argument("--p", nargs="+", default=["1.5", "2", "4", "inf"])
    common(i, seed=True)
    i.set_defaults(func=cmd_inequalities)

    s = sub.add_parser("series", help="formal power series computations")
    s.add_argument("--input", help='JSON {"b": [...], "T": n} or {"spec": {...}, "T": n}')
    s.add_argument("--b", nargs="+", help="coefficients b1 b2 ... as rationals 'p/q'")
    s.add_argument("--spec")
    s.add_argument("--T", type=int)
    s.add_argument("--lazard", action="store_true")
    common(s)
    s.set_defaults(func=cmd_series)
    return parser


def _fail(message: str, kind: str, json_errors: bool) -> int:
    if json_errors:
        sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    else:
        sys.stderr.write(f"neglab: {message}\n")
    return EXIT_ERROR


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    json_errors = "--json-errors" in argv
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail(str(exc), "UsageError", json_errors)
    except (NegLabError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(str(exc), type(exc).__name__, json_errors)


if __name__ == "__main__":
    sys.exit(main())
