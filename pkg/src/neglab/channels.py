"""Quantum instruments, LOCC generators and the monotonicity campaign.

An instrument is a list of branches; each branch is a completely positive
map in Kraus form. Applying it to ``rho`` yields outcomes ``(p_i, rho_i)``
with ``p_i = tr A_i(rho)``. Random instruments are drawn in local (LOCC)
form, which is a subset of the PPT operations the monotonicity statements
quantify over.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import grouplaw, linops, negativity, states
from .errors import DimensionMismatch, IncompleteInstrument, InvalidParameter
from .grouplaw import GroupLogSpec
from .linops import Bipartition

COMPLETENESS_TOL = 1e-10
DROP_PROB = 1e-12
DEFECT_TOL = 1e-8

LOCAL_A = "LocalA"
LOCAL_B = "LocalB"
LOCAL_UNITARY = "LocalUnitary"
MIXED = "Mixed"


@dataclass(frozen=True)
class KrausOperation:
    """Completely positive map ``rho -> sum_k K_k rho K_k^dagger``."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(K, dtype=complex) for K in self.kraus)
        if not ops:
            raise InvalidParameter("a Kraus operation needs at least one operator")
        shape = ops[0].shape
        if any(K.ndim != 2 or K.shape != shape for K in ops):
            raise DimensionMismatch("all Kraus operators must share one 2-D shape")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def effect(self) -> np.ndarray:
        """``sum_k K_k^dagger K_k``."""
        return sum(K.conj().T @ K for K in self.kraus)

    @property
    def completeness_defect(self) -> float:
        return float(np.linalg.norm(self.effect() - np.eye(self.dim_in), ord=2))

    @property
    def trace_preserving(self) -> bool:
        return self.completeness_defect <= COMPLETENESS_TOL

    def __call__(self, rho) -> np.ndarray:
        return apply_branch(self, rho)


@dataclass(frozen=True)
class QuantumInstrument:
    branches: tuple[KrausOperation, ...]
    locc_form: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise InvalidParameter("an instrument needs at least one branch")

    @property
    def completeness_defect(self) -> float:
        total = sum(b.effect() for b in self.branches)
        return float(np.linalg.norm(total - np.eye(self.branches[0].dim_in), ord=2))

    @property
    def complete(self) -> bool:
        return self.completeness_defect <= COMPLETENESS_TOL


def apply_branch(op: KrausOperation, rho) -> np.ndarray:
    """Unnormalised ``sum_k K_k rho K_k^dagger``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (op.dim_in, op.dim_in):
        raise DimensionMismatch(f"operator of shape {rho.shape} does not fit Kraus input dim {op.dim_in}")
    return sum(K @ rho @ K.conj().T for K in op.kraus)


def selective_apply(inst: QuantumInstrument, rho, bp: Bipartition | None = None
                    ) -> list[tuple[float, np.ndarray]]:
    """Outcomes ``(p_i, rho_i)`` of measuring ``rho`` with ``inst``.

    Branches with ``p_i < 1e-12`` are dropped.

    Raises
    ------
    IncompleteInstrument
        If the Kraus operators of all branches do not resolve the identity.
    """
    defect = inst.completeness_defect
    if defect > COMPLETENESS_TOL:
        raise IncompleteInstrument(f"sum K^dagger K deviates from I by {defect:.3e}")
    if bp is not None:
        rho = negativity.check_state(rho, bp)
    outcomes = []
    for branch in inst.branches:
        out = apply_branch(branch, rho)
        p = float(np.trace(out).real)
        if p < DROP_PROB:
            continue
        out = out / p
        outcomes.append((p, 0.5 * (out + out.conj().T)))
    return outcomes


class GammaConjugate:
    """The map ``sigma -> G(A(G(sigma)))`` for partial transpose ``G`` on ``bp``."""

    def __init__(self, op: KrausOperation, bp: Bipartition):
        if op.dim_in != bp.dim or op.dim_out != bp.dim:
            raise DimensionMismatch(f"Kraus dims {op.dim_out}x{op.dim_in} do not match bipartition {bp}")
        self.op = op
        self.bp = bp

    def __call__(self, sigma) -> np.ndarray:
        sigma = np.asarray(sigma, dtype=complex)
        return linops.partial_transpose(apply_branch(self.op, linops.partial_transpose(sigma, self.bp)),
                                        self.bp)


def gamma_conjugate(op: KrausOperation, bp: Bipartition) -> GammaConjugate:
    return GammaConjugate(op, bp)


# -- random LOCC instruments ---------------------------------------------------------

def haar_isometry(rows: int, cols: int, rng) -> np.ndarray:
    """Haar-distributed isometry ``V`` (``V^dagger V = I``) of shape ``rows x cols``."""
    rng = np.random.default_rng(rng)
    Z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def local_blocks(d: int, n_outcomes: int, rng) -> list[np.ndarray]:
    """``n_outcomes`` blocks ``M_i`` of a Haar isometry, so ``sum M_i^dagger M_i = I_d``."""
    V = haar_isometry(n_outcomes * d, d, rng)
    return [V[i * d:(i + 1) * d] for i in range(n_outcomes)]


def random_local_instrument(bp: Bipartition, n_outcomes: int, side: str = "B",
                            seed=None) -> QuantumInstrument:
    """Instrument acting on one party only: ``K_i = M_i (x) I`` or ``I (x) M_i``."""
    if n_outcomes < 1:
        raise InvalidParameter("n_outcomes must be at least 1")
    side = side.upper()
    if side not in ("A", "B"):
        raise InvalidParameter(f"side must be 'A' or 'B', got {side!r}")
    d = bp.d1 if side == "A" else bp.d2
    blocks = local_blocks(d, n_outcomes, seed)
    if side == "A":
        kraus = [np.kron(M, np.eye(bp.d2)) for M in blocks]
    else:
        kraus = [np.kron(np.eye(bp.d1), M) for M in blocks]
    if n_outcomes == 1:
        form = LOCAL_UNITARY
    else:
        form = LOCAL_A if side == "A" else LOCAL_B
    return QuantumInstrument(tuple(KrausOperation((K,)) for K in kraus), form)


def random_oneway_locc_instrument(bp: Bipartition, n_a: int, n_b: int, seed=None,
                                  coarse_grain_b: bool = False) -> QuantumInstrument:
    """Two-round LOCC: A measures, B applies an outcome-dependent local instrument.

    With ``coarse_grain_b`` B's outcomes are forgotten, so each branch holds
    ``n_b`` Kraus operators.
    """
    if n_a < 1 or n_b < 1:
        raise InvalidParameter("outcome counts must be at least 1")
    rng = np.random.default_rng(seed)
    branches = []
    for Ma in local_blocks(bp.d1, n_a, rng):
        Kb = [np.kron(Ma, Nb) for Nb in local_blocks(bp.d2, n_b, rng)]
        if coarse_grain_b:
            branches.append(KrausOperation(tuple(Kb)))
        else:
            branches.extend(KrausOperation((K,)) for K in Kb)
    return QuantumInstrument(tuple(branches), MIXED)


# -- trials ---------------------------------------------------------------------------

def monotonicity_trial(spec: GroupLogSpec, p: float, rho, bp: Bipartition,
                       inst: QuantumInstrument) -> float:
    """Average change ``sum_i p_i L_{G,p}(rho_i) - L_{G,p}(rho)``."""
    before = negativity.pnorm_group_negativity(spec, p, rho, bp)
    after = sum(pi * negativity.pnorm_group_negativity(spec, p, ri, bp)
                for pi, ri in selective_apply(inst, rho, bp))
    return after - before


def lemma_trace_contraction_trial(rho, bp: Bipartition, inst: QuantumInstrument,
                                  p: float) -> tuple[float, float]:
    """``(sum_i p_i ||rho_i^G||_p, ||rho^G||_1)``."""
    rhs = negativity.pt_norm(rho, bp, 1)
    lhs = sum(pi * negativity.pt_norm(ri, bp, p) for pi, ri in selective_apply(inst, rho, bp))
    return float(lhs), float(rhs)


# -- campaign ---------------------------------------------------------------------------

@dataclass
class CampaignConfig:
    trials: int = 10_000
    dims: tuple[int, int] = (2, 2)
    p: Sequence[float] = (1.0,)
    specs: Sequence[GroupLogSpec] = field(default_factory=lambda: [grouplaw.additive()])
    outcomes: int = 3
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != 2:
            raise InvalidParameter("dims must be a pair [d1, d2]")
        Bipartition(*self.dims)
        self.p = [negativity.decode_p(v) for v in self.p]
        self.specs = list(self.specs)
        if self.trials < 1 or self.outcomes < 1 or self.workers < 1:
            raise InvalidParameter("trials, outcomes and workers must be positive")

    def to_dict(self) -> dict:
        out = {
            "trials": self.trials,
            "dims": list(self.dims),
            "p": [negativity.encode_p(v) for v in self.p],
            "outcomes": self.outcomes,
            "seed": self.seed,
        }
        if len(self.specs) == 1:
            out["spec"] = self.specs[0].to_dict()
        else:
            out["specs"] = [s.to_dict() for s in self.specs]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        if "specs" in data:
            specs = [grouplaw.from_dict(s) for s in data["specs"]]
        else:
            specs = [grouplaw.from_dict(data.get("spec", {"family": "additive"}))]
        p = data.get("p", [1.0])
        return cls(
            trials=int(data.get("trials", 10_000)),
            dims=tuple(data.get("dims", (2, 2))),
            p=p if isinstance(p, list) else [p],
            specs=specs,
            outcomes=int(data.get("outcomes", 3)),
            seed=int(data.get("seed", 0)),
            workers=int(data.get("workers", 1)),
        )


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Per-trial generator keyed by ``(seed, index)``, independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def draw_trial(bp: Bipartition, max_outcomes: int, rng) -> tuple[np.ndarray, QuantumInstrument]:
    """A random state and a random LOCC-form instrument.

    States are induced-measure random states of uniformly drawn rank.
    Instruments are local on A, local on B, or one-way LOCC from A to B.
    """
    N = bp.dim
    rho, _ = states.ginibre(N, int(rng.integers(1, N + 1)), rng, bp)
    n = int(rng.integers(1, max_outcomes + 1))
    form = int(rng.integers(0, 3))
    if form == 0:
        inst = random_local_instrument(bp, n, "A", rng)
    elif form == 1:
        inst = random_local_instrument(bp, n, "B", rng)
    else:
        inst = random_oneway_locc_instrument(bp, n, int(rng.integers(1, max_outcomes + 1)), rng,
                                             coarse_grain_b=bool(rng.integers(0, 2)))
    return rho, inst


def _trial_norms(bp: Bipartition, max_outcomes: int, ps: Sequence[float], seed: int, index: int):
    """Norms of ``rho^G`` and of every outcome ``rho_i^G`` at each order in ``ps``."""
    rng = trial_rng(seed, index)
    rho, inst = draw_trial(bp, max_outcomes, rng)
    spec0 = negativity.pt_spectrum(rho, bp, validate=False)
    outcomes = selective_apply(inst, rho)
    probs = np.array([pi for pi, _ in outcomes])
    spectra = [negativity.pt_spectrum(ri, bp, validate=False) for _, ri in outcomes]
    before = np.array([linops.schatten_norm_from_spectrum(spec0, p) for p in ps])
    after = np.array([[linops.schatten_norm_from_spectrum(s, p) for p in ps] for s in spectra])
    trace_norm = linops.schatten_norm_from_spectrum(spec0, 1)
    return probs, before, after, trace_norm


def _chunk(args):
    bp, max_outcomes, ps, seed, start, stop = args
    return [_trial_norms(bp, max_outcomes, ps, seed, i) for i in range(start, stop)]


def run_campaign(config: CampaignConfig) -> dict:
    """Monte-Carlo check of monotonicity bounds and the trace-contraction lemma.

    For every trial, spec and order ``p`` the defect is
    ``sum_i p_i L_{G,p}(rho_i) - L_{G,p}(rho)``, compared against
    ``k(p) = glog(N^(1-1/p)) + 1e-8``. The lemma excess is
    ``sum_i p_i ||rho_i^G||_p - ||rho^G||_1``, compared against ``1e-8``.
    The returned dict is deterministic in ``config``.
    """
    bp = Bipartition(*config.dims)
    ps = list(config.p)
    n = config.trials
    if config.workers > 1:
        step = max(1, math.ceil(n / (4 * config.workers)))
        jobs = [(bp, config.outcomes, ps, config.seed, s, min(n, s + step)) for s in range(0, n, step)]
        with ProcessPoolExecutor(config.workers) as pool:
            rows = [r for chunk in pool.map(_chunk, jobs) for r in chunk]
    else:
        rows = _chunk((bp, config.outcomes, ps, config.seed, 0, n))

    results = []
    for spec in config.specs:
        for j, p in enumerate(ps):
            defects = np.empty(n)
            for t, (probs, before, after, _) in enumerate(rows):
                defects[t] = float(probs @ grouplaw.glog(spec, after[:, j])) - grouplaw.glog(spec, before[j])
            k = negativity.monotonicity_bound_k(spec, p, bp.dim)
            max_defect = float(defects.max())
            results.append({
                "spec": spec.to_dict(),
                "p": negativity.encode_p(p),
                "max_defect": max_defect,
                "mean_defect": float(defects.mean()),
                "bound_k": k,
                "violations": int(np.sum(defects > k + DEFECT_TOL)),
                "pass": bool(max_defect <= k + DEFECT_TOL),
            })
    lemma = []
    for j, p in enumerate(ps):
        excess = np.array([float(probs @ after[:, j]) - tn for probs, _, after, tn in rows])
        lemma.append({
            "p": negativity.encode_p(p),
            "max_excess": float(excess.max()),
            "pass": bool(excess.max() <= DEFECT_TOL),
        })
    passed = all(r["pass"] for r in results) and all(r["pass"] for r in lemma)
    return {"config": config.to_dict(), "monotonicity": results, "lemma": lemma, "passed": passed}


def campaign_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
