import math

import numpy as np
import pytest

from neglab import grouplaw as gl
from neglab import negativity as neg
from neglab import states
from neglab.errors import DomainError, InvalidOrder, NotAState
from neglab.linops import Bipartition, interleave_product
from neglab.negativity import Functional

import oracles

BP22 = Bipartition(2, 2)
SPECS = [gl.additive(), gl.tsallis(1.5), gl.tsallis(2), gl.tsallis(5)]


@pytest.fixture(scope="module")
def bell_norm():
    return oracles.trace_norm(oracles.pt_loops(oracles.bell_dm(), 2, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(99)


def test_rejects_non_states():
    with pytest.raises(NotAState):
        neg.negativity(np.eye(4), BP22)
    with pytest.raises(NotAState):
        neg.negativity(np.diag([1.5, -0.5, 0, 0]), BP22)


def test_negativity_product_state(rng):
    rho = np.kron(oracles.random_density(2, rng), oracles.random_density(2, rng))
    assert neg.negativity(rho, BP22) == pytest.approx(0, abs=1e-12)


def test_negativity_bell(bell_norm):
    assert bell_norm == pytest.approx(2.0)
    assert neg.negativity(oracles.bell_dm(), BP22) == pytest.approx(0.5 * (bell_norm - 1), abs=1e-12)


def test_negativity_werner_two_thirds():
    w = 2 / 3
    expected = 0.5 * (oracles.werner_pt_trace_norm(w) - 1)
    assert expected == pytest.approx(0.25)
    assert neg.negativity(oracles.werner_dm(w), BP22) == pytest.approx(expected, abs=1e-12)


def test_log_negativity_examples(rng, bell_norm):
    rho, bp = states.random_separable(2, 3, 8, rng)
    assert neg.log_negativity(rho, bp) == pytest.approx(0, abs=1e-9)
    assert neg.log_negativity(oracles.bell_dm(), BP22) == pytest.approx(math.log(bell_norm), abs=1e-12)
    for w in (0.4, 0.7, 0.95):
        assert neg.log_negativity(oracles.werner_dm(w), BP22) == pytest.approx(
            math.log(oracles.werner_pt_trace_norm(w)), abs=1e-12)


def test_pnorm_group_examples(rng):
    assert neg.pnorm_group_negativity(gl.additive(), 1, oracles.bell_dm(), BP22) == pytest.approx(math.log(2))
    omega = np.eye(4) / 4
    assert neg.pnorm_group_negativity(gl.additive(), 2, omega, BP22) == pytest.approx(-math.log(2))
    rho = np.kron(oracles.random_density(2, rng), oracles.random_density(2, rng))
    assert neg.pnorm_group_negativity(gl.tsallis(2), 1, rho, BP22) == pytest.approx(0, abs=1e-12)
    with pytest.raises(InvalidOrder):
        neg.pnorm_group_negativity(gl.additive(), 0.9, omega, BP22)


def test_log_pnorm_examples():
    bell = oracles.bell_dm()
    G = oracles.pt_loops(bell, 2, 2)
    assert neg.log_pnorm_negativity(1, bell, BP22) == pytest.approx(math.log(2))
    assert neg.log_pnorm_negativity(math.inf, bell, BP22) == pytest.approx(
        math.log(np.max(np.abs(oracles.eig_spectrum(G)))))
    assert neg.log_pnorm_negativity(math.inf, bell, BP22) == pytest.approx(math.log(0.5))
    assert neg.log_pnorm_negativity(2, np.eye(4) / 4, BP22) == pytest.approx(-math.log(2))


def test_pnorm_reduces_to_log_negativity(rng):
    for _ in range(10):
        rho = oracles.random_density(6, rng)
        bp = Bipartition(2, 3)
        assert neg.pnorm_group_negativity(gl.additive(), 1, rho, bp) == neg.log_negativity(rho, bp)


def test_trace_norm_group_examples(rng, bell_norm):
    rho, bp = states.random_separable(2, 2, 8, rng)
    for spec in SPECS:
        assert neg.trace_norm_group_negativity(spec, rho, bp) == pytest.approx(0, abs=1e-9)
    q = 2
    assert neg.trace_norm_group_negativity(gl.tsallis(q), oracles.bell_dm(), BP22) == pytest.approx(
        (bell_norm ** (1 - q) - 1) / (1 - q))
    assert neg.trace_norm_group_negativity(gl.tsallis(2), oracles.bell_dm(), BP22) == pytest.approx(0.5)
    assert neg.trace_norm_group_negativity(gl.additive(), oracles.bell_dm(), BP22) == pytest.approx(math.log(2))


def test_q_negativity(rng):
    bell = oracles.bell_dm()
    assert neg.q_negativity(2, bell, BP22) == pytest.approx(0.5)
    assert abs(neg.q_negativity(1 + 1e-6, bell, BP22) - math.log(2)) < 1e-4
    rho = np.kron(oracles.random_density(2, rng), oracles.random_density(2, rng))
    for q in (1.2, 2, 7):
        assert neg.q_negativity(q, rho, BP22) == pytest.approx(0, abs=1e-12)
        assert neg.pnorm_q_negativity(q, 2, bell, BP22) == pytest.approx(
            neg.pnorm_group_negativity(gl.tsallis(q), 2, bell, BP22))
    with pytest.raises(DomainError):
        neg.q_negativity(1.0, bell, BP22)
    with pytest.raises(DomainError):
        neg.pnorm_q_negativity(0.5, 2, bell, BP22)


def test_q_to_one_continuity(rng):
    for _ in range(20):
        rho = oracles.random_density(4, rng)
        assert abs(neg.q_negativity(1 + 1e-6, rho, BP22) - neg.log_negativity(rho, BP22)) <= 1e-4


def test_normalized_examples(rng):
    for _ in range(5):
        rho = oracles.random_density(4, rng)
        assert neg.normalized_pnorm_negativity(1, rho, BP22) == neg.log_negativity(rho, BP22)
    assert neg.normalized_pnorm_negativity(2, np.eye(4) / 4, BP22) == pytest.approx(0, abs=1e-14)
    bell = oracles.bell_dm()
    frob = np.linalg.norm(oracles.pt_loops(bell, 2, 2))
    assert frob == pytest.approx(1.0)
    assert neg.normalized_pnorm_negativity(2, bell, BP22) == pytest.approx(math.log(frob) + math.log(2))


def test_maximally_mixed_log_norm():
    for p in (1, 1.5, 2, 4, math.inf):
        for N in (4, 6, 9):
            direct = math.log(oracles.schatten_svd(np.eye(N) / N, p))
            assert neg.maximally_mixed_log_norm(p, N) == pytest.approx(direct, abs=1e-14)


def test_bound_k_examples():
    for spec in SPECS + [gl.tsallis(0.5)]:
        assert neg.monotonicity_bound_k(spec, 1, 4) == 0.0
    assert neg.monotonicity_bound_k(gl.additive(), 2, 4) == pytest.approx(math.log(2))
    assert neg.monotonicity_bound_k(gl.tsallis(2), 2, 4) == pytest.approx(0.5)
    with pytest.raises(InvalidOrder):
        neg.monotonicity_bound_k(gl.additive(), 0.5, 4)


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, math.inf])
@pytest.mark.parametrize("spec", SPECS + [gl.tsallis(0.5)], ids=str)
def test_composability(rng, spec, p):
    P = oracles.permutation_a1b1a2b2_to_a1a2b1b2(2, 2, 2, 3)
    for _ in range(10):
        s = oracles.random_density(4, rng)
        t = oracles.random_density(6, rng)
        joint = P @ np.kron(s, t) @ P.T
        a = neg.pnorm_group_negativity(spec, p, s, BP22)
        b = neg.pnorm_group_negativity(spec, p, t, Bipartition(2, 3))
        value = neg.pnorm_group_negativity(spec, p, joint, Bipartition(4, 6))
        law = gl.group_law(spec, a, b)
        assert value == pytest.approx(law, rel=1e-8, abs=1e-12)
        via_lib, bp = interleave_product(s, BP22, t, Bipartition(2, 3))
        np.testing.assert_array_equal(via_lib, joint)


def test_q_negativity_multiplicative_law(rng):
    q = 3.0
    s, t = oracles.random_density(4, rng), oracles.random_density(4, rng)
    joint, bp = interleave_product(s, BP22, t, BP22)
    a, b = neg.q_negativity(q, s, BP22), neg.q_negativity(q, t, BP22)
    assert neg.q_negativity(q, joint, bp) == pytest.approx(a + b + (1 - q) * a * b, rel=1e-10, abs=1e-12)


def test_ordering_and_bound_chain(rng):
    for _ in range(100):
        bp = Bipartition(2, 3)
        rho = oracles.random_density(6, rng, rank=int(rng.integers(1, 7)))
        L = neg.log_negativity(rho, bp)
        for p in (1.5, 2, 4, math.inf):
            assert neg.log_pnorm_negativity(p, rho, bp) <= L + 1e-10
            assert L <= neg.normalized_pnorm_negativity(p, rho, bp) + 1e-10


def test_positivity_and_ppt_flag(rng):
    for _ in range(50):
        rho = oracles.random_density(4, rng)
        for spec in SPECS:
            value = neg.trace_norm_group_negativity(spec, rho, BP22)
            assert value >= -1e-12
            rep = neg.evaluate(Functional.TRACE_NORM_GROUP, rho, BP22, spec)
            assert rep.ppt == (abs(value) <= 1e-9)


def test_evaluate_report_roundtrip():
    rep = neg.evaluate("PNormGroup", oracles.bell_dm(), BP22, gl.tsallis(2), math.inf)
    d = rep.to_dict()
    assert set(d) == {"functional", "p", "spec", "value", "ppt", "bound_k"}
    assert d["p"] == "inf" and d["spec"] == {"family": "tsallis", "q": 2.0}
    assert d["value"] == pytest.approx((0.5 ** -1 - 1) / -1)
    assert d["ppt"] is False
    assert d["bound_k"] == pytest.approx(neg.monotonicity_bound_k(gl.tsallis(2), math.inf, 4))


@pytest.mark.parametrize("functional", list(Functional))
def test_evaluate_matches_direct(functional):
    rho, bp = states.werner(0.8)
    spec = gl.tsallis(2)
    p = 2.0
    direct = {
        Functional.NEGATIVITY: lambda: neg.negativity(rho, bp),
        Functional.LOG_NEGATIVITY: lambda: neg.log_negativity(rho, bp),
        Functional.PNORM_GROUP: lambda: neg.pnorm_group_negativity(spec, p, rho, bp),
        Functional.LOG_PNORM: lambda: neg.log_pnorm_negativity(p, rho, bp),
        Functional.TRACE_NORM_GROUP: lambda: neg.trace_norm_group_negativity(spec, rho, bp),
        Functional.Q_NEGATIVITY: lambda: neg.q_negativity(spec.q, rho, bp),
        Functional.PNORM_Q_NEGATIVITY: lambda: neg.pnorm_q_negativity(spec.q, p, rho, bp),
        Functional.NORMALIZED_PNORM: lambda: neg.normalized_pnorm_negativity(p, rho, bp),
    }[functional]()
    assert neg.evaluate(functional, rho, bp, spec, p).value == pytest.approx(direct, rel=1e-14, abs=1e-15)
