import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neglab import grouplaw as gl
from neglab.errors import DomainError, InvalidParameter

import oracles

SPECS = [gl.additive(), gl.tsallis(0.5), gl.tsallis(1.5), gl.tsallis(2), gl.tsallis(5)]
SPEC_IDS = [str(s) for s in SPECS]


def arcsinh_spec():
    return gl.custom(np.arcsinh, np.sinh, name="arcsinh")


def test_glog_examples():
    assert gl.glog(gl.additive(), math.e) == pytest.approx(1.0)
    assert gl.glog(gl.tsallis(2), 2) == pytest.approx(0.5)
    x = 3.7
    assert abs(gl.glog(gl.tsallis(1 + 1e-6), x) - math.log(x)) < 1e-4


def test_glog_of_one_is_zero():
    for spec in SPECS:
        assert gl.glog(spec, 1.0) == 0


def test_glog_domain():
    with pytest.raises(DomainError):
        gl.glog(gl.additive(), 0.0)
    with pytest.raises(DomainError):
        gl.glog(gl.tsallis(2), -1.0)


def test_gexp_examples():
    assert gl.gexp(gl.additive(), 0.0) == 1.0
    for q in (0.5, 1.5, 2.0, 5.0):
        x = 0.13
        assert gl.gexp(gl.tsallis(q), x) == pytest.approx((1 + (1 - q) * x) ** (1 / (1 - q)), rel=1e-12)


@pytest.mark.parametrize("spec", SPECS + [arcsinh_spec()], ids=SPEC_IDS + ["arcsinh"])
def test_gexp_inverts_glog(spec):
    assert gl.gexp(spec, gl.glog(spec, 3.7)) == pytest.approx(3.7, rel=1e-9)


def test_gexp_domain():
    # q = 2 needs 1 - y > 0
    with pytest.raises(DomainError):
        gl.gexp(gl.tsallis(2), 1.0)


def test_group_law_examples():
    assert gl.group_law(gl.additive(), 0.3, -1.2) == pytest.approx(-0.9)
    assert gl.group_law(gl.tsallis(2), 0.5, 0.5) == pytest.approx(0.75)
    rng = np.random.default_rng(1)
    for spec in SPECS:
        for x in gl.glog(spec, np.exp(rng.uniform(-2, 2, 10))):
            assert gl.group_law(spec, x, 0.0) == pytest.approx(x, abs=1e-12)


def test_group_law_tsallis_q2_one_one():
    assert gl.group_law(gl.tsallis(2), 1, 1) == 1.0


@pytest.mark.parametrize("q", [0.5, 1.5, 2, 5])
def test_group_law_tsallis_closed_form(q):
    spec = gl.tsallis(q)
    rng = np.random.default_rng(7)
    for u, v in np.exp(rng.uniform(-2, 2, (50, 2))):
        x, y = gl.glog(spec, u), gl.glog(spec, v)
        induced = float(spec.forward(spec.inverse(x) + spec.inverse(y)))
        assert abs(gl.group_law(spec, x, y) - induced) <= 1e-10 * max(1, abs(x), abs(y)) ** 2


@pytest.mark.parametrize("spec", SPECS + [arcsinh_spec()], ids=SPEC_IDS + ["arcsinh"])
def test_homomorphism(spec):
    rng = np.random.default_rng(3)
    for u, v in np.exp(rng.uniform(-2, 2, (100, 2))):
        lhs = gl.glog(spec, u * v)
        rhs = gl.group_law(spec, gl.glog(spec, u), gl.glog(spec, v))
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("q", [0.5, 1.5, 2, 5])
def test_tsallis_closed_matches_composed(q):
    spec = gl.tsallis(q)
    for x in np.geomspace(0.05, 20, 50):
        assert gl.glog(spec, x) == pytest.approx(float(spec.forward(math.log(x))), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=SPEC_IDS)
def test_glog_strictly_increasing(spec):
    xs = np.geomspace(1e-3, 1e3, 500)
    assert np.all(np.diff(gl.glog(spec, xs)) > 0)


def test_axioms_additive_exact():
    rep = gl.check_composability_axioms(gl.additive(), 200, seed=0)
    assert rep.symmetry == 0 and rep.null == 0
    assert rep.associativity <= 1e-15
    assert rep.passed


@pytest.mark.parametrize("spec", SPECS[1:] + [arcsinh_spec()], ids=SPEC_IDS[1:] + ["arcsinh"])
def test_axioms_builtin(spec):
    assert gl.check_composability_axioms(spec, 300, seed=1).passed


def test_axioms_flag_non_associative_law():
    # symmetric, null-composable, but (x*y)-terms do not compose associatively
    rep = gl.check_composability_axioms(lambda x, y: x + y + x * y * (x + y), 200, seed=2)
    assert rep.symmetry <= 1e-12 and rep.null == 0
    assert rep.associativity > 1e-3
    assert not rep.passed


def test_subadditivity_examples():
    assert gl.subadditivity_defect(gl.additive(), 2.5, 7.0) == pytest.approx(0, abs=1e-14)
    # log_q(xy) - log_q x - log_q y = (1-q) log_q x log_q y; at q=2, x=y=2 that is -(1/2)^2
    assert gl.subadditivity_defect(gl.tsallis(2), 2, 2) == pytest.approx(-0.25)
    assert gl.subadditivity_defect(gl.tsallis(3), 1, 5.0) == pytest.approx(0, abs=1e-15)
    with pytest.raises(DomainError):
        gl.subadditivity_defect(gl.tsallis(2), 0.5, 2)


@pytest.mark.parametrize("q", [1.1, 2, 5])
@settings(max_examples=80, deadline=None)
@given(x=st.floats(1, 1e3), y=st.floats(1, 1e3))
def test_subadditive_on_upper_quadrant(q, x, y):
    assert gl.subadditivity_defect(gl.tsallis(q), x, y) <= 1e-12


def test_subadditive_flags():
    assert gl.additive().subadditive
    assert gl.tsallis(2).subadditive
    assert not gl.tsallis(0.5).subadditive


def test_custom_validation_rejects_convex():
    with pytest.raises(InvalidParameter):
        # glog(x) = (x^2 - 1)/2 is convex
        gl.custom(lambda t: np.expm1(2 * t) / 2, lambda x: np.log1p(2 * x) / 2)
    with pytest.raises(InvalidParameter):
        gl.custom(lambda t: t + 1, lambda x: x - 1)
    with pytest.raises(InvalidParameter):
        gl.custom(lambda t: t, lambda x: 2 * x)


def test_spec_encoding():
    assert gl.from_dict({"family": "tsallis", "q": 2.0}) == gl.tsallis(2)
    assert gl.from_dict(gl.additive().to_dict()) == gl.additive()
    assert gl.parse_spec("tsallis:1.5") == gl.tsallis(1.5)
    assert gl.parse_spec("additive") == gl.additive()
    for bad in ("tsallis", "tsallis:1", "renyi:2", "tsallis:x"):
        with pytest.raises(InvalidParameter):
            gl.parse_spec(bad)


def test_z_entropy_examples():
    for alpha in (0.5, 2, 3):
        assert gl.z_entropy(gl.additive(), alpha, np.full(5, 0.2)) == pytest.approx(math.log(5))
    assert gl.z_entropy(gl.additive(), 2, [0.5, 0.5]) == pytest.approx(math.log(2))
    # glog_2(1/2) = (2 - 1)/(-1) = -1, divided by (1 - 2)
    assert gl.z_entropy(gl.tsallis(2), 2, [0.5, 0.5]) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        gl.z_entropy(gl.additive(), 1, [0.5, 0.5])


def test_relative_z_examples():
    rng = np.random.default_rng(5)
    P = rng.dirichlet(np.ones(4))
    for spec in SPECS:
        assert gl.relative_z(spec, 2.0, P, P) == pytest.approx(0, abs=1e-14)
    assert gl.relative_z(gl.additive(), 2, [0.5, 0.5], [0.25, 0.75]) == pytest.approx(math.log(4 / 3))
    for _ in range(20):
        P, Q = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
        alpha = rng.uniform(0.1, 4)
        if abs(alpha - 1) < 1e-3:
            continue
        assert gl.relative_z(gl.additive(), alpha, P, Q) == pytest.approx(oracles.renyi_divergence(alpha, P, Q),
                                                                          rel=1e-10, abs=1e-13)
    with pytest.raises(DomainError):
        gl.relative_z(gl.additive(), 2, [1.0, 0.0], [0.5, 0.5])
    with pytest.raises(DomainError):
        gl.relative_z(gl.additive(), 1, [0.5, 0.5], [0.5, 0.5])
