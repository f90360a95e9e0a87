"""Negativity functionals built on the partial-transpose spectrum.

Every functional here is a function of ``||rho^G||_p`` for some Schatten
order ``p``, where ``rho^G`` is the partial transpose on the second factor:

- ``negativity``            ``(||rho^G||_1 - 1) / 2``
- ``log_negativity``        ``ln ||rho^G||_1``
- ``pnorm_group_negativity`` ``glog(||rho^G||_p)`` for a group logarithm
- ``q_negativity``          the Tsallis special case ``(n^(1-q) - 1)/(1-q)``
- ``normalized_pnorm_negativity`` ``ln||rho^G||_p`` shifted by its value on
  the maximally mixed state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import grouplaw, linops
from .errors import DomainError, InvalidParameter, NotAState
from .grouplaw import GroupLogSpec
from .linops import Bipartition

STATE_ATOL = 1e-10
PPT_TOL = 1e-10


class Functional(str, enum.Enum):
    NEGATIVITY = "Negativity"
    LOG_NEGATIVITY = "LogNegativity"
    PNORM_GROUP = "PNormGroup"
    LOG_PNORM = "LogPNorm"
    TRACE_NORM_GROUP = "TraceNormGroup"
    Q_NEGATIVITY = "QNegativity"
    PNORM_Q_NEGATIVITY = "PNormQNegativity"
    NORMALIZED_PNORM = "NormalizedPNorm"


def check_state(rho, bp: Bipartition, atol: float = STATE_ATOL) -> np.ndarray:
    """Return ``rho`` as an array after checking it is a density matrix on ``bp``.

    Raises
    ------
    NotAState
        If ``rho`` is not Hermitian, has an eigenvalue below ``-atol``, or a
        trace further than ``atol`` from 1.
    """
    rho = linops.as_matrix(rho)
    bp.check(rho)
    if not linops.is_hermitian(rho):
        raise NotAState("density matrix must be Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise NotAState(f"trace {tr.real:.12g} differs from 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -atol:
        raise NotAState(f"negative eigenvalue {lam_min:.3e}")
    return rho


def pt_spectrum(rho, bp: Bipartition, validate: bool = True) -> np.ndarray:
    """Eigenvalues of ``rho^G`` in descending order."""
    if validate:
        rho = check_state(rho, bp)
    return linops.hermitian_eigvals(linops.partial_transpose(rho, bp))


def pt_norm(rho, bp: Bipartition, p: float = 1.0) -> float:
    return linops.schatten_norm_from_spectrum(pt_spectrum(rho, bp), p)


def is_ppt(rho, bp: Bipartition, tol: float = PPT_TOL) -> bool:
    return bool(pt_spectrum(rho, bp)[-1] >= -tol)


def negativity(rho, bp: Bipartition) -> float:
    return 0.5 * (pt_norm(rho, bp, 1) - 1.0)


def log_negativity(rho, bp: Bipartition) -> float:
    return grouplaw.glog(grouplaw.additive(), pt_norm(rho, bp, 1))


def pnorm_group_negativity(spec: GroupLogSpec, p: float, rho, bp: Bipartition) -> float:
    """``glog(||rho^G||_p)``; reduces to :func:`log_negativity` at additive, ``p=1``."""
    return grouplaw.glog(spec, pt_norm(rho, bp, p))


def log_pnorm_negativity(p: float, rho, bp: Bipartition) -> float:
    return pnorm_group_negativity(grouplaw.additive(), p, rho, bp)


def trace_norm_group_negativity(spec: GroupLogSpec, rho, bp: Bipartition) -> float:
    return pnorm_group_negativity(spec, 1.0, rho, bp)


def _q_log_of_norm(q: float, n: float) -> float:
    if not q > 1:
        raise DomainError(f"q-negativity is defined for q > 1, got {q}")
    return (n ** (1.0 - q) - 1.0) / (1.0 - q)


def q_negativity(q: float, rho, bp: Bipartition) -> float:
    return _q_log_of_norm(q, pt_norm(rho, bp, 1))


def pnorm_q_negativity(q: float, p: float, rho, bp: Bipartition) -> float:
    return _q_log_of_norm(q, pt_norm(rho, bp, p))


def maximally_mixed_log_norm(p: float, N: int) -> float:
    """``ln ||I/N||_p = ((1-p)/p) ln N``, with ``-ln N`` at ``p = inf``."""
    p = linops.check_order(p)
    if math.isinf(p):
        return -math.log(N)
    return (1.0 - p) / p * math.log(N)


def normalized_pnorm_negativity(p: float, rho, bp: Bipartition) -> float:
    return log_pnorm_negativity(p, rho, bp) - maximally_mixed_log_norm(p, bp.dim)


def norm_ratio_bound(p: float, N: int) -> float:
    """``N^(1 - 1/p)``, the constant in ``||A||_1 <= N^(1-1/p) ||A||_p``."""
    p = linops.check_order(p)
    return float(N) if math.isinf(p) else float(N) ** (1.0 - 1.0 / p)


def monotonicity_bound_k(spec: GroupLogSpec, p: float, N: int) -> float:
    """Average-increase bound ``glog(N^(1-1/p))``; exactly 0 at ``p = 1``."""
    if N < 2:
        raise InvalidParameter(f"dimension must be at least 2, got {N}")
    # + 0.0 folds the -0.0 the q-logarithm yields at p = 1
    return grouplaw.glog(spec, norm_ratio_bound(p, N)) + 0.0


# -- reports ------------------------------------------------------------------

def encode_p(p: float):
    return "inf" if math.isinf(p) else p


def decode_p(value) -> float:
    if isinstance(value, str):
        value = value.strip().lower()
        if value in ("inf", "infinity", "oo"):
            return math.inf
    return linops.check_order(float(value))


@dataclass(frozen=True)
class NegativityReport:
    functional: Functional
    p: float
    spec: GroupLogSpec | None
    value: float
    ppt: bool
    bound_k: float | None = None
    state: str | None = None

    def to_dict(self) -> dict:
        out = {
            "functional": self.functional.value,
            "p": encode_p(self.p),
            "spec": self.spec.to_dict() if self.spec is not None else None,
            "value": self.value,
            "ppt": self.ppt,
            "bound_k": self.bound_k,
        }
        if self.state is not None:
            out["state"] = self.state
        return out


def evaluate(functional, rho, bp: Bipartition, spec: GroupLogSpec | None = None,
             p: float = 1.0, state: str | None = None) -> NegativityReport:
    """Evaluate one functional and wrap it in a :class:`NegativityReport`.

    ``spec`` is needed for the group functionals and must be Tsallis for the
    q-negativities. ``bound_k`` is filled in for the p-norm group families.
    """
    functional = Functional(functional)
    spectrum = pt_spectrum(rho, bp)
    ppt = bool(spectrum[-1] >= -PPT_TOL)
    additive = grouplaw.additive()
    bound_k = None

    if functional in (Functional.NEGATIVITY, Functional.LOG_NEGATIVITY,
                      Functional.TRACE_NORM_GROUP, Functional.Q_NEGATIVITY):
        p = 1.0
    p = linops.check_order(p)
    norm = linops.schatten_norm_from_spectrum(spectrum, p)

    if functional in (Functional.Q_NEGATIVITY, Functional.PNORM_Q_NEGATIVITY):
        if spec is None or spec.family != grouplaw.TSALLIS:
            raise InvalidParameter(f"{functional.value} needs a Tsallis spec")
    elif functional in (Functional.PNORM_GROUP, Functional.TRACE_NORM_GROUP):
        if spec is None:
            raise InvalidParameter(f"{functional.value} needs a group-logarithm spec")
    else:
        spec = additive if functional is not Functional.NEGATIVITY else None

    if functional is Functional.NEGATIVITY:
        value = 0.5 * (norm - 1.0)
    elif functional is Functional.NORMALIZED_PNORM:
        value = math.log(norm) - maximally_mixed_log_norm(p, bp.dim)
    elif functional in (Functional.Q_NEGATIVITY, Functional.PNORM_Q_NEGATIVITY):
        value = _q_log_of_norm(spec.q, norm)
    else:
        value = grouplaw.glog(spec, norm)

    if functional in (Functional.PNORM_GROUP, Functional.TRACE_NORM_GROUP, Functional.LOG_PNORM,
                      Functional.LOG_NEGATIVITY, Functional.Q_NEGATIVITY,
                      Functional.PNORM_Q_NEGATIVITY):
        bound_k = monotonicity_bound_k(spec, p, bp.dim)
    return NegativityReport(functional, p, spec, float(value), ppt, bound_k, state)
