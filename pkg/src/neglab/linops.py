"""Dense complex Hermitian linear algebra on bipartite operators.

Matrices are plain square ``numpy`` arrays of dtype ``complex128``. The
bipartition ``H = H_A (x) H_B`` travels alongside as a :class:`Bipartition`.
Partial transposition always acts on the second factor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InvalidOrder, InvalidParameter, NonHermitian

HERMITIAN_ATOL = 1e-12
ZERO_EIG_ATOL = 1e-10


@dataclass(frozen=True)
class Bipartition:
    """Local dimensions ``(d1, d2)`` of a two-party Hilbert space."""

    d1: int
    d2: int

    def __post_init__(self):
        if int(self.d1) != self.d1 or int(self.d2) != self.d2 or self.d1 < 1 or self.d2 < 1:
            raise InvalidParameter(f"local dimensions must be positive integers, got {self.d1, self.d2}")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    def check(self, M: np.ndarray) -> None:
        if M.ndim != 2 or M.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"matrix of shape {M.shape} does not match bipartition {self.d1}x{self.d2}"
            )


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def hermiticity_defect(M) -> float:
    M = as_matrix(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def is_hermitian(M, atol: float = HERMITIAN_ATOL) -> bool:
    return hermiticity_defect(M) <= atol


def _require_hermitian(M, atol: float) -> np.ndarray:
    M = as_matrix(M)
    defect = hermiticity_defect(M)
    if defect > atol:
        raise NonHermitian(f"max |M - M^dagger| = {defect:.3e} exceeds {atol:.1e}")
    return M


def hermitian_eig(M, atol: float = HERMITIAN_ATOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    NonHermitian
        If ``max|M - M^dagger| > atol``.
    """
    M = _require_hermitian(M, atol)
    # symmetrise so tiny anti-Hermitian noise does not leak into the solver
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    return EigenSystem(w[::-1].copy(), V[:, ::-1].copy())


def hermitian_eigvals(M, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    M = _require_hermitian(M, atol)
    return np.linalg.eigvalsh(0.5 * (M + M.conj().T))[::-1].copy()


def positive_negative_parts(M, atol: float = HERMITIAN_ATOL,
                            zero_tol: float = ZERO_EIG_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian ``M`` into ``M = M_plus + M_minus``.

    ``M_plus`` is PSD and ``M_minus`` is NSD, both restrictions of ``M`` to
    its eigenspaces. Eigenvalues with ``|lambda| <= zero_tol`` stay in
    ``M_plus`` with their signed value, so a numerically PPT matrix never
    acquires a spurious negative part.
    """
    w, V = hermitian_eig(M, atol)
    neg = w < -zero_tol
    w_plus = np.where(neg, 0.0, w)
    w_minus = np.where(neg, w, 0.0)
    Mplus = (V * w_plus) @ V.conj().T
    Mminus = (V * w_minus) @ V.conj().T
    return Mplus, Mminus


def _norm_from_values(s: np.ndarray, p: float) -> float:
    if s.size == 0:
        return 0.0
    if math.isinf(p):
        return float(s.max())
    if p == 1:
        return float(s.sum())
    smax = s.max()
    if smax == 0:
        return 0.0
    # scale by the largest value to avoid overflow at large p
    return float(smax * np.sum((s / smax) ** p) ** (1.0 / p))


def check_order(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidOrder(f"Schatten order must satisfy p >= 1, got {p}")
    return p


def schatten_norm_from_spectrum(eigenvalues, p: float) -> float:
    """Schatten p-norm of a Hermitian matrix given its eigenvalues."""
    return _norm_from_values(np.abs(np.asarray(eigenvalues, dtype=float)), check_order(p))


def schatten_norm(M, p: float = 1.0) -> float:
    """Schatten p-norm ``(sum_i s_i^p)^(1/p)``; ``p=np.inf`` gives the operator norm.

    Hermitian inputs use ``|eigenvalues|``, anything else a singular value
    decomposition.
    """
    p = check_order(p)
    M = as_matrix(M)
    if is_hermitian(M):
        s = np.abs(np.linalg.eigvalsh(0.5 * (M + M.conj().T)))
    else:
        s = np.linalg.svd(M, compute_uv=False)
    return _norm_from_values(s, p)


def trace_abs(M) -> float:
    """``tr|M|`` computed as ``tr(M_plus) - tr(M_minus)``."""
    Mplus, Mminus = positive_negative_parts(M)
    return float(np.real(np.trace(Mplus) - np.trace(Mminus)))


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def partial_transpose(M, bp: Bipartition) -> np.ndarray:
    """Transpose on the second tensor factor.

    With composite indices ``(i, j), (k, l)`` the result satisfies
    ``out[(i,j),(k,l)] = M[(i,l),(k,j)]``. Pure index permutation, so applying
    it twice returns ``M`` bit for bit.
    """
    M = as_matrix(M)
    bp.check(M)
    d1, d2 = bp.d1, bp.d2
    T = M.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1)
    return np.ascontiguousarray(T).reshape(d1 * d2, d1 * d2)


def interleave_product(sigma, bp1: Bipartition, tau, bp2: Bipartition) -> tuple[np.ndarray, Bipartition]:
    """``sigma (x) tau`` reordered from ``A1 B1 A2 B2`` to ``(A1 A2)(B1 B2)``.

    Under the returned joint bipartition the partial transpose factorises,
    ``(sigma (x) tau)^G = sigma^G (x) tau^G``.
    """
    sigma, tau = as_matrix(sigma), as_matrix(tau)
    bp1.check(sigma)
    bp2.check(tau)
    a1, b1, a2, b2 = bp1.d1, bp1.d2, bp2.d1, bp2.d2
    P = np.kron(sigma, tau).reshape(a1, b1, a2, b2, a1, b1, a2, b2)
    P = P.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = a1 * b1 * a2 * b2
    return np.ascontiguousarray(P).reshape(n, n), Bipartition(a1 * a2, b1 * b2)


# -- matrix JSON --------------------------------------------------------------

def matrix_to_dict(M, bp: Bipartition) -> dict:
    M = as_matrix(M)
    bp.check(M)
    flat = M.reshape(-1)
    return {
        "dim": int(M.shape[0]),
        "d1": bp.d1,
        "d2": bp.d2,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(data: dict) -> tuple[np.ndarray, Bipartition]:
    """Parse ``{"dim", "d1", "d2", "entries": [[re, im], ...]}``.

    Raises
    ------
    DimensionMismatch
        If the entry count is not ``dim**2`` or ``d1*d2 != dim``.
    """
    try:
        N = int(data["dim"])
        entries = data["entries"]
        d1 = int(data.get("d1", N))
        d2 = int(data.get("d2", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"malformed matrix record: {exc}") from exc
    if N < 1 or len(entries) != N * N:
        raise DimensionMismatch(f"expected {N}*{N} = {N * N} entries, got {len(entries)}")
    if d1 * d2 != N:
        raise DimensionMismatch(f"d1*d2 = {d1 * d2} does not equal dim = {N}")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in entries], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"entries must be [re, im] pairs: {exc}") from exc
    return arr.reshape(N, N), Bipartition(d1, d2)


def dump_matrix(M, bp: Bipartition, **extra) -> str:
    record = matrix_to_dict(M, bp)
    record.update(extra)
    return json.dumps(record, sort_keys=True)


def load_matrix(text: str) -> tuple[np.ndarray, Bipartition]:
    return matrix_from_dict(json.loads(text))
