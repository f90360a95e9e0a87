"""Reference and random bipartite states.

Each generator returns ``(rho, bp)``. Random generators take a ``seed`` that
is anything accepted by :func:`numpy.random.default_rng`, including an
existing ``Generator``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidParameter
from .linops import Bipartition

KINDS = ("bell", "werner", "isotropic", "maximally_mixed", "ginibre", "random_pure",
         "random_separable")


def balanced_bipartition(N: int) -> Bipartition:
    """Split ``N`` as ``d1 * d2`` with ``d1`` the largest divisor not above ``sqrt(N)``."""
    if N < 1:
        raise InvalidParameter(f"dimension must be positive, got {N}")
    d1 = max(d for d in range(1, math.isqrt(N) + 1) if N % d == 0)
    return Bipartition(d1, N // d1)


def random_ket(N: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return v / np.linalg.norm(v)


def max_entangled_ket(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return v


def bell() -> tuple[np.ndarray, Bipartition]:
    """``|Phi+><Phi+|`` with ``|Phi+> = (|00> + |11>)/sqrt 2``."""
    v = max_entangled_ket(2)
    return np.outer(v, v.conj()), Bipartition(2, 2)


def werner(w: float) -> tuple[np.ndarray, Bipartition]:
    """Two-qubit ``w * Bell + (1 - w) * I/4``; NPT exactly for ``w > 1/3``."""
    if not 0 <= w <= 1:
        raise InvalidParameter(f"Werner weight must be in [0, 1], got {w}")
    b, bp = bell()
    return w * b + (1.0 - w) * np.eye(4) / 4.0, bp


def isotropic(f: float, d: int) -> tuple[np.ndarray, Bipartition]:
    """``f |Phi_d><Phi_d| + (1-f) (I - |Phi_d><Phi_d|)/(d^2 - 1)`` on ``d x d``."""
    if not 0 <= f <= 1:
        raise InvalidParameter(f"isotropic fidelity must be in [0, 1], got {f}")
    if d < 2:
        raise InvalidParameter(f"local dimension must be at least 2, got {d}")
    v = max_entangled_ket(d)
    P = np.outer(v, v.conj())
    rho = f * P + (1.0 - f) * (np.eye(d * d) - P) / (d * d - 1)
    return rho, Bipartition(d, d)


def maximally_mixed(N: int, bp: Bipartition | None = None) -> tuple[np.ndarray, Bipartition]:
    bp = bp or balanced_bipartition(N)
    if bp.dim != N:
        raise InvalidParameter(f"bipartition {bp} does not match N={N}")
    return np.eye(N, dtype=complex) / N, bp


def ginibre(N: int, rank: int | None = None, seed=None,
            bp: Bipartition | None = None) -> tuple[np.ndarray, Bipartition]:
    """Induced-measure random state ``X X^dagger / tr(X X^dagger)``, ``X`` complex Gaussian ``N x rank``."""
    rank = N if rank is None else rank
    if not 1 <= rank <= N:
        raise InvalidParameter(f"rank must be in [1, {N}], got {rank}")
    bp = bp or balanced_bipartition(N)
    if bp.dim != N:
        raise InvalidParameter(f"bipartition {bp} does not match N={N}")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real, bp


def random_pure(N: int, seed=None, bp: Bipartition | None = None) -> tuple[np.ndarray, Bipartition]:
    bp = bp or balanced_bipartition(N)
    if bp.dim != N:
        raise InvalidParameter(f"bipartition {bp} does not match N={N}")
    v = random_ket(N, seed)
    return np.outer(v, v.conj()), bp


def random_separable(d1: int, d2: int, k_terms: int = 8, seed=None) -> tuple[np.ndarray, Bipartition]:
    """Convex mixture of ``k_terms`` random product pure states with random weights."""
    if k_terms < 1:
        raise InvalidParameter(f"k_terms must be positive, got {k_terms}")
    rng = np.random.default_rng(seed)
    weights = rng.random(k_terms) + 1e-3
    weights /= weights.sum()
    rho = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for wk in weights:
        v = np.kron(random_ket(d1, rng), random_ket(d2, rng))
        rho += wk * np.outer(v, v.conj())
    return rho, Bipartition(d1, d2)


@dataclass(frozen=True)
class StateRecipe:
    """Declarative description of a state; see :func:`generate`."""

    kind: str
    w: float | None = None
    f: float | None = None
    d: int | None = None
    N: int | None = None
    rank: int | None = None
    d1: int | None = None
    d2: int | None = None
    k_terms: int = 8
    seed: int | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def generate(recipe: StateRecipe) -> tuple[np.ndarray, Bipartition]:
    """Build the state a recipe describes.

    Raises
    ------
    InvalidParameter
        If the kind is unknown or a required parameter is missing or out of range.
    """
    kind = recipe.kind.lower()
    bp = Bipartition(recipe.d1, recipe.d2) if recipe.d1 and recipe.d2 else None

    def need(name):
        value = getattr(recipe, name)
        if value is None:
            if name == "N" and bp is not None:
                return bp.dim
            raise InvalidParameter(f"recipe {kind!r} requires {name!r}")
        return value

    if kind == "bell":
        return bell()
    if kind == "werner":
        return werner(need("w"))
    if kind == "isotropic":
        return isotropic(need("f"), need("d"))
    if kind == "maximally_mixed":
        return maximally_mixed(need("N"), bp)
    if kind == "ginibre":
        return ginibre(need("N"), recipe.rank, recipe.seed, bp)
    if kind == "random_pure":
        return random_pure(need("N"), recipe.seed, bp)
    if kind == "random_separable":
        return random_separable(need("d1"), need("d2"), recipe.k_terms, recipe.seed)
    raise InvalidParameter(f"unknown state kind {recipe.kind!r}; expected one of {KINDS}")
