"""Independent reference computations used by the tests.

Nothing here imports neglab: each oracle is a deliberately naive route to a
value the library computes another way.
"""

import itertools
import math

import numpy as np


def pt_loops(M, d1, d2):
    """Partial transpose on the second factor by explicit index loops."""
    out = np.empty_like(M)
    for i, j, k, l in itertools.product(range(d1), range(d2), range(d1), range(d2)):
        out[i * d2 + j, k * d2 + l] = M[i * d2 + l, k * d2 + j]
    return out


def eig_spectrum(M):
    """Eigenvalues of a Hermitian matrix via the characteristic-free general solver."""
    w = np.linalg.eigvals(M)
    return np.sort(w.real)[::-1]


def trace_norm(M):
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def schatten_svd(M, p):
    s = np.linalg.svd(M, compute_uv=False)
    if math.isinf(p):
        return float(s.max())
    return float(np.sum(s ** p) ** (1.0 / p))


def bell_dm():
    v = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return np.outer(v, v.conj())


def werner_dm(w):
    return w * bell_dm() + (1 - w) * np.eye(4) / 4


def werner_pt_trace_norm(w):
    """``||rho^G||_1`` of the two-qubit Werner state from the loop-PT eigen-spectrum."""
    return float(np.sum(np.abs(eig_spectrum(pt_loops(werner_dm(w), 2, 2)))))


def permutation_a1b1a2b2_to_a1a2b1b2(a1, b1, a2, b2):
    """Permutation matrix ``P`` with ``P (x_a1 x_b1 x_a2 x_b2) = x_a1 x_a2 x_b1 x_b2``."""
    n = a1 * b1 * a2 * b2
    P = np.zeros((n, n))
    for i, j, k, l in itertools.product(range(a1), range(b1), range(a2), range(b2)):
        src = ((i * b1 + j) * a2 + k) * b2 + l
        dst = ((i * a2 + k) * b1 + j) * b2 + l
        P[dst, src] = 1
    return P


def renyi_divergence(alpha, P, Q):
    P, Q = np.asarray(P, float), np.asarray(Q, float)
    return math.log(sum(p ** alpha * q ** (1 - alpha) for p, q in zip(P, Q))) / (alpha - 1)


def random_density(N, rng, rank=None):
    rank = rank or N
    X = rng.normal(size=(N, rank)) + 1j * rng.normal(size=(N, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_hermitian(N, rng):
    X = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    return X + X.conj().T
