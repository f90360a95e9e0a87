"""Exact truncated formal power series over the rationals.

Series are truncated at total degree ``T``: every coefficient of degree at
most ``T`` is kept as a :class:`fractions.Fraction`, everything above is
discarded. The univariate :class:`RationalSeries` holds group-logarithm
expansions such as ``F(s) = s + sum b_i s^(i+1)/(i+1)`` and their
compositional inverses; :class:`RationalSeries2` holds formal group laws
``Phi(x, y)``. Checking associativity needs three variables, so both are
thin views over :class:`MultiSeries`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import InvalidParameter, NonzeroConstantTerm, NotDeltaForm, UnsupportedFamily
from .grouplaw import ADDITIVE, TSALLIS, GroupLogSpec

DEFAULT_ORDER = 8
MAX_ORDER = 16


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or ``"p/q"`` string.

    Floats go through their shortest repr, so ``1.1`` becomes ``11/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"not a rational number: {value!r}") from exc


def _check_order(order: int) -> int:
    if int(order) != order or not 0 <= order <= MAX_ORDER:
        raise InvalidParameter(f"truncation order must be an integer in [0, {MAX_ORDER}], got {order}")
    return int(order)


class MultiSeries:
    """Truncated series in ``nvars`` variables with exact rational coefficients."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Mapping[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        self.order = _check_order(order)
        self.coeffs: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise InvalidParameter(f"exponent {exps} does not have {nvars} entries")
            c = as_fraction(c)
            if c and sum(exps) <= self.order:
                self.coeffs[exps] = c

    # -- construction -----------------------------------------------------------

    @classmethod
    def variable(cls, nvars: int, index: int, order: int) -> "MultiSeries":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, order, {tuple(exps): 1})

    @classmethod
    def constant(cls, nvars: int, value, order: int) -> "MultiSeries":
        return cls(nvars, order, {(0,) * nvars: value})

    def _new(self, coeffs) -> "MultiSeries":
        return MultiSeries(self.nvars, self.order, coeffs)

    # -- arithmetic -------------------------------------------------------------

    def _check_compatible(self, other: "MultiSeries"):
        if other.nvars != self.nvars:
            raise InvalidParameter("series have different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.nvars, other, self.order)
        self._check_compatible(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return MultiSeries(self.nvars, min(self.order, other.order), out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            k = as_fraction(other)
            return self._new({e: k * c for e, c in self.coeffs.items()})
        self._check_compatible(other)
        order = min(self.order, other.order)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiSeries(self.nvars, order, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.nvars, self.order, self.coeffs) == (other.nvars, other.order, other.coeffs)

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.coeffs.items())))

    def __getitem__(self, exps) -> Fraction:
        if isinstance(exps, int):
            exps = (exps,)
        return self.coeffs.get(tuple(exps), Fraction(0))

    def truncate(self, order: int) -> "MultiSeries":
        return MultiSeries(self.nvars, min(self.order, order), self.coeffs)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def homogeneous(self, degree: int) -> dict[tuple[int, ...], Fraction]:
        return {e: c for e, c in self.coeffs.items() if sum(e) == degree}

    def lowest_nonzero_degree(self) -> int | None:
        return min((sum(e) for e in self.coeffs), default=None)

    def substitute(self, args: Sequence["MultiSeries"]) -> "MultiSeries":
        """``self(args[0], ..., args[k-1])``; every argument needs zero constant term."""
        if len(args) != self.nvars:
            raise InvalidParameter(f"expected {self.nvars} arguments, got {len(args)}")
        if any(a.constant_term for a in args):
            raise NonzeroConstantTerm("substituted series must have zero constant term")
        target = args[0]
        for a in args[1:]:
            target._check_compatible(a)
        order = min([self.order] + [a.order for a in args])
        one = MultiSeries.constant(target.nvars, 1, order)
        powers = []
        for a in args:
            a = a.truncate(order)
            pw = [one]
            max_exp = max((e[len(powers)] for e in self.coeffs), default=0)
            for _ in range(max_exp):
                pw.append(pw[-1] * a)
            powers.append(pw)
        out = MultiSeries(target.nvars, order)
        for exps, c in self.coeffs.items():
            term = one * c
            for i, k in enumerate(exps):
                if k:
                    term = term * powers[i][k]
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        point = [as_fraction(v) for v in point]
        return sum((c * math.prod(x ** k for x, k in zip(point, e)) for e, c in self.coeffs.items()),
                   Fraction(0))

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, coeffs={self.coeffs!r})"


class RationalSeries(MultiSeries):
    """Univariate truncated series ``c_0 + c_1 s + ... + c_T s^T``."""

    def __init__(self, coeffs: Iterable | Mapping = (), order: int | None = None):
        if isinstance(coeffs, Mapping):
            items = {(k if isinstance(k, tuple) else (k,)): v for k, v in coeffs.items()}
        else:
            coeffs = list(coeffs)
            items = {(k,): v for k, v in enumerate(coeffs)}
            if order is None:
                order = max(len(coeffs) - 1, 0)
        if order is None:
            order = max((e[0] for e in items), default=0)
        super().__init__(1, order, items)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "RationalSeries":
        return cls({1: 1}, order)

    @classmethod
    def wrap(cls, s: MultiSeries) -> "RationalSeries":
        return cls(s.coeffs, s.order)

    def _new(self, coeffs):
        return RationalSeries(coeffs, self.order)

    def coefficient_list(self) -> list[Fraction]:
        return [self[k] for k in range(self.order + 1)]

    @property
    def delta_form(self) -> bool:
        return self.order >= 1 and self[0] == 0 and self[1] == 1

    def __call__(self, *args):
        if len(args) == 1 and isinstance(args[0], MultiSeries):
            return self.substitute(args)
        return self.evaluate(args)


class RationalSeries2(MultiSeries):
    """Bivariate truncated series with coefficients ``c[i, j]``, ``i + j <= T``."""

    def __init__(self, coeffs: Mapping | None = None, order: int = DEFAULT_ORDER):
        super().__init__(2, order, coeffs or {})

    @classmethod
    def wrap(cls, s: MultiSeries) -> "RationalSeries2":
        return cls(s.coeffs, s.order)

    def _new(self, coeffs):
        return RationalSeries2(coeffs, self.order)

    def table(self) -> list[list[Fraction]]:
        """``table[i][j] = c[i, j]`` for ``i + j <= T``."""
        return [[self[i, j] for j in range(self.order + 1 - i)] for i in range(self.order + 1)]

    def swapped(self) -> "RationalSeries2":
        return RationalSeries2({(j, i): c for (i, j), c in self.coeffs.items()}, self.order)

    def __call__(self, x, y):
        if isinstance(x, MultiSeries):
            return self.substitute([x, y])
        return self.evaluate([x, y])


def _vars(nvars: int, order: int) -> list[MultiSeries]:
    return [MultiSeries.variable(nvars, i, order) for i in range(nvars)]


# -- univariate operations ---------------------------------------------------------------

def compose(f: RationalSeries, g: RationalSeries) -> RationalSeries:
    """``f(g(s))`` truncated at ``min(order_f, order_g)``.

    Raises
    ------
    NonzeroConstantTerm
        If ``g(0) != 0``.
    """
    return RationalSeries.wrap(f.substitute([g]))


def compositional_inverse(f: RationalSeries) -> RationalSeries:
    """The series ``g`` with ``f(g(t)) = t`` to degree ``T``.

    Solved degree by degree: since ``f = s + O(s^2)``, the degree-``n``
    coefficient of ``f(g)`` depends on ``g_n`` only through ``+g_n``.

    Raises
    ------
    NotDeltaForm
        If ``f`` is not ``s + O(s^2)``.
    """
    if not f.delta_form:
        raise NotDeltaForm("compositional inverse needs a series of the form s + O(s^2)")
    T = f.order
    g = {1: Fraction(1)}
    for n in range(2, T + 1):
        residual = compose(f, RationalSeries(g, n))[n]
        g[n] = -residual
    return RationalSeries(g, T)


def delta_series(b: Sequence, order: int | None = None) -> RationalSeries:
    """``F(s) = s + sum_i b_i s^(i+1)/(i+1)`` for ``b = [b_1, b_2, ...]``."""
    b = [as_fraction(v) for v in b]
    order = len(b) + 1 if order is None else _check_order(order)
    coeffs = {1: 1}
    for i, bi in enumerate(b, start=1):
        if i + 1 <= order:
            coeffs[i + 1] = bi / (i + 1)
    return RationalSeries(coeffs, order)


def delta_coefficients(g: RationalSeries) -> list[Fraction]:
    """Inverse of :func:`delta_series`: ``a_k = (k+1) * g_{k+1}``."""
    return [(k + 1) * g[k + 1] for k in range(1, g.order)]


def glog_taylor(spec: GroupLogSpec, order: int = DEFAULT_ORDER) -> RationalSeries:
    """Taylor series of ``G`` at 0.

    The q-logarithm's ``G(t) = (e^((1-q)t) - 1)/(1-q)`` expands to
    ``sum_k (1-q)^(k-1) t^k / k!``; ``q`` is read as an exact rational.

    Raises
    ------
    UnsupportedFamily
        For custom specs, which carry no exact expansion.
    """
    order = _check_order(order)
    if spec.family == ADDITIVE:
        return RationalSeries.identity(order)
    if spec.family == TSALLIS:
        a = 1 - as_fraction(spec.q)
        return RationalSeries({k: a ** (k - 1) / math.factorial(k) for k in range(1, order + 1)}, order)
    raise UnsupportedFamily(f"no exact Taylor series for family {spec.family!r}")


# -- formal group laws ----------------------------------------------------------------------

def lazard_law(g: RationalSeries) -> RationalSeries2:
    """``Phi(x, y) = g(g^{-1}(x) + g^{-1}(y))`` to total degree ``T``."""
    if not g.delta_form:
        raise NotDeltaForm("Lazard law needs a series of the form t + O(t^2)")
    ginv = compositional_inverse(g)
    x, y = _vars(2, g.order)
    inner = ginv.substitute([x]) + ginv.substitute([y])
    return RationalSeries2.wrap(g.substitute([inner]))


def _first_failure(diff: MultiSeries) -> int | None:
    return diff.lowest_nonzero_degree()


class FGLReport(NamedTuple):
    unit: bool
    associativity: bool
    commutativity: bool
    unit_failure_degree: int | None
    associativity_failure_degree: int | None
    commutativity_failure_degree: int | None
    inverse: RationalSeries | None

    @property
    def passed(self) -> bool:
        return self.unit and self.associativity

    def to_dict(self) -> dict:
        return {
            "unit": self.unit,
            "associativity": self.associativity,
            "commutativity": self.commutativity,
            "unit_failure_degree": self.unit_failure_degree,
            "associativity_failure_degree": self.associativity_failure_degree,
            "commutativity_failure_degree": self.commutativity_failure_degree,
            "inverse": None if self.inverse is None else [str(c) for c in self.inverse.coefficient_list()],
        }


def formal_inverse(phi: RationalSeries2) -> RationalSeries:
    """The series ``phi_inv(x)`` with ``Phi(x, phi_inv(x)) = 0``, assuming ``Phi = x + y + ...``."""
    T = phi.order
    x = RationalSeries.identity(T)
    inv = {1: Fraction(-1)}
    for n in range(2, T + 1):
        residual = phi.substitute([x.truncate(n), RationalSeries(inv, n)])[n]
        inv[n] = -residual
    return RationalSeries(inv, T)


def verify_fgl_axioms(phi: RationalSeries2) -> FGLReport:
    """Exact coefficient checks of the formal group law axioms to degree ``T``.

    Checks ``Phi(x, 0) = Phi(0, x) = x``, associativity and commutativity,
    recording the lowest degree at which each fails. The formal inverse is
    computed whenever the unit law holds.
    """
    T = phi.order
    x1 = RationalSeries.identity(T)
    unit_diff = [
        RationalSeries({i: c for (i, j), c in phi.coeffs.items() if j == 0}, T) - x1,
        RationalSeries({j: c for (i, j), c in phi.coeffs.items() if i == 0}, T) - x1,
    ]
    unit_deg = min((d for d in (_first_failure(u) for u in unit_diff) if d is not None), default=None)

    X, Y, Z = _vars(3, T)
    P = MultiSeries(3, T, {(i, j, 0): c for (i, j), c in phi.coeffs.items()})
    left = P.substitute([P.substitute([X, Y, Z]), Z, Z * 0])
    right = P.substitute([X, P.substitute([Y, Z, Z * 0]), Z * 0])
    assoc_deg = _first_failure(left - right)
    comm_deg = _first_failure(phi - phi.swapped())
    inverse = formal_inverse(phi) if unit_deg is None else None
    return FGLReport(unit_deg is None, assoc_deg is None, comm_deg is None,
                     unit_deg, assoc_deg, comm_deg, inverse)


class RingReport(NamedTuple):
    associativity: bool
    left_distributivity: bool
    right_distributivity: bool
    commutativity: bool
    associativity_failure_degree: int | None
    left_distributivity_failure_degree: int | None
    right_distributivity_failure_degree: int | None
    commutativity_failure_degree: int | None

    @property
    def passed(self) -> bool:
        return self.associativity and self.left_distributivity and self.right_distributivity

    def to_dict(self) -> dict:
        return dict(self._asdict())


def verify_formal_ring(phi: RationalSeries2, psi: RationalSeries2) -> RingReport:
    """Exact checks that ``Psi`` is associative and distributes over ``Phi``.

    Left law ``Psi(x, Phi(y, z)) = Phi(Psi(x, y), Psi(x, z))``; right law
    ``Psi(Phi(x, y), z) = Phi(Psi(x, z), Psi(y, z))``. Commutativity of
    ``Psi`` is reported but not required.
    """
    T = min(phi.order, psi.order)
    X, Y, Z = _vars(3, T)
    zero = Z * 0
    F = MultiSeries(3, T, {(i, j, 0): c for (i, j), c in phi.coeffs.items()})
    S = MultiSeries(3, T, {(i, j, 0): c for (i, j), c in psi.coeffs.items()})

    def phi3(a, b):
        return F.substitute([a, b, zero])

    def psi3(a, b):
        return S.substitute([a, b, zero])

    assoc = _first_failure(psi3(psi3(X, Y), Z) - psi3(X, psi3(Y, Z)))
    left = _first_failure(psi3(X, phi3(Y, Z)) - phi3(psi3(X, Y), psi3(X, Z)))
    right = _first_failure(psi3(phi3(X, Y), Z) - phi3(psi3(X, Z), psi3(Y, Z)))
    comm = _first_failure(psi.truncate(T) - psi.swapped().truncate(T))
    return RingReport(assoc is None, left is None, right is None, comm is None,
                      assoc, left, right, comm)


# -- serialisation ---------------------------------------------------------------------------

def series_to_strings(s: RationalSeries) -> list[str]:
    return [str(c) for c in s.coefficient_list()]


def table_to_strings(phi: RationalSeries2) -> list[list[str]]:
    return [[str(c) for c in row] for row in phi.table()]
