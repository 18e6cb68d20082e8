"""Exact polynomial toolkit over the rationals.

Dense univariate polynomials, truncated power series, sparse multivariate
polynomials, truncated division, and interpolation on (sliced) grids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DegreeDominanceError, InterpolationError, NonInvertibleDivisor, ValidationError
from .rational import RationalLike, to_rational

ZERO = Fraction(0)


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [to_rational(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly1:
    """Univariate polynomial ``c_0 + c_1 X + ... + c_d X^d`` with trailing zeros trimmed."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __call__(self, x: RationalLike) -> Fraction:
        x = to_rational(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly1") -> "Poly1":
        m = max(len(self.coeffs), len(other.coeffs))
        return Poly1(self.coefficient(i) + other.coefficient(i) for i in range(m))

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + other.scale(-1)

    def __mul__(self, other: "Poly1") -> "Poly1":
        if self.is_zero() or other.is_zero():
            return Poly1()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly1(out)

    def __pow__(self, e: int) -> "Poly1":
        out = Poly1([1])
        for _ in range(e):
            out = out * self
        return out

    def scale(self, c: RationalLike) -> "Poly1":
        c = to_rational(c)
        return Poly1(c * x for x in self.coeffs)

    def truncate(self, k: int) -> "TruncatedPoly":
        return TruncatedPoly.of(self.coeffs, k)

    def __repr__(self) -> str:
        return f"Poly1({[str(c) for c in self.coeffs]})"


@dataclass(frozen=True)
class TruncatedPoly:
    """The truncation ``[p]_k``: exactly ``k + 1`` coefficients ``c_0..c_k``."""

    k: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValidationError("truncation bound must be non-negative")
        if len(self.coeffs) != self.k + 1:
            raise ValidationError(f"[p]_{self.k} needs exactly {self.k + 1} coefficients")

    @classmethod
    def of(cls, coeffs: Iterable[RationalLike], k: int | None = None) -> "TruncatedPoly":
        """Pad with zeros or cut to ``k + 1`` coefficients (``k`` defaults to len - 1)."""
        c = [to_rational(x) for x in coeffs]
        if k is None:
            k = len(c) - 1
        c = (c + [ZERO] * (k + 1))[: k + 1]
        return cls(k, tuple(c))

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i <= self.k else ZERO

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        k = min(self.k, other.k)
        out = [ZERO] * (k + 1)
        for i in range(k + 1):
            a = self.coeffs[i]
            if a:
                for j in range(k + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncatedPoly(k, tuple(out))

    def to_poly(self) -> Poly1:
        return Poly1(self.coeffs)


class MultiPoly:
    """Sparse multivariate polynomial over named indeterminates.

    ``terms`` maps exponent tuples (one entry per variable) to non-zero
    rational coefficients.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], RationalLike] = ()):
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables):
                raise ValidationError("exponent vector length does not match the variables")
            if any(e < 0 for e in exps):
                raise ValidationError("exponents must be non-negative")
            c = to_rational(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def constant(cls, variables: Sequence[str], c: RationalLike) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c: RationalLike = 1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def __call__(self, *point: RationalLike) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        pt = [to_rational(x) for x in point]
        total = ZERO
        for exps, c in self.terms.items():
            term = c
            for x, e in zip(pt, exps):
                if e:
                    term *= x**e
            total += term
        return total

    def _check(self, other: "MultiPoly") -> None:
        if other.variables != self.variables:
            raise ValidationError("polynomials live over different variables")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return MultiPoly(self.variables, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return MultiPoly(self.variables, out)

    def scale(self, c: RationalLike) -> "MultiPoly":
        c = to_rational(c)
        return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"


def solve_linear(matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> list[Fraction]:
    """Solve a square non-singular system exactly by Gaussian elimination."""
    n = len(matrix)
    a = [[to_rational(x) for x in row] + [to_rational(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InterpolationError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row, prow = a[r], a[col]
                for c in range(col, n + 1):
                    row[c] -= f * prow[c]
    x = [ZERO] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n] - sum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / a[r][r]
    return x


def trunc_div(a: TruncatedPoly, c: TruncatedPoly, t: int) -> TruncatedPoly:
    """Return ``b_0..b_t`` with ``[a * b]_t = [c]_t``.

    Forward substitution on the lower-triangular Toeplitz system built from
    ``a``; ``a_0`` must be non-zero.
    """
    if a.k < t or c.k < t:
        raise ValidationError(f"both operands need at least {t + 1} coefficients")
    a0 = a.coeffs[0]
    if a0 == 0:
        raise NonInvertibleDivisor("non-invertible divisor: constant coefficient is 0")
    b: list[Fraction] = []
    for i in range(t + 1):
        s = c.coeffs[i] - sum(a.coeffs[j] * b[i - j] for j in range(1, i + 1))
        b.append(s / a0)
    return TruncatedPoly(t, tuple(b))


def interpolate_univariate(points: Iterable[tuple[RationalLike, RationalLike]]) -> Poly1:
    """The unique polynomial of degree ``< len(points)`` through the points."""
    pts = [(to_rational(x), to_rational(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise InterpolationError("duplicate x-values")
    if not pts:
        return Poly1()
    # Newton divided differences, then expand the Newton form (Horner style)
    coef = [y for _, y in pts]
    m = len(pts)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [coef[-1]]
    for i in range(m - 2, -1, -1):
        # out <- out * (X - xs[i]) + coef[i]
        nxt = [ZERO] * (len(out) + 1)
        for d, c in enumerate(out):
            nxt[d + 1] += c
            nxt[d] -= c * xs[i]
        nxt[0] += coef[i]
        out = nxt
    return Poly1(out)


def _grid_axes(keys: Iterable[tuple], dims: int) -> list[list[Fraction]]:
    axes: list[set] = [set() for _ in range(dims)]
    for key in keys:
        if len(key) != dims:
            raise InterpolationError("grid shape mismatch: inconsistent point dimension")
        for i, x in enumerate(key):
            axes[i].add(to_rational(x))
    return [sorted(a) for a in axes]


def grid_interpolate(
    evals: Mapping[tuple, RationalLike],
    degree_bounds: Sequence[int],
    variables: Sequence[str] | None = None,
) -> MultiPoly:
    """Recover a polynomial with ``deg_{x_i} <= d_i`` from its values on a full grid.

    Interpolates one coordinate at a time with :func:`interpolate_univariate`.
    """
    dims = len(degree_bounds)
    variables = tuple(variables) if variables is not None else tuple(f"x{i + 1}" for i in range(dims))
    if len(variables) != dims:
        raise InterpolationError("grid shape mismatch: variables vs degree bounds")
    table = {tuple(to_rational(x) for x in key): to_rational(v) for key, v in evals.items()}
    axes = _grid_axes(table, dims)
    for i, (axis, d) in enumerate(zip(axes, degree_bounds)):
        if len(axis) != d + 1:
            raise InterpolationError(
                f"grid shape mismatch: axis {i} has {len(axis)} nodes, expected {d + 1}"
            )
    expected = 1
    for axis in axes:
        expected *= len(axis)
    if len(table) != expected or (dims == 0 and len(table) != 1):
        raise InterpolationError("grid shape mismatch: missing grid points")
    # Replace coordinate i by a coefficient index, one axis at a time.
    for i, axis in enumerate(axes):
        groups: dict[tuple, dict[Fraction, Fraction]] = {}
        for key, val in table.items():
            groups.setdefault(key[:i] + key[i + 1 :], {})[key[i]] = val
        new: dict[tuple, Fraction] = {}
        for rest, column in groups.items():
            if len(column) != len(axis):
                raise InterpolationError("grid shape mismatch: missing grid points")
            poly = interpolate_univariate(column.items())
            for e in range(len(axis)):
                new[rest[:i] + (e,) + rest[i:]] = poly.coefficient(e)
        table = new
    return MultiPoly(variables, {tuple(int(e) for e in key): c for key, c in table.items()})


def sliced_interpolate(
    evals: Mapping[tuple, RationalLike],
    k: int,
    n: int,
    variables: Sequence[str] | None = None,
) -> MultiPoly:
    """Coefficient ``a_k`` of ``X^k`` in ``p(X, lambda)``, as a polynomial in ``lambda``.

    ``evals`` maps points ``(x, xi_1, ..., xi_t)`` of ``Xi_0 x Xi'`` to values,
    with ``|Xi_0| = n + 1`` and ``|Xi_i| = k + 1``.  Requires that the
    coefficient of ``X^s`` has total degree at most ``s`` for every ``s``.
    """
    table = {tuple(to_rational(x) for x in key): to_rational(v) for key, v in evals.items()}
    if not table:
        raise InterpolationError("grid shape mismatch: no evaluations")
    dims = len(next(iter(table)))
    if dims < 1:
        raise InterpolationError("grid shape mismatch: missing X coordinate")
    axes = _grid_axes(table, dims)
    if len(axes[0]) != n + 1:
        raise InterpolationError(f"grid shape mismatch: X axis has {len(axes[0])} nodes, expected {n + 1}")
    slices: dict[tuple, list[tuple[Fraction, Fraction]]] = {}
    for key, val in table.items():
        slices.setdefault(key[1:], []).append((key[0], val))
    ak = {}
    for rest, column in slices.items():
        if len(column) != n + 1:
            raise InterpolationError("grid shape mismatch: missing grid points")
        ak[rest] = interpolate_univariate(column).coefficient(k)
    t = dims - 1
    variables = tuple(variables) if variables is not None else tuple(f"lambda{i + 1}" for i in range(t))
    return grid_interpolate(ak, [k] * t, variables)


def binomial_power_trunc(m: int, k: int) -> TruncatedPoly:
    """``[(1 + X^2)^m]_k`` from the binomial coefficients."""
    if m < 0:
        raise ValidationError("exponent must be non-negative")
    return TruncatedPoly(
        k, tuple(Fraction(comb(m, i // 2)) if i % 2 == 0 else ZERO for i in range(k + 1))
    )


def substitute_ell(p: MultiPoly, k: int, x: str = "X", ell: str = "ell") -> TruncatedPoly:
    """``[p(X, -(1 + X^2))]_k`` for ``p`` in ``X`` and ``ell``.

    Every monomial ``ell^i X^j`` must satisfy ``i <= j <= k``; this guarantees
    that dropping the terms of ``p`` above ``X^k`` does not change the result.
    """
    ix, il = p.variables.index(x), p.variables.index(ell)
    out = [ZERO] * (k + 1)
    minus_r = Poly1([-1, 0, -1])
    powers = [Poly1([1])]
    for exps, c in sorted(p.terms.items()):
        others = [e for v, e in enumerate(exps) if v not in (ix, il)]
        if any(others):
            raise ValidationError("p may only involve X and ell")
        i, j = exps[il], exps[ix]
        if not i <= j <= k:
            raise DegreeDominanceError(f"degree dominance violated by monomial ell^{i} X^{j}")
        while len(powers) <= i:
            powers.append(powers[-1] * minus_r)
        for d, a in enumerate(powers[i].coeffs):
            if j + d <= k:
                out[j + d] += c * a
    return TruncatedPoly(k, tuple(out))


def grid_points(axes: Sequence[Sequence[RationalLike]]) -> list[tuple]:
    """Cartesian product of the axes, in lexicographic order."""
    return list(itertools.product(*axes))
