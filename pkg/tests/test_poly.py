import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pdcount.errors import (
    DegreeDominanceError,
    InterpolationError,
    NonInvertibleDivisor,
)
from pdcount.poly import (
    MultiPoly,
    Poly1,
    TruncatedPoly,
    binomial_power_trunc,
    grid_interpolate,
    interpolate_univariate,
    sliced_interpolate,
    solve_linear,
    substitute_ell,
    trunc_div,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def poly_mul_trunc(a, b, k):
    out = [Fraction(0)] * (k + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= k:
                out[i + j] += x * y
    return out


@given(st.lists(fractions, min_size=1, max_size=8), st.lists(fractions, min_size=1, max_size=8), st.integers(0, 7))
def test_trunc_div_round_trip(a, b, k):
    if a[0] == 0:
        a[0] = Fraction(1)
    A = TruncatedPoly.of(a, k)
    B = TruncatedPoly.of(b, k)
    C = TruncatedPoly.of(poly_mul_trunc(A.coeffs, B.coeffs, k), k)
    assert trunc_div(A, C, k) == B


def test_trunc_div_examples():
    one_plus_x = TruncatedPoly.of([1, 1], 3)
    one = TruncatedPoly.of([1], 3)
    assert trunc_div(one_plus_x, one, 3).coeffs == (1, -1, 1, -1)
    with pytest.raises(NonInvertibleDivisor):
        trunc_div(TruncatedPoly.of([0, 1], 2), one, 2)


@given(st.lists(fractions, min_size=0, max_size=7), st.lists(fractions, min_size=7, max_size=7, unique=True))
def test_univariate_interpolation_round_trip(coeffs, xs):
    p = Poly1(coeffs)
    pts = [(x, p(x)) for x in xs[: max(1, len(coeffs))]]
    assert interpolate_univariate(pts) == p


def test_univariate_interpolation_matches_linear_solve():
    xs = [0, 1, 3, 4]
    ys = [2, -1, 5, 7]
    vander = [[Fraction(x) ** i for i in range(4)] for x in xs]
    assert list(interpolate_univariate(zip(xs, ys)).coeffs) == solve_linear(vander, ys)
    with pytest.raises(InterpolationError):
        interpolate_univariate([(1, 2), (1, 3)])


def _random_multi(rng, dims, bounds):
    terms = {}
    for exps in itertools.product(*(range(d + 1) for d in bounds)):
        if rng.random() < 0.6:
            terms[exps] = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
    return MultiPoly([f"x{i + 1}" for i in range(dims)], terms)


@given(st.integers(0, 10**6))
def test_grid_interpolation_round_trip(seed):
    rng = random.Random(seed)
    dims = rng.randint(1, 3)
    bounds = [rng.randint(0, 3) for _ in range(dims)]
    p = _random_multi(rng, dims, bounds)
    axes = [rng.sample(range(-6, 7), d + 1) for d in bounds]
    evals = {pt: p(*pt) for pt in itertools.product(*axes)}
    assert grid_interpolate(evals, bounds) == p


def test_grid_shape_mismatch():
    with pytest.raises(InterpolationError, match="grid shape mismatch"):
        grid_interpolate({(0,): 1, (1,): 2}, [2])


def _dominated(rng, k, n, c):
    """p(X, lam) with deg_lam of the X^s coefficient <= s."""
    terms = {}
    for s in range(n + 1):
        for exps in itertools.product(range(s + 1), repeat=c):
            if sum(exps) <= s and rng.random() < 0.4:
                terms[(s,) + exps] = Fraction(rng.randint(-5, 5))
    return MultiPoly(["X"] + [f"l{i}" for i in range(c)], terms)


@given(st.integers(0, 10**6))
def test_sliced_interpolation_recovers_a_k(seed):
    rng = random.Random(seed)
    c = rng.randint(1, 2)
    k = rng.randint(0, 3)
    n = k + rng.randint(0, 3)
    p = _dominated(rng, k, n, c)
    evals = {
        (x,) + xi: p(x, *xi)
        for x in range(n + 1)
        for xi in itertools.product(range(k + 1), repeat=c)
    }
    got = sliced_interpolate(evals, k, n)
    want = {e[1:]: v for e, v in p.terms.items() if e[0] == k}
    assert got.terms == want


def test_binomial_power_trunc_independent():
    for m in range(6):
        p = Poly1([1])
        for _ in range(m):
            p = p * Poly1([1, 0, 1])
        assert binomial_power_trunc(m, 7).coeffs == tuple(p.coefficient(i) for i in range(8))


@given(st.integers(0, 10**6))
def test_substitute_ell_matches_direct_expansion(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 5)
    terms = {}
    for j in range(k + 1):
        for i in range(j + 1):
            if rng.random() < 0.5:
                terms[(j, i)] = Fraction(rng.randint(-4, 4))
    p = MultiPoly(("X", "ell"), terms)
    direct = Poly1()
    for (j, i), c in p.terms.items():
        direct = direct + (Poly1([0] * j + [1]) * Poly1([-1, 0, -1]) ** i).scale(c)
    got = substitute_ell(p, k)
    assert got.coeffs == tuple(direct.coefficient(t) for t in range(k + 1))


def test_substitute_ell_rejects_dominance_violation():
    with pytest.raises(DegreeDominanceError):
        substitute_ell(MultiPoly(("X", "ell"), {(1, 2): 1}), 3)


def test_multipoly_arithmetic():
    v = ("x", "y")
    a = MultiPoly(v, {(1, 0): 2, (0, 1): 1})
    b = MultiPoly(v, {(1, 0): 1})
    assert (a * b)(3, 5) == a(3, 5) * b(3, 5)
    assert (a - a).is_zero()
    assert (a + b).coefficient((1, 0)) == 3
