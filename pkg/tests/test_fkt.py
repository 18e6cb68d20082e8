import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from pdcount.brute import brute_perfmatch
from pdcount.errors import InvalidEmbedding, ValidationError
from pdcount.fkt import (
    KasteleynSystem,
    Orientation,
    _pfaffian_rational,
    is_kasteleyn,
    kasteleyn_matrix,
    kasteleyn_orient,
    perfmatch_planar,
    pfaffian,
)
from pdcount.generators import (
    cycle_graph,
    grid_graph,
    random_plane_graph,
    random_points,
    random_rational,
    wheel_graph,
)
from pdcount.plane_graph import PlaneGraph

from conftest import weighted_graph


def test_examples():
    assert perfmatch_planar(grid_graph(4, 4)) == 36
    assert perfmatch_planar(cycle_graph(6)) == 2
    assert perfmatch_planar(cycle_graph(5)) == 0
    edge = PlaneGraph.from_edges(2, [(0, 1, Fraction(-7, 2))], [(1,), (0,)])
    assert perfmatch_planar(edge) == Fraction(-7, 2)
    assert perfmatch_planar(PlaneGraph.from_edges(0, [], [])) == 1


@given(st.integers(0, 10**6))
def test_perfmatch_matches_brute(seed):
    g = weighted_graph(seed, n_max=14, connected=random.Random(seed).random() < 0.7)
    assert perfmatch_planar(g) == brute_perfmatch(g)


@given(st.integers(0, 10**6))
def test_relabel_invariance(seed):
    rng = random.Random(seed)
    g = weighted_graph(seed, n_max=14)
    perm = list(range(g.n))
    rng.shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    rot = [tuple(perm[u] for u in g.rotation[inv[v]]) for v in range(g.n)]
    h = PlaneGraph.from_edges(g.n, [(perm[u], perm[v], w) for u, v, w in g.edges], rot)
    assert perfmatch_planar(h) == perfmatch_planar(g)


def _clockwise_counts(g, pts, orient):
    """Per bounded face: edges directed clockwise around it (geometric test)."""
    out = []
    for f in g.faces():
        area = sum(pts[u][0] * pts[v][1] - pts[v][0] * pts[u][1] for u, v in f.walk)
        if area < -1e-12:
            out.append(sum(1 for u, v in f.walk if orient.forward(u, v)))
    return out


@given(st.integers(0, 10**6))
def test_kasteleyn_orientation_is_odd_clockwise(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 30)
    g = random_plane_graph(n, random.Random(seed + 1))
    pts = random_points(n, random.Random(seed + 1))
    orient = kasteleyn_orient(g)
    assert is_kasteleyn(g, orient)
    assert all(c % 2 == 1 for c in _clockwise_counts(g, pts, orient))


def test_all_sixteen_orientations_of_c4():
    g = cycle_graph(4)
    pts = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    edges = [(u, v) for u, v, _ in g.edges]
    outer = g.outer_face().id
    kasteleyn = 0
    for signs in itertools.product((1, -1), repeat=4):
        orient = Orientation(dict(zip(edges, signs)), (outer,))
        (cw,) = _clockwise_counts(g, pts, orient)
        assert is_kasteleyn(g, orient) == (cw % 2 == 1)
        pf = pfaffian(kasteleyn_matrix(g, orient))
        if cw % 2:
            kasteleyn += 1
            assert abs(pf) == 2
        else:
            assert pf == 0  # the two matchings cancel
    assert kasteleyn == 8


@given(st.integers(0, 10**6))
def test_pfaffian_squared_is_determinant(seed):
    rng = random.Random(seed)
    n = rng.choice((0, 2, 4, 6))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = random_rational(rng)
            m[i][j], m[j][i] = x, -x
    pf = pfaffian(m)
    det = sympy.Matrix(n, n, lambda i, j: sympy.Rational(m[i][j].numerator, m[i][j].denominator)).det()
    assert sympy.Rational(pf.numerator, pf.denominator) ** 2 == det


@given(st.integers(0, 10**6))
def test_modular_and_rational_pfaffians_agree(seed):
    g = weighted_graph(seed, n_max=14)
    if len(g.components) != 1:
        return
    km = kasteleyn_matrix(g, kasteleyn_orient(g))
    assert pfaffian(km) == _pfaffian_rational(km.n, km.entries)


def test_pfaffian_input_validation():
    assert pfaffian([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]) == 0
    with pytest.raises(ValidationError):
        pfaffian([[0, 1], [1, 0]])
    with pytest.raises(ValidationError):
        pfaffian([[0, 1, 2], [-1, 0, 3]])


def test_system_reuses_structure_under_weight_overrides():
    g = grid_graph(3, 4)
    system = KasteleynSystem(g)
    rng = random.Random(9)
    for _ in range(10):
        w = {(u, v): random_rational(rng) for u, v, _ in g.edges}
        assert system.perfmatch(w) == brute_perfmatch(g.with_edge_weights(w))


def test_nonplanar_rotation_rejected():
    edges = list(itertools.combinations(range(5), 2))
    rot = [[u for u in range(5) if u != v] for v in range(5)]
    with pytest.raises(InvalidEmbedding):
        perfmatch_planar(PlaneGraph.from_edges(5, edges, rot))


def test_orientation_requires_connected_graph():
    g = PlaneGraph.from_edges(4, [(0, 1), (2, 3)], [(1,), (0,), (3,), (2,)])
    with pytest.raises(ValidationError):
        kasteleyn_orient(g)
    assert perfmatch_planar(g) == 1


def test_wheel_with_weights():
    g = wheel_graph(5)
    rng = random.Random(2)
    w = {(u, v): random_rational(rng) for u, v, _ in g.edges}
    g = g.with_edge_weights(w)
    assert perfmatch_planar(g) == brute_perfmatch(g)
