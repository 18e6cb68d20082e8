import itertools
import random

import pytest
from hypothesis import given, strategies as st

from pdcount.errors import InvalidEmbedding, ValidationError
from pdcount.generators import cycle_graph, empty_graph, grid_graph, random_plane_graph, wheel_graph
from pdcount.plane_graph import (
    EmbeddingBuilder,
    PlaneGraph,
    check,
    delete_vertices,
    drop_zero_weight_edges,
    validate,
)


def triangle():
    return PlaneGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [(1, 2), (2, 0), (0, 1)])


def test_triangle_validates():
    assert validate(triangle()) is None
    assert len(triangle().faces()) == 2


def test_rotation_listing_non_neighbor():
    g = PlaneGraph.from_edges(3, [(0, 1), (1, 2)], [(2,), (0, 2), (1,)])
    assert "rotation/neighbor mismatch" in validate(g)


def test_loop_and_parallel_edges_rejected():
    g = PlaneGraph(2, ((0, 0, 1),), (0, 0), ((0,), ()))
    assert "loop" in validate(g)
    g = PlaneGraph(2, ((0, 1, 1), (0, 1, 1)), (0, 0), ((1,), (0,)))
    assert "parallel" in validate(g)


def test_every_rotation_system_of_k5_fails_euler():
    edges = list(itertools.combinations(range(5), 2))
    per_vertex = []
    for v in range(5):
        others = [u for u in range(5) if u != v]
        # cyclic orders: fix the first neighbour
        per_vertex.append([(others[0],) + p for p in itertools.permutations(others[1:])])
    count = 0
    for rot in itertools.product(*per_vertex):
        g = PlaneGraph.from_edges(5, edges, rot)
        problem = validate(g)
        assert problem is not None and "Euler" in problem
        count += 1
    assert count == 6**5


def test_k33_not_planar_any_rotation_sample():
    edges = [(a, b) for a in range(3) for b in range(3, 6)]
    rng = random.Random(3)
    for _ in range(200):
        rot = []
        for v in range(6):
            nb = [b for b in range(3, 6)] if v < 3 else [0, 1, 2]
            rng.shuffle(nb)
            rot.append(nb)
        assert validate(PlaneGraph.from_edges(6, edges, rot)) is not None


def _face_checks(g):
    faces = g.faces()
    darts = [d for f in faces for d in f.walk]
    all_darts = [(u, v) for u, v, _ in g.edges] + [(v, u) for u, v, _ in g.edges]
    assert sorted(darts) == sorted(all_darts)
    for f in faces:
        if f.walk:
            assert f.id == "%d->%d" % min(f.walk)
            for (a, b), (c, d) in zip(f.walk, f.walk[1:] + f.walk[:1]):
                assert b == c
                assert g.successor((a, b)) == (c, d)
    for comp in g.components:
        cs = set(comp)
        nv = len(comp)
        ne = sum(1 for u, _, _ in g.edges if u in cs)
        nf = sum(1 for f in faces if f.vertices[0] in cs)
        assert nv - ne + nf == 2


@given(st.integers(0, 10**6), st.booleans())
def test_faces_partition_darts_and_satisfy_euler(seed, connected):
    rng = random.Random(seed)
    g = random_plane_graph(rng.randint(1, 20), rng, density=rng.random(), connected=connected)
    assert validate(g) is None
    _face_checks(g)


def test_named_generators():
    for g in (grid_graph(3, 4), wheel_graph(5), cycle_graph(6), empty_graph(3)):
        assert validate(g) is None
        _face_checks(g)
    assert len(grid_graph(3, 4).faces()) == 2 * 3 + 1
    assert [f.id for f in empty_graph(2).faces()] == ["0", "1"]


def test_outer_face_is_geometric():
    g = wheel_graph(6)
    assert set(g.outer_face().vertices) == set(range(1, 7))
    g = grid_graph(3, 3)
    assert len(g.outer_face().walk) == 8


def test_face_lookup_and_errors():
    g = cycle_graph(4)
    f = g.face_of_dart((0, 1))
    assert g.face(f.id) is f
    with pytest.raises(ValidationError):
        g.face("7->8")
    with pytest.raises(InvalidEmbedding):
        check(PlaneGraph.from_edges(3, [(0, 1)], [(1,), (0,), (0,)]))


def test_builder_keeps_rotation_order():
    g = cycle_graph(4)
    b = EmbeddingBuilder.from_graph(g)
    x = b.add_vertex()
    corner = g.face_of_dart((0, 1)).corners()[0]
    b.add_edge(0, x, after_u=corner[0])
    h = b.build()
    assert validate(h) is None
    assert len(h.faces()) == 2
    with pytest.raises(ValidationError):
        b.add_edge(0, x)


def test_delete_vertices_and_zero_edges():
    g = cycle_graph(5, weights=[1, 0, 1, 1, 1])
    h, mapping = delete_vertices(g, [2], return_map=True)
    assert h.n == 4 and mapping == {0: 0, 1: 1, 3: 2, 4: 3}
    assert validate(h) is None
    d = drop_zero_weight_edges(g)
    assert len(d.edges) == 4 and validate(d) is None
    with pytest.raises(ValidationError):
        delete_vertices(g, [9])


def test_disconnected_components():
    g = random_plane_graph(12, random.Random(5), density=0.1, connected=False)
    assert validate(g) is None
    assert sum(len(c) for c in g.components) == 12
