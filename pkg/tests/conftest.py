import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from pdcount.generators import random_plane_graph, random_rational

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=int(os.environ.get("PDC_HYPOTHESIS_EXAMPLES", "40")),
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


def weighted_graph(seed: int, n_max: int = 12, connected: bool = True, density: float = 0.6):
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    return random_plane_graph(n, rng, density=density, connected=connected, weight=random_rational)


def face_weighted_graph(seed: int, n_max: int = 12, s_max: int = 3):
    """Weighted plane graph with random weights on the vertices of <= s_max random faces."""
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    g = random_plane_graph(n, rng, density=0.6, connected=rng.random() < 0.8, weight=random_rational)
    faces = list(g.faces())
    rng.shuffle(faces)
    chosen = faces[: rng.randint(0, min(s_max, len(faces)))]
    on = {v for f in chosen for v in f.vertices}
    weights = [random_rational(rng) if v in on else Fraction(0) for v in range(g.n)]
    return g.with_vertex_weights(weights), [f.id for f in chosen]


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
