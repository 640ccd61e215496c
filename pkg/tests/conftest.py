from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kcut_qaoa.graph import Graph, read_graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def er10() -> Graph:
    return read_graph(FIXTURES / "er10.txt")


@st.composite
def graphs(draw, max_vertices=6, weighted=True, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if weighted:
        w = st.floats(0.0, 5.0, allow_nan=False, allow_infinity=False)
    else:
        w = st.just(1.0)
    return Graph(n, tuple((u, v, draw(w)) for u, v in chosen))


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5, weighted: bool = True) -> Graph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, float(rng.uniform(0.1, 2.0)) if weighted else 1.0))
    return Graph(n, tuple(edges))


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    """Log one acceptance line; echoed in the terminal summary."""
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"{criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
