import numpy as np
import pytest

from simplicial_qsvt.complexes import (
    build_clique_complex,
    complete_graph,
    cycle_graph,
    path_graph,
    random_graph,
)


@pytest.fixture
def k3():
    return build_clique_complex(complete_graph(3))


@pytest.fixture
def c4():
    return build_clique_complex(cycle_graph(4))


@pytest.fixture
def path3():
    return build_clique_complex(path_graph(3))


def er_corpus(count=50, seed=2024):
    """Seeded Erdos-Renyi clique complexes with n <= 8 and p in {0.3, 0.5, 0.7}."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(3, 9))
        p = (0.3, 0.5, 0.7)[i % 3]
        out.append(build_clique_complex(random_graph(n, p, rng), k_max=n - 1))
    return out


@pytest.fixture(scope="session")
def corpus():
    return er_corpus()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
