import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixspec import Graph, enumerate_triangles, load_zachary  # noqa: E402


def complete(n):
    return Graph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n=n)


def two_triangles():
    """Two triangles {0,1,2} and {3,4,5} joined by the edge (2, 3)."""
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)], n=6)


@pytest.fixture
def k3():
    g = complete(3)
    return g, enumerate_triangles(g)


@pytest.fixture
def k4():
    g = complete(4)
    return g, enumerate_triangles(g)


@pytest.fixture
def barbell():
    g = two_triangles()
    return g, enumerate_triangles(g)


@pytest.fixture(scope="session")
def zachary():
    g, truth = load_zachary()
    return g, enumerate_triangles(g), truth


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def planted_communities(n=1000, size=25, p_in=0.35, p_out=0.002, overlap=3, seed=0):
    """Planted-partition graph plus overlapping community lists.

    Nodes are split into blocks of ``size``; every block is dense inside and
    sparse across.  Each community is its block plus ``overlap`` nodes
    borrowed from the next block.  Ids are shifted by 1000 to exercise the
    id mapping.
    """
    rng = np.random.default_rng(seed)
    block = np.arange(n) // size
    iu, ju = np.triu_indices(n, 1)
    same = block[iu] == block[ju]
    keep = rng.random(iu.size) < np.where(same, p_in, p_out)
    edges = np.column_stack([iu[keep], ju[keep]])
    nb = int(block.max()) + 1
    comms = []
    for b in range(nb):
        members = list(np.flatnonzero(block == b))
        nxt = np.flatnonzero(block == (b + 1) % nb)[:overlap]
        comms.append(sorted(set(members) | set(nxt.tolist())))
    ids = np.arange(n) + 1000
    return Graph.from_edges(edges, n=n, ids=ids), [[int(ids[v]) for v in c] for c in comms]


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; an unrecorded test counts as a failure."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})
    label = request.node.get_closest_marker("criterion").args[0]

    def record(ok, detail):
        store[label] = (bool(ok), detail)
        print(f"criterion {label}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    yield record
    if label not in store:
        store[label] = (False, "raised before reaching a verdict")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test decides")


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(store, key=lambda s: (int(s.split("-")[0]), s)):
        ok, detail = store[label]
        terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'} {detail}")
