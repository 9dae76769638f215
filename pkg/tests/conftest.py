import random

import pytest

from ssalg import (
    Edge,
    ElementTables,
    FiniteGroup,
    Graph,
    KatsuraSpec,
    SelfSimilarAction,
    build_triple,
    make_triple,
)
from ssalg.actions import trivial_action as _trivial_action


EX41_A = [[1, 1], [0, 1]]
EX41_B = [[1, 0], [0, 1]]

EX43_A = [
    [0, 2, 0, 0, 3],
    [0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
]
EX43_B = [
    [0, 1, 0, 0, 1],
    [0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0],
]

EX43_NAMES = ("u", "v", "vp", "vpp", "w")


def build_ex41():
    spec = KatsuraSpec.from_matrices(EX41_A, EX41_B)
    return build_triple(
        spec,
        vertex_names=("u", "v"),
        edge_names={(0, 0, 0): "e", (0, 1, 0): "f", (1, 1, 0): "g"},
    )


def build_ex43():
    spec = KatsuraSpec.from_matrices(EX43_A, EX43_B)
    return build_triple(spec, vertex_names=EX43_NAMES)


def build_ba():
    # same graph as the 2x2 example, but B = A: the generator fixes
    # every edge and carries itself, so nothing is ever strongly fixed
    spec = KatsuraSpec.from_matrices(EX41_A, EX41_A)
    return build_triple(
        spec,
        vertex_names=("u", "v"),
        edge_names={(0, 0, 0): "e", (0, 1, 0): "f", (1, 1, 0): "g"},
    )


def build_c2_swap():
    graph = Graph(("u", "v"), [Edge("e", "u", "v"), Edge("f", "v", "u")])
    group = FiniteGroup(("i", "a"), {
        ("i", "i"): "i", ("i", "a"): "a", ("a", "i"): "a", ("a", "a"): "i",
    })
    tables = {
        "i": ElementTables(
            vertex_map={"u": "u", "v": "v"},
            edge_map={"e": "e", "f": "f"},
            cocycle={"e": "i", "f": "i"},
        ),
        "a": ElementTables(
            vertex_map={"u": "v", "v": "u"},
            edge_map={"e": "f", "f": "e"},
            cocycle={"e": "a", "f": "a"},
        ),
    }
    return SelfSimilarAction(graph=graph, group=group, tables=tables)


@pytest.fixture(scope="session")
def ex41():
    return build_ex41()


@pytest.fixture(scope="session")
def ex43():
    return build_ex43()


@pytest.fixture(scope="session")
def ba():
    return build_ba()


@pytest.fixture(scope="session")
def c2_swap():
    return build_c2_swap()


@pytest.fixture(scope="session")
def example_actions(ex41, ex43, ba, c2_swap):
    return {"ex41": ex41, "ex43": ex43, "ba": ba, "c2": c2_swap}


# ---------------------------------------------------------------------------
# random data


def random_graph(rng: random.Random, max_vertices=4, max_edges=6) -> Graph:
    """A random finite graph with no sources."""
    nv = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    edges = []
    # one incoming edge per vertex keeps the no-sources rule
    for i, v in enumerate(vertices):
        edges.append(Edge(f"a{i}", v, rng.choice(vertices)))
    extra = rng.randint(0, max(0, max_edges - nv))
    for k in range(extra):
        edges.append(Edge(f"b{k}", rng.choice(vertices), rng.choice(vertices)))
    return Graph(vertices, edges)


def trivial_action(graph: Graph) -> SelfSimilarAction:
    return _trivial_action(graph)


def random_path(rng: random.Random, act, max_len=5, source=None):
    """A random path, optionally with a prescribed source vertex."""
    graph = act.graph
    pool = []
    for v in graph.vertices:
        pool.extend(graph.all_paths(v, max_len))
    if source is not None:
        pool = [p for p in pool if p.source_vertex == source]
    return rng.choice(pool) if pool else None


def random_group_elem(rng: random.Random, act, span=4):
    grp = act.group
    if hasattr(grp, "elements"):
        return rng.choice(grp.elements)
    return rng.randint(-span, span)


def random_triple(rng: random.Random, act, max_len=5):
    """A random valid semigroup triple: sample beta and g, then alpha
    with the forced source vertex."""
    for _ in range(64):
        beta = random_path(rng, act, max_len)
        g = random_group_elem(rng, act)
        alpha = random_path(rng, act, max_len, source=act.act_vertex(g, beta.source_vertex))
        if alpha is not None:
            return make_triple(act, alpha, g, beta)
    raise AssertionError("could not sample a triple")
