"""Directed graphs, finite paths and cylinder-set combinatorics.

Conventions used throughout the package:

* every edge has a range vertex ``r(e)`` and a source vertex ``s(e)``;
* a path ``a_1 a_2 ... a_n`` is read right to left, i.e. consecutive
  edges satisfy ``s(a_i) = r(a_{i+1})``, the range of the path is
  ``r(a_1)`` and its source is ``s(a_n)``;
* vertices are paths of length 0 with range = source = the vertex;
* ``vE^n`` is the set of paths of length n with range v; in particular
  ``vE^1`` is the set of edges pointing at v, and a graph has
  "no sources" when every ``vE^1`` is nonempty.

Graphs here are finite and immutable after construction.  That makes
every value in this module safe for unrestricted concurrent reads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


class CompositionError(GraphError):
    """Raised when two paths with mismatched endpoints are concatenated."""


@dataclass(frozen=True, slots=True)
class Edge:
    id: str
    range_vertex: str
    source_vertex: str


@dataclass(frozen=True, slots=True)
class Path:
    """A finite path; length 0 paths carry their vertex in both endpoints.

    Paths are created through :class:`Graph` so the endpoint data is
    always consistent with the graph they came from.
    """

    edges: tuple[str, ...]
    range_vertex: str
    source_vertex: str

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return ".".join(self.edges) if self.edges else self.range_vertex


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    message: str


@dataclass(slots=True)
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{v.code}: {v.message}" for v in self.violations]

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(self.messages())


class Graph:
    """A finite directed graph with ordered vertex and edge lists."""

    def __init__(self, vertices, edges):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in edges
        )
        self._vertex_set = set(self.vertices)
        self._edge_map = {e.id: e for e in self.edges}
        into: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.range_vertex in into:
                into[e.range_vertex].append(e)
        self._into = {v: tuple(es) for v, es in into.items()}

    # -- lookups ----------------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_map[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_map

    def edges_into(self, v: str) -> tuple[Edge, ...]:
        """vE^1: the edges whose range is v."""
        self._check_vertex(v)
        return self._into[v]

    def _check_vertex(self, v: str) -> None:
        if v not in self._vertex_set:
            raise GraphError(f"unknown vertex {v!r}")

    # -- path construction -------------------------------------------------

    def vertex_path(self, v: str) -> Path:
        self._check_vertex(v)
        return Path((), v, v)

    def path(self, edge_ids) -> Path:
        """Build a path from edge ids, checking composability."""
        ids = tuple(edge_ids)
        if not ids:
            raise GraphError("empty edge list; use vertex_path for length 0")
        edges = [self.edge(i) for i in ids]
        for a, b in zip(edges, edges[1:]):
            if a.source_vertex != b.range_vertex:
                raise CompositionError(
                    f"edges {a.id!r} and {b.id!r} do not compose: "
                    f"s({a.id})={a.source_vertex!r} but r({b.id})={b.range_vertex!r}"
                )
        return Path(ids, edges[0].range_vertex, edges[-1].source_vertex)

    def subpath(self, p: Path, start: int, stop: int | None = None) -> Path:
        """The segment p[start:stop] as a path (length 0 allowed)."""
        stop = len(p) if stop is None else stop
        if not 0 <= start <= stop <= len(p):
            raise GraphError(f"bad segment [{start}:{stop}] of path of length {len(p)}")
        if start == stop:
            v = p.source_vertex if start == len(p) else self.edge(p.edges[start]).range_vertex
            return self.vertex_path(v)
        ids = p.edges[start:stop]
        return Path(
            ids,
            self.edge(ids[0]).range_vertex,
            self.edge(ids[-1]).source_vertex,
        )

    # -- path enumeration ---------------------------------------------------

    def extend_paths(self, v: str, n: int) -> list[Path]:
        """vE^n: all paths of length n with range v, in declaration order."""
        self._check_vertex(v)
        if n < 0:
            raise GraphError("path length must be nonnegative")
        level = [self.vertex_path(v)]
        for _ in range(n):
            nxt = []
            for p in level:
                for e in self._into[p.source_vertex]:
                    nxt.append(Path(p.edges + (e.id,), p.range_vertex, e.source_vertex))
            level = nxt
        return level

    def all_paths(self, v: str, max_len: int) -> list[Path]:
        """All paths with range v of length 0..max_len."""
        out = []
        for n in range(max_len + 1):
            out.extend(self.extend_paths(v, n))
        return out

    def simple_cycles_at(self, v: str, max_len: int, edge_ok=None) -> list[Path]:
        """Cycles at v (range = source = v) visiting no vertex twice en route.

        ``edge_ok`` optionally restricts the edges that may be used.
        """
        self._check_vertex(v)
        out: list[Path] = []

        def walk(cur: Path, seen: frozenset[str]):
            if len(cur) >= max_len:
                return
            for e in self._into[cur.source_vertex]:
                if edge_ok is not None and not edge_ok(e):
                    continue
                nxt = Path(cur.edges + (e.id,), v, e.source_vertex)
                if e.source_vertex == v:
                    out.append(nxt)
                elif e.source_vertex not in seen:
                    walk(nxt, seen | {e.source_vertex})

        walk(self.vertex_path(v), frozenset({v}))
        return out


class CylinderRelation(enum.Enum):
    DISJOINT = "disjoint"
    LEFT_PREFIX_OF_RIGHT = "left-prefix-of-right"
    RIGHT_PREFIX_OF_LEFT = "right-prefix-of-left"
    EQUAL = "equal"


def concat(a: Path, b: Path) -> Path:
    """Concatenation ab; requires s(a) = r(b)."""
    if a.source_vertex != b.range_vertex:
        raise CompositionError(
            f"paths do not compose: s(left)={a.source_vertex!r} "
            f"but r(right)={b.range_vertex!r}"
        )
    if not a.edges:
        return b
    if not b.edges:
        return a
    return Path(a.edges + b.edges, a.range_vertex, b.source_vertex)


def is_prefix(a: Path, b: Path) -> bool:
    """Whether a is an initial segment of b (same range, leading edges)."""
    if a.range_vertex != b.range_vertex:
        return False
    return b.edges[: len(a)] == a.edges


def cylinder_relation(a: Path, b: Path) -> CylinderRelation:
    """Compare the cylinder sets Z(a) and Z(b).

    The cylinders of two finite paths either are disjoint or one path is
    an initial segment of the other.
    """
    if a.range_vertex != b.range_vertex:
        return CylinderRelation.DISJOINT
    n = min(len(a), len(b))
    if a.edges[:n] != b.edges[:n]:
        return CylinderRelation.DISJOINT
    if len(a) == len(b):
        return CylinderRelation.EQUAL
    if len(a) < len(b):
        return CylinderRelation.LEFT_PREFIX_OF_RIGHT
    return CylinderRelation.RIGHT_PREFIX_OF_LEFT


@dataclass(frozen=True, slots=True)
class EvPath:
    """An eventually periodic infinite path: transient then cycle forever.

    The cycle is nonempty with matching endpoints and attaches at the
    source of the transient; the transient may have length 0.  These are
    the test points of the groupoid machinery: they are finitely
    describable and dense in every cylinder.
    """

    transient: Path
    cycle: Path

    @property
    def range_vertex(self) -> str:
        return self.transient.range_vertex

    def edge_at(self, i: int) -> str:
        t = len(self.transient)
        if i < t:
            return self.transient.edges[i]
        return self.cycle.edges[(i - t) % len(self.cycle)]

    def phase(self, i: int) -> int:
        """A finite signature of position i: transient positions are
        distinct, positions inside the cycle wrap around."""
        t = len(self.transient)
        return i if i < t else t + (i - t) % len(self.cycle)

    def prefix(self, graph: Graph, n: int) -> Path:
        if n == 0:
            return graph.vertex_path(self.range_vertex)
        return graph.path([self.edge_at(i) for i in range(n)])

    def __str__(self) -> str:
        head = f"{self.transient} " if self.transient.edges else ""
        return f"{head}({self.cycle})^inf"


def make_ev_path(graph: Graph, transient: Path, cycle: Path) -> EvPath:
    if cycle.is_vertex:
        raise GraphError("the cycle of an infinite path must be nonempty")
    if cycle.range_vertex != cycle.source_vertex:
        raise GraphError("cycle endpoints differ; not a cycle")
    if transient.source_vertex != cycle.range_vertex:
        raise CompositionError(
            f"transient ends at {transient.source_vertex!r} "
            f"but cycle starts at {cycle.range_vertex!r}"
        )
    return EvPath(transient, cycle)


def some_tail(graph: Graph, v: str) -> EvPath:
    """Any eventually periodic infinite path with range v.

    Exists for every vertex because the graph has no sources; found by
    walking first-declared edges until a vertex repeats.
    """
    walk: list[str] = []
    seen = {v: 0}
    cur = v
    while True:
        e = graph.edges_into(cur)[0]
        walk.append(e.id)
        cur = e.source_vertex
        if cur in seen:
            cut = seen[cur]
            transient = graph.path(walk[:cut]) if cut else graph.vertex_path(v)
            return EvPath(transient, graph.path(walk[cut:]))
        seen[cur] = len(walk)


def validate_graph(g: Graph) -> ValidationReport:
    """Check uniqueness of ids, endpoint sanity and the no-sources rule.

    Violations are reported as data; row-finiteness holds automatically
    for the finite graphs supported here and is recorded only if an
    endpoint refers to a missing vertex.
    """
    report = ValidationReport()
    seen_v: set[str] = set()
    for v in g.vertices:
        if v in seen_v:
            report.add("duplicate-vertex", f"vertex id {v!r} declared twice")
        seen_v.add(v)
    seen_e: set[str] = set()
    for e in g.edges:
        if e.id in seen_e:
            report.add("duplicate-edge", f"edge id {e.id!r} declared twice")
        seen_e.add(e.id)
        if e.range_vertex not in seen_v:
            report.add("unknown-vertex", f"edge {e.id!r} has unknown range {e.range_vertex!r}")
        if e.source_vertex not in seen_v:
            report.add("unknown-vertex", f"edge {e.id!r} has unknown source {e.source_vertex!r}")
    for v in g.vertices:
        if not g._into.get(v):
            report.add("no-sources", f"vertex {v!r} receives no edge (vE^1 empty)")
    return report
