"""Integer matrix pairs (A, B) and the actions they induce.

A pair of N x N integer matrices with A nonnegative and rowwise nonzero
defines a graph (A counts parallel edges) and an integer action on it:
the generator sends the edge (i, j, n) to (i, j, n') and carries k,
where B_ij + n = k A_ij + n' is the Euclidean division.  More generally
m B_ij + n = k A_ij + n' describes the action of m directly, and the
builder's generator tables compose to exactly that.

Along a path the carried values form the exact rational sequence

    K_j = l * (product of B factors) / (product of A factors)

and a path is strongly fixed by l precisely when the K values are
nonzero integers until the last one, which must be 0.  This integrality
calculus powers the fixed-path enumeration and the Hausdorffness
decision, both exact over Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .actions import ElementTables, IntegersZ, SelfSimilarAction, act_path
from .graphs import (
    Edge,
    EvPath,
    Graph,
    Path,
    ValidationReport,
    concat,
)
from .rings import Ring


class KatsuraError(ValueError):
    pass


@dataclass(frozen=True)
class KatsuraSpec:
    a: tuple[tuple[int, ...], ...]
    b: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @staticmethod
    def from_matrices(a, b) -> "KatsuraSpec":
        return KatsuraSpec(
            tuple(tuple(int(x) for x in row) for row in a),
            tuple(tuple(int(x) for x in row) for row in b),
        )


def validate_spec(spec: KatsuraSpec) -> ValidationReport:
    report = ValidationReport()
    n = spec.n
    if n == 0:
        report.add("empty", "matrix dimension is zero")
        return report
    for name, m in (("A", spec.a), ("B", spec.b)):
        if len(m) != n or any(len(row) != n for row in m):
            report.add("not-square", f"{name} is not {n}x{n}")
            return report
    for i, row in enumerate(spec.a):
        if any(x < 0 for x in row):
            report.add("negative-entry", f"A row {i + 1} has a negative entry")
        if sum(row) <= 0:
            report.add("zero-row", f"A row {i + 1} is zero; every vertex needs an edge")
    return report


def build_triple(
    spec: KatsuraSpec,
    vertex_names=None,
    edge_names: dict[tuple[int, int, int], str] | None = None,
) -> SelfSimilarAction:
    """Build the graph and integer action of a matrix pair.

    ``vertex_names`` optionally names vertex i (0-based); ``edge_names``
    optionally names the edge (i, j, n) (0-based i, j).  Default names
    are v1..vN and e_i_j_n with 1-based vertex indices.
    """
    report = validate_spec(spec)
    if not report.ok:
        raise KatsuraError("; ".join(report.messages()))
    n = spec.n
    if vertex_names is None:
        vertex_names = tuple(f"v{i + 1}" for i in range(n))
    vertex_names = tuple(vertex_names)
    if len(vertex_names) != n or len(set(vertex_names)) != n:
        raise KatsuraError("need exactly one distinct name per vertex")
    edge_names = dict(edge_names or {})

    edges = []
    index: dict[str, tuple[int, int, int]] = {}
    for i in range(n):
        for j in range(n):
            for k in range(spec.a[i][j]):
                eid = edge_names.get((i, j, k), f"e_{i + 1}_{j + 1}_{k}")
                if eid in index:
                    raise KatsuraError(f"duplicate edge name {eid!r}")
                edges.append(Edge(eid, vertex_names[i], vertex_names[j]))
                index[eid] = (i, j, k)
    graph = Graph(vertex_names, edges)

    rev = {idx: eid for eid, idx in index.items()}
    tables = {}
    for m in (1, -1):
        emap, coc = {}, {}
        for eid, (i, j, k) in index.items():
            khat, nhat = divmod(m * spec.b[i][j] + k, spec.a[i][j])
            emap[eid] = rev[(i, j, nhat)]
            coc[eid] = khat
        tables[m] = ElementTables(
            vertex_map={v: v for v in vertex_names}, edge_map=emap, cocycle=coc
        )
    return SelfSimilarAction(
        graph=graph,
        group=IntegersZ(),
        tables=tables,
        katsura_spec=spec,
        katsura_edge_index=index,
    )


def as_action(spec_or_action) -> SelfSimilarAction:
    """Accept either a matrix pair or an already-built action."""
    if isinstance(spec_or_action, SelfSimilarAction):
        if spec_or_action.katsura_spec is None:
            raise KatsuraError("action was not built from a matrix pair")
        return spec_or_action
    if isinstance(spec_or_action, KatsuraSpec):
        act = spec_or_action.__dict__.get("_built")
        if act is None:
            act = build_triple(spec_or_action)
            object.__setattr__(spec_or_action, "_built", act)
        return act
    raise KatsuraError(f"expected a matrix pair or built action, got {spec_or_action!r}")


def edge_factors(act: SelfSimilarAction, eid: str) -> tuple[int, int]:
    """(A factor, B factor) of an edge."""
    spec = act.katsura_spec
    i, j, _ = act.katsura_edge_index[eid]
    return spec.a[i][j], spec.b[i][j]


def is_carrying_edge(act: SelfSimilarAction, eid: str) -> bool:
    """Whether the edge has a nonzero B factor.  Paths made entirely of
    carrying edges are never strongly fixed; a strongly fixed path is a
    run of carrying edges closed off by one non-carrying edge."""
    return edge_factors(act, eid)[1] != 0


# ---------------------------------------------------------------------------
# K sequences


@dataclass(frozen=True)
class KSequence:
    path: Path
    l: int
    values: tuple[Fraction, ...]

    @property
    def is_strongly_fixed(self) -> bool:
        *front, last = self.values
        return last == 0 and all(v.denominator == 1 and v != 0 for v in front)


def k_sequence(spec_or_action, a: Path, l: int) -> KSequence:
    """The exact carried-value sequence of a path under l.

    Rejects l = 0 (strong fixing concerns nonidentity elements only).
    When the sequence certifies strong fixing the result is
    cross-checked against the path action itself.
    """
    act = as_action(spec_or_action)
    if l == 0:
        raise KatsuraError("l must be nonzero")
    if a.is_vertex:
        raise KatsuraError("K sequences are defined for nonempty paths")
    values = []
    cur = Fraction(l)
    for eid in a.edges:
        af, bf = edge_factors(act, eid)
        cur = cur * bf / af
        values.append(cur)
    seq = KSequence(a, l, tuple(values))
    if seq.is_strongly_fixed:
        image, carried = act_path(act, l, a)
        if image != a or carried != 0:
            raise KatsuraError(
                f"internal inconsistency: K sequence certifies fixing of {a} "
                f"by {l} but the action disagrees"
            )
    return seq


# ---------------------------------------------------------------------------
# minimal strongly fixed path enumeration


@dataclass(frozen=True)
class InfiniteFamily:
    """Certificate of infinitely many minimal strongly fixed paths:
    stem, then any number of turns around the cycle, then the exit whose
    final edge kills the carried value."""

    stem: Path
    cycle: Path
    exit: Path

    def member(self, k: int) -> Path:
        out = self.stem
        for _ in range(k):
            out = concat(out, self.cycle)
        return concat(out, self.exit)


@dataclass
class Finite:
    paths: list[Path]


@dataclass
class Infinite:
    paths: list[Path]
    family: InfiniteFamily


@dataclass
class ExhaustedAtDepth:
    paths: list[Path]
    depth: int


def _state_graph(act: SelfSimilarAction, start_vertex: str, l: int, node_cap=20000, k_cap=10**12):
    """Reachable (vertex, carried value) states with integral nonzero K.

    Returns (nodes, succ, emit, capped) where succ maps a node to
    (edge id, node) continuations and emit maps a node to the edges that
    finish a minimal strongly fixed path there.
    """
    graph = act.graph
    start = (start_vertex, l)
    nodes = {start}
    queue = [start]
    succ: dict[tuple, list] = {}
    emit: dict[tuple, list] = {}
    capped = False
    while queue:
        node = queue.pop(0)
        v, k = node
        succ[node] = []
        emit[node] = []
        for e in graph.edges_into(v):
            af, bf = edge_factors(act, e.id)
            nxt = Fraction(k) * bf / af
            if nxt == 0:
                emit[node].append(e.id)
            elif nxt.denominator == 1:
                nk = int(nxt)
                if abs(nk) > k_cap:
                    capped = True
                    continue
                child = (e.source_vertex, nk)
                succ[node].append((e.id, child))
                if child not in nodes:
                    if len(nodes) >= node_cap:
                        capped = True
                        continue
                    nodes.add(child)
                    queue.append(child)
    return nodes, succ, emit, capped


def _can_reach_emission(nodes, succ, emit) -> set:
    productive = {n for n in nodes if emit.get(n)}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            if n in productive:
                continue
            if any(c in productive for _, c in succ.get(n, ())):
                productive.add(n)
                changed = True
    return productive


def _find_productive_cycle(nodes, succ, productive):
    """A node on a cycle inside the productive part, with the cycle edges."""
    color: dict[tuple, int] = {}
    stack_edges: list[tuple] = []
    stack_nodes: list[tuple] = []

    def dfs(n):
        color[n] = 1
        stack_nodes.append(n)
        for eid, c in succ.get(n, ()):
            if c not in productive:
                continue
            if color.get(c, 0) == 0:
                stack_edges.append((eid, c))
                found = dfs(c)
                if found:
                    return found
                stack_edges.pop()
            elif color.get(c) == 1:
                i = stack_nodes.index(c)
                cyc = [eid2 for eid2, _ in stack_edges[i:]] + [eid]
                return c, cyc
        color[n] = 2
        stack_nodes.pop()
        return None

    for n in sorted(productive, key=repr):
        if color.get(n, 0) == 0:
            found = dfs(n)
            if found:
                return found
    return None


def minimal_fixed_paths(spec_or_action, vertex: str, l: int, max_len: int = 18):
    """Enumerate minimal strongly fixed paths for l with range ``vertex``.

    The search walks (vertex, carried value) states exactly.  Verdicts:

    * ``Infinite`` when a state cycle that can still reach an emission is
      found; the certificate names stem, cycle and exit, and the listing
      carries the members of length < max_len.
    * ``Finite`` with the complete list when the state space closes with
      no such cycle.
    * ``ExhaustedAtDepth`` when caps were hit before either certificate.
    """
    act = as_action(spec_or_action)
    if l == 0:
        raise KatsuraError("l must be nonzero")
    if not act.graph.has_vertex(vertex):
        raise KatsuraError(f"unknown vertex {vertex!r}")

    nodes, succ, emit, capped = _state_graph(act, vertex, l)
    productive = _can_reach_emission(nodes, succ, emit)
    start = (vertex, l)

    found: list[Path] = []

    def enumerate_members(length_bound):
        """Members (length < length_bound if bounded) through productive
        states; with no bound the productive part must be acyclic."""
        out = []

        def walk(node, edges):
            for eid in emit.get(node, ()):
                if length_bound is None or len(edges) + 1 < length_bound:
                    out.append(act.graph.path(edges + [eid]))
            for eid, child in succ.get(node, ()):
                if child not in productive:
                    continue
                if length_bound is not None and len(edges) + 2 >= length_bound:
                    continue
                walk(child, edges + [eid])

        if start in productive:
            walk(start, [])
        return sorted(out, key=lambda p: (len(p), p.edges))

    cyc = _find_productive_cycle(nodes, succ, productive)
    if cyc is not None:
        entry, cycle_edges = cyc
        stem_edges = _edge_path_between(succ, start, entry)
        exit_edges = _emission_path_from(succ, emit, entry, productive)
        graph = act.graph
        stem = graph.path(stem_edges) if stem_edges else graph.vertex_path(vertex)
        family = InfiniteFamily(
            stem=stem, cycle=graph.path(cycle_edges), exit=graph.path(exit_edges)
        )
        return Infinite(paths=enumerate_members(max_len), family=family)
    if capped:
        return ExhaustedAtDepth(paths=enumerate_members(max_len), depth=max_len)
    return Finite(paths=enumerate_members(None))


def _edge_path_between(succ, start, goal) -> list[str]:
    """Shortest edge walk between two states (BFS)."""
    if start == goal:
        return []
    prev: dict[tuple, tuple] = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        for eid, child in succ.get(node, ()):
            if child in prev:
                continue
            prev[child] = (node, eid)
            if child == goal:
                out = []
                cur = child
                while prev[cur] is not None:
                    cur, eid2 = prev[cur]
                    out.append(eid2)
                return out[::-1]
            queue.append(child)
    raise KatsuraError("internal: state unreachable")


def _emission_path_from(succ, emit, node, productive) -> list[str]:
    """Shortest walk from a state to an emission, final edge included."""
    prev: dict[tuple, tuple] = {node: None}
    queue = [node]
    while queue:
        cur = queue.pop(0)
        if emit.get(cur):
            out = [emit[cur][0]]
            back = cur
            while prev[back] is not None:
                back, eid = prev[back]
                out.append(eid)
            return out[::-1]
        for eid, child in succ.get(cur, ()):
            if child in productive and child not in prev:
                prev[child] = (cur, eid)
                queue.append(child)
    raise KatsuraError("internal: no emission reachable")


# ---------------------------------------------------------------------------
# Hausdorffness


@dataclass
class Hausdorff:
    reason: str


@dataclass
class NonHausdorff:
    l: int
    vertex: str
    family: InfiniteFamily


@dataclass
class Unknown:
    unresolved_cycles: list[tuple[Path, Fraction]]
    note: str


def _walk_sccs(act: SelfSimilarAction):
    """Strongly connected components of the carrying-edge walk graph."""
    graph = act.graph
    adj: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        if is_carrying_edge(act, e.id):
            adj[e.range_vertex].append(e.source_vertex)

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = [0]

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in adj[v]:
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(comp)

    for v in graph.vertices:
        if v not in index:
            strong(v)
    return out, adj


def _cycle_ratio(act: SelfSimilarAction, cycle: Path) -> Fraction:
    r = Fraction(1)
    for eid in cycle.edges:
        af, bf = edge_factors(act, eid)
        r = r * bf / af
    return r


def is_hausdorff(spec_or_action, l_bound: int = 16, max_len: int | None = None):
    """Decide Hausdorffness of the instance, with witnesses.

    Structure first: if no carrying-edge cycle can reach an edge with a
    zero B factor there are no infinite families at all.  A reachable
    cycle whose B/A ratio is a nonzero integer pumps forever, so it
    yields a concrete infinite family (the needed l is the lcm of the
    denominators along one development).  Cycles whose ratios all lose a
    fixed prime factor are safe.  Whatever the structural pass cannot
    settle is handed to the bounded per-l search; anything still open is
    reported as Unknown rather than guessed.
    """
    act = as_action(spec_or_action)
    n = len(act.graph.vertices)
    if max_len is None:
        max_len = 2 * n + 8

    zero_exit_at = {
        v
        for v in act.graph.vertices
        if any(not is_carrying_edge(act, e.id) for e in act.graph.edges_into(v))
    }
    if not zero_exit_at:
        return Hausdorff("no edge kills the carried value, so nothing is strongly fixed")

    sccs, adj = _walk_sccs(act)
    # vertices from which a zero-B exit is reachable through carrying edges
    reach = set(zero_exit_at)
    changed = True
    while changed:
        changed = False
        for v, ws in adj.items():
            if v not in reach and any(w in reach for w in ws):
                reach.add(v)
                changed = True

    dangerous: list[list[str]] = []
    for comp in sccs:
        has_cycle = len(comp) > 1 or any(
            w == comp[0] for w in adj[comp[0]]
        )
        if has_cycle and any(v in reach for v in comp):
            dangerous.append(sorted(comp))
    if not dangerous:
        return Hausdorff("no carrying-edge cycle can reach a zero-B exit")

    unresolved: list[tuple[Path, Fraction]] = []
    for comp in sorted(dangerous):
        comp_set = set(comp)
        cycles: list[Path] = []
        for v in comp:
            for cyc in act.graph.simple_cycles_at(
                v,
                len(comp),
                edge_ok=lambda e: is_carrying_edge(act, e.id)
                and e.source_vertex in comp_set
                and e.range_vertex in comp_set,
            ):
                # canonical representative: cycles are enumerated from
                # their first-listed vertex only
                if all(
                    act.graph.edge(x).range_vertex not in comp[: comp.index(v)]
                    for x in cyc.edges
                ):
                    cycles.append(cyc)
        integer_cycle = None
        for cyc in cycles:
            rho = _cycle_ratio(act, cyc)
            if rho != 0 and rho.denominator == 1:
                integer_cycle = cyc
                break
        if integer_cycle is not None:
            return _nonhausdorff_from_cycle(act, integer_cycle, reach)
        primes = _prime_factors(
            _cycle_ratio(act, cycles[0]).denominator
        ) if cycles else set()
        safe = any(
            all(_val_p(_cycle_ratio(act, cyc), p) < 0 for cyc in cycles) for p in primes
        )
        if not safe:
            unresolved.extend((cyc, _cycle_ratio(act, cyc)) for cyc in cycles)

    if not unresolved:
        return Hausdorff("every reachable carrying cycle loses a prime factor")

    for l_abs in range(1, l_bound + 1):
        for l in (l_abs, -l_abs):
            for v in act.graph.vertices:
                verdict = minimal_fixed_paths(act, v, l, max_len)
                if isinstance(verdict, Infinite):
                    return NonHausdorff(l=l, vertex=v, family=verdict.family)
    return Unknown(
        unresolved_cycles=unresolved,
        note=f"cycle ratios neither integral nor uniformly shrinking; "
        f"searched |l| <= {l_bound}, length <= {max_len}",
    )


def _nonhausdorff_from_cycle(act, cycle: Path, reach) -> NonHausdorff:
    """Build an infinite family around an integer-ratio carrying cycle."""
    graph = act.graph
    v = cycle.range_vertex
    exit_edges = _shortest_zero_exit(act, v)
    denoms = []
    cur = Fraction(1)
    for eid in cycle.edges + tuple(exit_edges):
        af, bf = edge_factors(act, eid)
        cur = cur * bf / af
        denoms.append(cur.denominator)
    l = lcm(*denoms) if denoms else 1
    family = InfiniteFamily(
        stem=graph.vertex_path(v), cycle=cycle, exit=graph.path(exit_edges)
    )
    return NonHausdorff(l=l, vertex=v, family=family)


def _shortest_zero_exit(act, v: str) -> list[str]:
    """Shortest carrying-edge walk from v ending in a zero-B edge."""
    graph = act.graph
    prev: dict[str, tuple] = {v: None}
    queue = [v]
    while queue:
        cur = queue.pop(0)
        for e in graph.edges_into(cur):
            if not is_carrying_edge(act, e.id):
                out = [e.id]
                back = cur
                while prev[back] is not None:
                    back, eid = prev[back]
                    out.append(eid)
                return out[::-1]
        for e in graph.edges_into(cur):
            if is_carrying_edge(act, e.id) and e.source_vertex not in prev:
                prev[e.source_vertex] = (cur, e.id)
                queue.append(e.source_vertex)
    raise KatsuraError("internal: no zero-B exit reachable")


def _prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _val_p(q: Fraction, p: int) -> int:
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0 and num:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# instance analysis used by the zero tests


def uncarried_tail(spec_or_action, vertex: str) -> EvPath | None:
    """An infinite path from the vertex that is never strongly fixed, or
    None when every tail from the vertex is strongly fixed.

    Such a tail exists exactly when a cycle of carrying edges is
    reachable from the vertex through carrying edges.  Cached on the
    action.
    """
    act = as_action(spec_or_action)
    cache = act.analysis_cache.setdefault("uncarried_tail", {})
    if vertex in cache:
        return cache[vertex]
    graph = act.graph

    def walk(cur, edges, seen):
        for e in graph.edges_into(cur):
            if not is_carrying_edge(act, e.id):
                continue
            w = e.source_vertex
            if w in seen:
                cut = seen[w]
                trail = edges + [e.id]
                transient = graph.path(trail[:cut]) if cut else graph.vertex_path(vertex)
                return EvPath(transient, graph.path(trail[cut:]))
            found = walk(w, edges + [e.id], {**seen, w: len(edges) + 1})
            if found:
                return found
        return None

    result = walk(vertex, [], {vertex: 0})
    cache[vertex] = result
    return result


def minimal_fixed_paths_any(spec_or_action, vertex: str) -> list[Path] | None:
    """All minimal strongly fixed paths (by any nonzero l) with the given
    range, or None when the family is infinite.

    A path qualifies exactly when its edges carry until the last one,
    which has B factor 0 (the needed l is then the lcm of the partial
    denominators).  Cached on the action.
    """
    act = as_action(spec_or_action)
    cache = act.analysis_cache.setdefault("min_fixed_any", {})
    if vertex in cache:
        return cache[vertex]
    graph = act.graph

    # productive vertices: can reach a zero-B exit through carrying edges
    zero_exit_at = {
        v
        for v in graph.vertices
        if any(not is_carrying_edge(act, e.id) for e in graph.edges_into(v))
    }
    productive = set(zero_exit_at)
    changed = True
    while changed:
        changed = False
        for e in graph.edges:
            if (
                is_carrying_edge(act, e.id)
                and e.source_vertex in productive
                and e.range_vertex not in productive
            ):
                productive.add(e.range_vertex)
                changed = True

    result: list[Path] | None = []

    def walk(cur, edges, seen):
        nonlocal result
        if result is None:
            return
        for e in graph.edges_into(cur):
            if not is_carrying_edge(act, e.id):
                result.append(graph.path(edges + [e.id]))
                continue
            w = e.source_vertex
            if w not in productive:
                continue
            if w in seen:
                result = None  # productive carrying cycle: infinitely many
                return
            walk(w, edges + [e.id], seen | {w})

    if vertex in productive:
        walk(vertex, [], frozenset({vertex}))
    if result is not None:
        result.sort(key=lambda p: (len(p), p.edges))
    cache[vertex] = result
    return result


# ---------------------------------------------------------------------------
# relation suite


def katsura_family_check(spec_or_action, ring: Ring, window: int = 4) -> ValidationReport:
    """Verify the matrix-pair relation suite inside the algebra.

    Builds the projections, the partial unitaries and the indexed
    partial isometries from the universal generators and multiplies
    everything out over the given window of indices.
    """
    from .algebra import Element, elem_is_zero, elem_mul, elem_star

    act = as_action(spec_or_action)
    spec = act.katsura_spec
    report = ValidationReport()
    names = act.graph.vertices
    n = spec.n

    rev = {idx: eid for eid, idx in act.katsura_edge_index.items()}

    def q(i):
        return Element.p(act, ring, names[i], 0)

    def u(i):
        return Element.p(act, ring, names[i], 1)

    def s_ij(i, j, m):
        k, rem = divmod(m, spec.a[i][j])
        return Element.s(act, ring, rev[(i, j, rem)], k)

    omega = [(i, j) for i in range(n) for j in range(n) if spec.a[i][j] > 0]

    for i in range(n):
        for j in range(n):
            want = q(i) if i == j else Element.zero(act, ring)
            if elem_mul(q(i), q(j)) != want:
                report.add("projections", f"q{i + 1} q{j + 1} != delta q{i + 1}")
    for i in range(n):
        for prod in (elem_mul(u(i), elem_star(u(i))), elem_mul(elem_star(u(i)), u(i))):
            if prod != q(i):
                report.add("partial-unitary", f"u{i + 1} is not a partial unitary over q{i + 1}")

    for i, j in omega:
        for m in range(-window, window + 1):
            s = s_ij(i, j, m)
            if elem_mul(s, u(j)) != s_ij(i, j, m + spec.a[i][j]):
                report.add("shift-right", f"s[{i + 1},{j + 1},{m}] u{j + 1} mismatch")
            if elem_mul(u(i), s) != s_ij(i, j, m + spec.b[i][j]):
                report.add("shift-left", f"u{i + 1} s[{i + 1},{j + 1},{m}] mismatch")
            if elem_mul(elem_star(s), s) != q(j):
                report.add("isometry", f"s*s != q{j + 1} at [{i + 1},{j + 1},{m}]")

    for i in range(n):
        total = Element.zero(act, ring)
        for j in range(n):
            if spec.a[i][j] <= 0:
                continue
            for m in range(1, spec.a[i][j] + 1):
                s = s_ij(i, j, m)
                total = total + elem_mul(s, elem_star(s))
        # an algebra identity, not a term identity: certify via the zero test
        if elem_is_zero(total - q(i)).kind != "zero":
            report.add("receiving-sum", f"q{i + 1} != sum of s s* over its row")

    for i in range(n):
        js = [j for j in range(n) if spec.a[i][j] > 0]
        for a_idx, j in enumerate(js):
            for j2 in js[a_idx + 1 :]:
                for m in range(-window, window + 1):
                    if not elem_mul(elem_star(s_ij(i, j, m)), s_ij(i, j2, m)).is_trivially_zero:
                        report.add(
                            "cross-orthogonality",
                            f"s[{i + 1},{j + 1},{m}]* s[{i + 1},{j2 + 1},{m}] != 0",
                        )
            for m in range(1, spec.a[i][j] + 1):
                for m2 in range(m + 1, spec.a[i][j] + 1):
                    if not elem_mul(elem_star(s_ij(i, j, m)), s_ij(i, j, m2)).is_trivially_zero:
                        report.add(
                            "inner-orthogonality",
                            f"s[{i + 1},{j + 1},{m}]* s[{i + 1},{j + 1},{m2}] != 0",
                        )
    return report
