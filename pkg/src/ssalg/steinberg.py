"""Germ model over eventually periodic infinite paths.

A germ is a semigroup triple together with an infinite path in the
cylinder of its right leg; two triples have the same germ at x when
they agree after restriction to some finite prefix of x.  Indicator
functions of the basic germ sets span the function model; the
homomorphism ``pi_map`` sends a spanning algebra term to the indicator
of its triple, term by term.

Germ equality is decided by a two-track walk along the path: both
triples are developed prefix by prefix; the walk ends with Equal when
the developed triples coincide, with NotEqual when the developed ranges
diverge (permanent) or the carried pair revisits a state on the
periodic part, and with Undecided at the configured caps.  For actions
built from an integer matrix pair the walk is total: the carried
difference evolves by exact rational multiplications, so divergence and
resolution are both certified.

``fn_is_zero`` is three valued.  NonZero always comes with a witness
germ and is unconditionally sound.  Zero is claimed only when the
instance satisfies a verified condition under which the function model
is faithful (matrix-pair instances; finite groups whose fixed-path
structure is verified); otherwise the verdict is ZeroUpToDepth.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import IntegersZ, SelfSimilarAction, act_path, strongly_fixed_by
from .algebra import Element, _mul_term_maps, _star_term_map, expand_term, term_sort_key
from .graphs import CylinderRelation, EvPath, Path, concat, cylinder_relation, some_tail
from .rings import Ring
from .semigroup import ZERO, STriple, s_mul, s_star


class GermError(ValueError):
    pass


class EvaluationUndecided(RuntimeError):
    """A germ evaluation hit the depth cap before the answer was known."""

    def __init__(self, term: STriple):
        self.term = term
        super().__init__(f"germ comparison against {term} undecided at the configured depth")


class UnsupportedInstance(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# germs


@dataclass(frozen=True, slots=True)
class GermPoint:
    triple: STriple
    x: EvPath

    def __str__(self) -> str:
        return f"germ {self.triple} : {self.x}"


def make_germ(act: SelfSimilarAction, triple: STriple, x: EvPath) -> GermPoint:
    if x.prefix(act.graph, len(triple.beta)) != triple.beta:
        raise GermError(f"path {x} does not lie in the cylinder of {triple.beta}")
    return GermPoint(triple, x)


def prepend_tail(graph, p: Path, tail: EvPath) -> EvPath:
    """The infinite path p followed by the given tail."""
    return EvPath(concat(p, tail.transient), tail.cycle)


# ---------------------------------------------------------------------------
# germ equality


@dataclass(frozen=True, slots=True)
class GermEqual:
    prefix_len: int


@dataclass(frozen=True, slots=True)
class GermNotEqual:
    reason: str


@dataclass(frozen=True, slots=True)
class GermUndecided:
    steps: int


def germ_eq(
    act: SelfSimilarAction,
    s: STriple,
    t: STriple,
    x: EvPath,
    max_steps: int = 100_000,
    growth_cap: int = 10**6,
):
    """Decide whether s and t have the same germ at x.

    Requires x to lie in the cylinders of both right legs.
    """
    graph, grp = act.graph, act.group
    for tr in (s, t):
        if x.prefix(graph, len(tr.beta)) != tr.beta:
            raise GermError(f"{x} is outside the cylinder of {tr.beta}")
    if s == t:
        return GermEqual(0)
    if s.degree != t.degree:
        return GermNotEqual("degree differs; the germs live on different graded parts")

    n0 = max(len(s.beta), len(t.beta))
    base = x.prefix(graph, n0)

    def develop(tr):
        lam = graph.subpath(base, len(tr.beta))
        img, carried = act_path(act, tr.g, lam)
        return concat(tr.alpha, img), carried

    a1, h1 = develop(s)
    a2, h2 = develop(t)
    if a1 != a2:
        return GermNotEqual(f"ranges diverge within the first {n0} edges")
    if h1 == h2:
        return GermEqual(n0)

    katsura = act.katsura_spec is not None
    anchor_phase = len(x.transient)
    last_anchor_diff = None
    seen: set = set()
    pos = n0
    steps = 0
    while steps < max_steps:
        state = (x.phase(pos), h1, h2)
        if state in seen:
            return GermNotEqual("carried pair revisits a state along the cycle")
        seen.add(state)
        if katsura and x.phase(pos) == anchor_phase:
            diff = h1 - h2
            if last_anchor_diff is not None:
                ratio_num, ratio_den = diff, last_anchor_diff
                if ratio_num % ratio_den == 0 and abs(ratio_num) >= abs(ratio_den):
                    # the difference scales by a nonzero integer every
                    # turn of the cycle, so it never reaches zero
                    return GermNotEqual(
                        "carried difference scales by an integer ratio along the cycle"
                    )
            last_anchor_diff = diff
        eid = x.edge_at(pos)
        i1, h1n = act.act_edge(h1, eid)
        i2, h2n = act.act_edge(h2, eid)
        if i1 != i2:
            return GermNotEqual(f"images diverge at edge {pos}")
        h1, h2 = h1n, h2n
        pos += 1
        steps += 1
        if h1 == h2:
            return GermEqual(pos)
        if isinstance(grp, IntegersZ) and not katsura:
            if abs(h1) > growth_cap or abs(h2) > growth_cap:
                return GermUndecided(steps)
    return GermUndecided(steps)


def act_ev_path(act: SelfSimilarAction, g, x: EvPath, cap: int = 100_000) -> EvPath:
    """The image g.x as an eventually periodic path.

    Walks until the (carried element, cycle phase) state recurs; raises
    when it does not within the cap (possible for general integer
    actions, never for finite groups or matrix-pair instances).
    """
    graph = act.graph
    h = g
    images: list[str] = []
    seen: dict = {}
    pos = 0
    while pos < cap:
        key = (x.phase(pos), h)
        if key in seen:
            cut = seen[key]
            v = act.act_vertex(g, x.range_vertex)
            transient = graph.path(images[:cut]) if cut else graph.vertex_path(v)
            return EvPath(transient, graph.path(images[cut:]))
        seen[key] = pos
        img, h = act.act_edge(h, x.edge_at(pos))
        images.append(img)
        pos += 1
    raise UnsupportedInstance("image of the infinite path is not eventually periodic")


# ---------------------------------------------------------------------------
# the function model


class SteinbergFn:
    """A finite combination of indicator functions of basic germ sets."""

    __slots__ = ("action", "ring", "_terms")

    def __init__(self, action: SelfSimilarAction, ring: Ring, terms=None):
        self.action = action
        self.ring = ring
        clean: dict[STriple, object] = {}
        for t, c in (terms or {}).items():
            if t is ZERO:
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                prev = clean.get(t)
                if prev is None:
                    clean[t] = c
                else:
                    acc = ring.add(prev, c)
                    if ring.is_zero(acc):
                        del clean[t]
                    else:
                        clean[t] = acc
        self._terms = clean

    @classmethod
    def indicator(cls, action, ring, triple: STriple, coeff=1) -> "SteinbergFn":
        return cls(action, ring, {triple: coeff})

    def terms(self) -> dict:
        return dict(self._terms)

    def canonical_items(self):
        return sorted(self._terms.items(), key=lambda kv: term_sort_key(self.action, kv[0]))

    @property
    def is_trivially_zero(self) -> bool:
        return not self._terms

    def _check(self, other):
        if other.action is not self.action or other.ring != self.ring:
            raise GermError("functions live over different actions or rings")

    def __add__(self, other: "SteinbergFn") -> "SteinbergFn":
        self._check(other)
        terms = dict(self._terms)
        ring = self.ring
        for t, c in other._terms.items():
            prev = terms.get(t)
            acc = c if prev is None else ring.add(prev, c)
            if ring.is_zero(acc):
                terms.pop(t, None)
            else:
                terms[t] = acc
        return SteinbergFn(self.action, ring, terms)

    def __neg__(self):
        return SteinbergFn(
            self.action, self.ring, {t: self.ring.neg(c) for t, c in self._terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r):
        r = self.ring.coerce(r)
        return SteinbergFn(
            self.action, self.ring, {t: self.ring.mul(r, c) for t, c in self._terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, SteinbergFn):
            return self.scale(other)
        self._check(other)
        return SteinbergFn(
            self.action, self.ring, _mul_term_maps(self.action, self.ring, self._terms, other._terms)
        )

    def star(self):
        return SteinbergFn(
            self.action, self.ring, _star_term_map(self.action, self.ring, self._terms)
        )

    def __eq__(self, other):
        return (
            isinstance(other, SteinbergFn)
            and other.action is self.action
            and other.ring == self.ring
            and other._terms == self._terms
        )

    def __repr__(self):
        if not self._terms:
            return "<fn 0>"
        bits = [f"{self.ring.show(c)}*1_{t}" for t, c in self.canonical_items()]
        return "<fn " + " + ".join(bits) + ">"


def pi_map(a: Element) -> SteinbergFn:
    """Spanning term to indicator function, coefficients preserved."""
    return SteinbergFn(a.action, a.ring, a.terms())


def fn_eval(f: SteinbergFn, p: GermPoint, max_steps: int = 100_000):
    """Evaluate the function at a germ point.

    Sums the coefficients of all terms whose germ at the point equals
    the point's own triple; raises :class:`EvaluationUndecided` when a
    comparison cannot be settled within the cap.
    """
    act, ring = f.action, f.ring
    val = ring.zero()
    for t, c in f.canonical_items():
        if p.x.prefix(act.graph, len(t.beta)) != t.beta:
            continue
        verdict = germ_eq(act, p.triple, t, p.x, max_steps=max_steps)
        if isinstance(verdict, GermUndecided):
            raise EvaluationUndecided(t)
        if isinstance(verdict, GermEqual):
            val = ring.add(val, c)
    return val


def fn_eval_convolution(f: SteinbergFn, g: SteinbergFn, p: GermPoint):
    """Pointwise convolution product (f g)(p), computed from germ
    factorizations rather than from the semigroup product.  Used to
    cross-check the structural product."""
    act, ring = f.action, f.ring
    candidates = [t for t in g._terms if p.x.prefix(act.graph, len(t.beta)) == t.beta]
    reps: list[STriple] = []
    for t in candidates:
        if not any(
            isinstance(germ_eq(act, t, r, p.x), GermEqual) for r in reps
        ):
            reps.append(t)
    val = ring.zero()
    for rep in reps:
        g_val = fn_eval(g, make_germ(act, rep, p.x))
        if ring.is_zero(g_val):
            continue
        left = s_mul(act, p.triple, s_star(act, rep))
        if left is ZERO:
            continue
        y = act_ev_path(act, rep.g, _strip_prefix(act, p.x, len(rep.beta)))
        y = prepend_tail(act.graph, rep.alpha, y)
        f_val = fn_eval(f, make_germ(act, left, y))
        val = ring.add(val, ring.mul(f_val, g_val))
    return val


def _strip_prefix(act: SelfSimilarAction, x: EvPath, n: int) -> EvPath:
    """The tail of x after removing its first n edges."""
    graph = act.graph
    t = len(x.transient)
    if n <= t:
        transient = graph.subpath(x.transient, n)
        return EvPath(transient, x.cycle)
    k = (n - t) % len(x.cycle)
    rotated_edges = x.cycle.edges[k:] + x.cycle.edges[:k]
    cyc = graph.path(list(rotated_edges))
    return EvPath(graph.vertex_path(cyc.range_vertex), cyc)


# ---------------------------------------------------------------------------
# germ test points


def tail_points(act: SelfSimilarAction, v: str, depth: int) -> list[EvPath]:
    """Eventually periodic tails mu (rho)^inf from v with |mu|+|rho| <= depth."""
    graph = act.graph
    out = []
    for mu in graph.all_paths(v, max(depth - 1, 0)):
        for rho in graph.simple_cycles_at(mu.source_vertex, depth - len(mu)):
            out.append(EvPath(mu, rho))
    return out


def germ_points_for_term(act: SelfSimilarAction, t: STriple, depth: int) -> list[GermPoint]:
    return [
        GermPoint(t, prepend_tail(act.graph, t.beta, y))
        for y in tail_points(act, t.beta.source_vertex, depth)
    ]


# ---------------------------------------------------------------------------
# zero testing


@dataclass(frozen=True)
class ZeroCertified:
    route: str

    kind = "zero"


@dataclass(frozen=True)
class NonZeroWitness:
    witness: GermPoint
    value: object

    kind = "nonzero"


@dataclass(frozen=True)
class ZeroUpToDepth:
    depth: int
    note: str

    kind = "zero-up-to-depth"


def instance_certificate(act: SelfSimilarAction) -> str | None:
    """The condition, if any, under which a vanishing function model
    certifies a vanishing element for this instance."""
    cache = act.analysis_cache
    if "certificate" in cache:
        return cache["certificate"]
    cert: str | None = None
    if act.katsura_spec is not None:
        cert = "matrix pair with finitely many vertices"
    elif not isinstance(act.group, IntegersZ):
        elements = act.group.elements
        if len(elements) == 1:
            cert = "trivial group (graph-algebra case)"
        elif _finite_group_hausdorff(act):
            cert = "finitely many minimal fixed paths per group element (Hausdorff)"
        elif all(_vertex_split_ok(act, v) for v in act.graph.vertices):
            cert = "per-vertex fixed-path structure verified"
    cache["certificate"] = cert
    return cert


def _finite_group_hausdorff(act: SelfSimilarAction) -> bool:
    """Whether every (group element, vertex) has finitely many minimal
    strongly fixed paths.  Exact: the carried-value state space is
    finite, so it suffices to rule out reachable productive cycles."""
    grp, graph = act.group, act.graph
    states = [(v, h) for v in graph.vertices for h in grp.elements if not grp.is_identity(h)]
    succ: dict = {}
    emits: dict = {}
    for v, h in states:
        outs, em = [], False
        for e in graph.edges_into(v):
            img, h2 = act.act_edge(h, e.id)
            if img != e.id:
                continue
            if grp.is_identity(h2):
                em = True
            else:
                outs.append((e.source_vertex, h2))
        succ[(v, h)] = outs
        emits[(v, h)] = em
    productive = {s for s in states if emits[s]}
    changed = True
    while changed:
        changed = False
        for s in states:
            if s not in productive and any(c in productive for c in succ[s]):
                productive.add(s)
                changed = True
    # a cycle within the productive part means an infinite family
    color: dict = {}

    def has_cycle(s) -> bool:
        color[s] = 1
        for c in succ[s]:
            if c not in productive:
                continue
            if color.get(c, 0) == 1:
                return True
            if color.get(c, 0) == 0 and has_cycle(c):
                return True
        color[s] = 2
        return False

    return not any(color.get(s, 0) == 0 and has_cycle(s) for s in productive)


# -- finite-group pattern automaton ------------------------------------------

_LIVE, _DEAD, _DONE = 0, 1, 2


def _difference_reps(act: SelfSimilarAction, elems) -> list:
    """Canonical representatives of the nonidentity differences h^-1 g,
    identified with their inverses (fixing by d and by d^-1 agree)."""
    grp = act.group
    reps = set()
    for g in elems:
        for h in elems:
            if g == h:
                continue
            d = grp.mul(grp.inv(h), g)
            reps.add(min(d, grp.inv(d), key=grp.sort_key))
    return sorted(reps, key=grp.sort_key)


def _pattern_graph(act: SelfSimilarAction, w: str, ds, node_cap: int = 100_000):
    """Reachable (vertex, per-d status) nodes of the fixing walk from w.

    Status per tracked d: (LIVE, carried) until the walked prefix stops
    being fixed by d (DEAD) or becomes strongly fixed by d (DONE); DONE
    and DEAD are absorbing.  Returns None when the node cap is hit
    (possible only for integer actions).
    """
    graph = act.graph
    grp = act.group
    init = (w, tuple((_LIVE, d) for d in ds))
    nodes = {init}
    queue = [init]
    succ: dict = {}
    while queue:
        node = queue.pop(0)
        v, statuses = node
        outs = []
        for e in graph.edges_into(v):
            new = []
            for st in statuses:
                if st[0] != _LIVE:
                    new.append(st)
                    continue
                img, h2 = act.act_edge(st[1], e.id)
                if img != e.id:
                    new.append((_DEAD,))
                elif grp.is_identity(h2):
                    new.append((_DONE,))
                else:
                    new.append((_LIVE, h2))
            child = (e.source_vertex, tuple(new))
            outs.append((e.id, child))
            if child not in nodes:
                if len(nodes) >= node_cap:
                    return None
                nodes.add(child)
                queue.append(child)
        succ[node] = outs
    return init, nodes, succ


def _nodes_on_cycles(nodes, succ):
    """Nodes lying on a directed cycle (Tarjan over the node graph)."""
    import sys

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(nodes) + 100))
    index: dict = {}
    low: dict = {}
    on: set = set()
    stack: list = []
    counter = [0]
    out = set()

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for _, w in succ.get(v, ()):
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
            if len(comp) > 1 or any(c == v for _, c in succ.get(v, ())):
                out.update(comp)

    for v in list(nodes):
        if v not in index:
            strong(v)
    return out


def _lasso_to(succ, start, goal):
    """Edge labels start -> goal and a cycle at goal, as edge id lists."""
    stem = _bfs_edges(succ, start, goal)
    cycle = None
    for eid, child in succ.get(goal, ()):
        if child == goal:
            cycle = [eid]
            break
        back = _bfs_edges(succ, child, goal)
        if back is not None:
            cycle = [eid] + back
            break
    if stem is None or cycle is None:
        raise GermError("internal: node not on a reachable cycle")
    return stem, cycle


def _bfs_edges(succ, start, goal):
    if start == goal:
        return []
    prev = {start: None}
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
                    cur, e2 = prev[cur]
                    out.append(e2)
                return out[::-1]
            queue.append(child)
    return None


def _vertex_split_ok(act: SelfSimilarAction, u: str) -> bool:
    """Per-vertex faithfulness condition for finite groups: either some
    tail from u avoids strong fixing entirely, or the minimal fixed
    paths from u are finitely many with pairwise disjoint cylinders."""
    grp = act.group
    ds = [g for g in _difference_reps(act, grp.elements)]
    built = _pattern_graph(act, u, ds)
    if built is None:
        return False
    init, nodes, succ = built
    cyc_nodes = _nodes_on_cycles(nodes, succ)
    if any(all(st[0] != _DONE for st in n[1]) for n in cyc_nodes):
        return True  # an unfixed tail exists
    paths = _minimal_fixed_any_finite(act, u, built)
    if paths is None:
        return False
    for i, p in enumerate(paths):
        for q in paths[i + 1 :]:
            if cylinder_relation(p, q) is not CylinderRelation.DISJOINT:
                return False
    return True


def _minimal_fixed_any_finite(act, u, built=None):
    """Minimal strongly fixed paths (by any nonidentity element) from u
    for a finite group; None when infinitely many."""
    grp = act.group
    ds = _difference_reps(act, grp.elements)
    if built is None:
        built = _pattern_graph(act, u, ds)
        if built is None:
            return None
    init, nodes, succ = built

    def pattern_empty(node):
        return all(st[0] != _DONE for st in node[1])

    # emissions: transitions out of an all-live/dead node that newly fix
    emitting: dict = {}
    for node in nodes:
        if not pattern_empty(node):
            continue
        emitting[node] = [
            (eid, child) for eid, child in succ.get(node, ()) if not pattern_empty(child)
        ]
    productive = {n for n, es in emitting.items() if es}
    changed = True
    while changed:
        changed = False
        for node in emitting:
            if node in productive:
                continue
            if any(
                c in productive
                for _, c in succ.get(node, ())
                if pattern_empty(c)
            ):
                productive.add(node)
                changed = True
    # a cycle among empty-pattern nodes that can still emit -> infinite
    color: dict = {}

    def cyc(n):
        color[n] = 1
        for _, c in succ.get(n, ()):
            if not pattern_empty(c) or c not in productive:
                continue
            if color.get(c, 0) == 1:
                return True
            if color.get(c, 0) == 0 and cyc(c):
                return True
        color[n] = 2
        return False

    if init in productive and any(color.get(n, 0) == 0 and cyc(n) for n in productive):
        return None
    out = []

    def walk(node, edges):
        for eid, child in emitting.get(node, ()):
            out.append(act.graph.path(edges + [eid]))
        for eid, child in succ.get(node, ()):
            if pattern_empty(child) and child in productive:
                walk(child, edges + [eid])

    if init in productive:
        walk(init, [])
    return sorted(out, key=lambda p: (len(p), p.edges))


# -- the decision pipeline ----------------------------------------------------


def _group_by_legs(act, ring, terms: dict):
    """Degree-split, expand to common depth, then bucket by (alpha, beta)."""
    by_degree: dict[int, dict] = {}
    for t, c in terms.items():
        by_degree.setdefault(t.degree, {})[t] = c
    groups = []
    for deg in sorted(by_degree):
        component = by_degree[deg]
        m1 = max(len(t.alpha) for t in component)
        expanded: dict[STriple, object] = {}
        for t, c in component.items():
            for nt in expand_term(act, t, m1 - len(t.alpha)):
                prev = expanded.get(nt)
                acc = c if prev is None else ring.add(prev, c)
                if ring.is_zero(acc):
                    expanded.pop(nt, None)
                else:
                    expanded[nt] = acc
        buckets: dict[tuple[Path, Path], dict] = {}
        for t, c in expanded.items():
            buckets.setdefault((t.alpha, t.beta), {})[t.g] = c

        def leg_key(legs):
            alpha, beta = legs
            return (
                len(beta.edges),
                beta.edges,
                beta.range_vertex,
                alpha.edges,
                alpha.range_vertex,
            )

        groups.extend(
            (alpha, beta, buckets[(alpha, beta)])
            for alpha, beta in sorted(buckets, key=leg_key)
        )
    return groups


def _decide_group(act, ring, alpha: Path, beta: Path, coeffs: dict):
    """Decide whether the indicator combination over one (alpha, beta)
    pair vanishes everywhere.  Returns ("zero", None), ("nonzero",
    witness germ point, value) or (None, ...) when undecided."""
    grp = act.group
    graph = act.graph
    w = beta.source_vertex
    order = sorted(coeffs, key=grp.sort_key)

    if len(order) == 1:
        g = order[0]
        tail = some_tail(graph, w)
        germ = GermPoint(STriple(alpha, g, beta), prepend_tail(graph, beta, tail))
        return ("nonzero", germ, coeffs[g])

    if act.katsura_spec is not None:
        from .katsura import minimal_fixed_paths_any, uncarried_tail

        tail = uncarried_tail(act, w)
        if tail is not None:
            # a tail with no strongly fixed prefix separates all twists,
            # so any surviving coefficient is visible on it
            g = order[0]
            germ = GermPoint(STriple(alpha, g, beta), prepend_tail(graph, beta, tail))
            return ("nonzero", germ, coeffs[g])
        fixed = minimal_fixed_paths_any(act, w)
        assert fixed is not None and fixed, "carried analysis out of sync"
        for gamma in fixed:
            classes = _fix_classes(act, gamma, order)
            for cls in classes:
                total = ring.zero()
                for g in cls:
                    total = ring.add(total, coeffs[g])
                if not ring.is_zero(total):
                    g = cls[0]
                    tail = some_tail(graph, gamma.source_vertex)
                    y = prepend_tail(graph, concat(beta, gamma), tail)
                    return ("nonzero", GermPoint(STriple(alpha, g, beta), y), total)
        return ("zero", None, None)

    # finite groups (and integer actions whose walk happens to close):
    # exhaust the collision patterns along all tails
    ds = _difference_reps(act, order)
    built = _pattern_graph(act, w, ds)
    if built is None:
        return (None, None, None)
    init, nodes, succ = built
    cyc_nodes = _nodes_on_cycles(nodes, succ)
    patterns: dict[frozenset, object] = {}
    for node in cyc_nodes:
        done = frozenset(d for d, st in zip(ds, node[1]) if st[0] == _DONE)
        patterns.setdefault(done, node)
    for done, node in sorted(patterns.items(), key=lambda kv: (len(kv[0]), repr(kv[0]))):
        for g in order:
            total = ring.zero()
            for h in order:
                if h == g:
                    total = ring.add(total, coeffs[h])
                    continue
                d = grp.mul(grp.inv(h), g)
                rep = min(d, grp.inv(d), key=grp.sort_key)
                if rep in done:
                    total = ring.add(total, coeffs[h])
            if not ring.is_zero(total):
                stem_edges, cycle_edges = _lasso_to(succ, init, node)
                stem = graph.path(stem_edges) if stem_edges else graph.vertex_path(w)
                y = prepend_tail(graph, beta, EvPath(stem, graph.path(cycle_edges)))
                return ("nonzero", GermPoint(STriple(alpha, g, beta), y), total)
    return ("zero", None, None)


def _fix_classes(act, gamma: Path, order) -> list[list]:
    """Group the twists by joint strong fixing over the given path."""
    grp = act.group
    classes: list[list] = []
    for g in order:
        for cls in classes:
            d = grp.mul(grp.inv(cls[0]), g)
            if strongly_fixed_by(act, d, gamma):
                cls.append(g)
                break
        else:
            classes.append([g])
    return classes


def fn_is_zero(f: SteinbergFn, depth: int = 6):
    """Three-valued zero test for the function model.

    The decision pipeline splits by degree, expands to a common depth
    and analyses each (alpha, beta) bucket: buckets over distinct legs
    have disjoint supports, so the function vanishes exactly when every
    bucket does.  A NonZero answer always carries a witness germ.  Zero
    is returned only under a verified instance condition; if the
    pipeline cannot decide, the function is evaluated on the depth-bounded
    germ test set and the verdict is ZeroUpToDepth.
    """
    act, ring = f.action, f.ring
    if f.is_trivially_zero:
        return ZeroCertified(route="empty canonical form")

    groups = _group_by_legs(act, ring, f._terms)
    if not groups:
        # everything cancelled under depth expansion, which rewrites by
        # the defining relations only; no model needed
        return ZeroCertified(route="defining-relation collapse")

    cert = instance_certificate(act)
    undecided = False
    for alpha, beta, coeffs in groups:
        status, witness, value = _decide_group(act, ring, alpha, beta, coeffs)
        if status == "nonzero":
            return NonZeroWitness(witness=witness, value=value)
        if status is None:
            undecided = True
    if not undecided:
        if cert is not None:
            return ZeroCertified(route=cert)
        return ZeroUpToDepth(
            depth=depth,
            note="the function model vanishes everywhere, but no instance "
            "condition certifies that the element itself is zero",
        )

    # bounded fallback: scan the germ test set
    for t in sorted(f._terms, key=lambda t: term_sort_key(act, t)):
        for germ in germ_points_for_term(act, t, depth):
            try:
                value = fn_eval(f, germ)
            except EvaluationUndecided:
                continue
            if not ring.is_zero(value):
                return NonZeroWitness(witness=germ, value=value)
    return ZeroUpToDepth(depth=depth, note="vanishes on the bounded germ test set")


# ---------------------------------------------------------------------------
# partitions of the twisted vertex projections


@dataclass(frozen=True)
class PartitionUnit:
    m: object
    gamma: Path
    triple: STriple
    element: Element


@dataclass
class PartitionReport:
    vertex: str
    applicable: bool
    fixed_paths: list[Path]
    every_tail_strongly_fixed: bool
    units: list[PartitionUnit]
    classes: list[list[tuple[object, Path]]]
    identities: list[tuple[Element, list[PartitionUnit]]]
    note: str = ""

    def unit(self, m, gamma: Path) -> PartitionUnit:
        for u in self.units:
            if u.m == m and u.gamma == gamma:
                return u
        raise KeyError((m, gamma))

    def class_of(self, m, gamma: Path) -> list[tuple[object, Path]]:
        for cls in self.classes:
            if (m, gamma) in cls:
                return cls
        raise KeyError((m, gamma))


def _fixed_paths_for_partition(act, u: str):
    if act.katsura_spec is not None:
        from .katsura import minimal_fixed_paths_any, uncarried_tail

        return minimal_fixed_paths_any(act, u), uncarried_tail(act, u) is None
    if not isinstance(act.group, IntegersZ):
        paths = _minimal_fixed_any_finite(act, u)
        if paths is None:
            return None, False
        ds = _difference_reps(act, act.group.elements)
        built = _pattern_graph(act, u, ds)
        if built is None:
            return None, False
        _, nodes, succ = built
        cyc_nodes = _nodes_on_cycles(nodes, succ)
        every = not any(all(st[0] != _DONE for st in n[1]) for n in cyc_nodes)
        return paths, every
    raise UnsupportedInstance(
        "minimal fixed paths are only computed exactly for matrix-pair "
        "instances and finite groups"
    )


def partition_units(act: SelfSimilarAction, ring: Ring, u: str, ms, depth: int = 6):
    """Split each twisted projection at u along the minimal strongly
    fixed paths and classify which twists give the same piece.

    The pieces over one fixed path gamma are equal exactly when gamma is
    strongly fixed by the difference of the twists; distinct fixed paths
    give disjoint pieces.  When every tail from u is strongly fixed the
    pieces of one twist reassemble the projection itself, and the
    reassembly identities are emitted.
    """
    grp = act.group
    graph = act.graph
    ms = list(ms)
    fixed, every = _fixed_paths_for_partition(act, u)
    if fixed is None:
        raise UnsupportedInstance(f"infinitely many minimal fixed paths at {u!r}")
    if not fixed:
        return PartitionReport(
            vertex=u,
            applicable=False,
            fixed_paths=[],
            every_tail_strongly_fixed=False,
            units=[],
            classes=[],
            identities=[],
            note="no strongly fixed paths at this vertex; nothing to split",
        )
    for i, p in enumerate(fixed):
        for q in fixed[i + 1 :]:
            if cylinder_relation(p, q) is not CylinderRelation.DISJOINT:
                raise UnsupportedInstance(
                    f"cylinders of minimal fixed paths {p} and {q} overlap"
                )

    units: list[PartitionUnit] = []
    for m in ms:
        for gamma in fixed:
            minv = grp.inv(m)
            img, carried = act_path(act, minv, gamma)
            triple = STriple(gamma, grp.inv(carried), img)
            units.append(
                PartitionUnit(
                    m=m,
                    gamma=gamma,
                    triple=triple,
                    element=Element.from_triple(act, ring, triple),
                )
            )

    classes: list[list[tuple[object, Path]]] = []
    for gamma in fixed:
        buckets: list[list] = []
        for m in ms:
            for cls in buckets:
                d = grp.mul(cls[0], grp.inv(m))
                if strongly_fixed_by(act, d, gamma):
                    cls.append(m)
                    break
            else:
                buckets.append([m])
        classes.extend([[(m, gamma) for m in cls] for cls in buckets])

    identities = []
    if every:
        for m in ms:
            lhs = Element.p(act, ring, u, m)
            identities.append((lhs, [un for un in units if un.m == m]))
    return PartitionReport(
        vertex=u,
        applicable=True,
        fixed_paths=list(fixed),
        every_tail_strongly_fixed=every,
        units=units,
        classes=classes,
        identities=identities,
    )


def class_coefficient_sums(report: PartitionReport, coeffs: dict, ring: Ring):
    """Per-class coefficient totals of a diagonal combination over the
    report's twists; all-zero totals certify the combination vanishes."""
    out = []
    for cls in report.classes:
        total = ring.zero()
        for m, _gamma in cls:
            total = ring.add(total, ring.coerce(coeffs.get(m, 0)))
        out.append((cls, total))
    return out
