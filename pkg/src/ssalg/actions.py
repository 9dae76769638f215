"""Groups and self-similar actions on graphs.

A self-similar action is a group acting on a graph by automorphisms
together with a cocycle assigning a "carried" group element to every
(group element, edge) pair.  The action extends to finite paths by the
left fold

    g . (a b) = (g . a) (phi(g, a) . b),      phi(g, ab) = phi(phi(g, a), b)

which :func:`act_path` implements.

Two group kinds ship: the integers (generator data for +1 and -1 is
stored, arbitrary powers are composed on demand and memoised) and finite
groups given by full multiplication tables.  The :class:`Group`
interface is open so other kinds can be added.

All values are immutable after validation; the memo caches only ever
gain entries whose values are deterministic, so concurrent readers see
behaviour as if the functions were pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph, Path, ValidationReport, concat


class ActionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# groups


class Group:
    """Decidable-equality group interface."""

    kind = "group"

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def is_identity(self, a) -> bool:
        return a == self.identity()

    def sort_key(self, a):
        raise NotImplementedError

    def show(self, a) -> str:
        return str(a)


class IntegersZ(Group):
    """The integers under addition, with arbitrary precision."""

    kind = "Z"

    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def contains(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool)

    def sort_key(self, a):
        return a

    def __eq__(self, other):
        return isinstance(other, IntegersZ)

    def __hash__(self):
        return hash("IntegersZ")


class FiniteGroup(Group):
    """A finite group from an explicit multiplication table.

    The table is taken as given; :func:`validate_group` checks the group
    axioms rather than completing or repairing a bad table.
    """

    kind = "finite"

    def __init__(self, elements, table: dict[tuple[str, str], str]):
        self.elements: tuple[str, ...] = tuple(elements)
        self.table = dict(table)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self._identity = self._find_identity()
        self._inverses = self._find_inverses()

    def _find_identity(self) -> str | None:
        for e in self.elements:
            if all(
                self.table.get((e, x)) == x and self.table.get((x, e)) == x
                for x in self.elements
            ):
                return e
        return None

    def _find_inverses(self) -> dict[str, str]:
        inv: dict[str, str] = {}
        if self._identity is None:
            return inv
        for x in self.elements:
            for y in self.elements:
                if (
                    self.table.get((x, y)) == self._identity
                    and self.table.get((y, x)) == self._identity
                ):
                    inv[x] = y
                    break
        return inv

    def identity(self):
        if self._identity is None:
            raise ActionError("multiplication table has no identity element")
        return self._identity

    def mul(self, a, b):
        try:
            return self.table[(a, b)]
        except KeyError:
            raise ActionError(f"product {a!r}*{b!r} missing from table") from None

    def inv(self, a):
        try:
            return self._inverses[a]
        except KeyError:
            raise ActionError(f"no inverse recorded for {a!r}") from None

    def contains(self, a) -> bool:
        return a in self._index

    def sort_key(self, a):
        return self._index[a]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and other.elements == self.elements
            and other.table == self.table
        )

    def __hash__(self):
        return hash(("FiniteGroup", self.elements))


def trivial_group() -> FiniteGroup:
    return FiniteGroup(("0",), {("0", "0"): "0"})


def cyclic_group(n: int, prefix: str = "g") -> FiniteGroup:
    """C_n with elements g0..g(n-1); g0 is the identity."""
    names = tuple(f"{prefix}{i}" for i in range(n))
    table = {
        (names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)
    }
    return FiniteGroup(names, table)


def validate_group(group: Group) -> ValidationReport:
    """Group-axiom check; exhaustive for finite tables, vacuous for Z."""
    report = ValidationReport()
    if isinstance(group, IntegersZ):
        return report
    if not isinstance(group, FiniteGroup):
        report.add("unknown-kind", f"unsupported group kind {group!r}")
        return report
    els = group.elements
    if len(set(els)) != len(els):
        report.add("duplicate-element", "element ids are not unique")
    for a in els:
        for b in els:
            c = group.table.get((a, b))
            if c is None:
                report.add("incomplete-table", f"product {a!r}*{b!r} missing")
            elif c not in group._index:
                report.add("not-closed", f"product {a!r}*{b!r} = {c!r} is not an element")
    if report.ok:
        for a in els:
            for b in els:
                for c in els:
                    if group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c)):
                        report.add(
                            "not-associative",
                            f"({a!r}*{b!r})*{c!r} != {a!r}*({b!r}*{c!r})",
                        )
        if group._identity is None:
            report.add("no-identity", "no two-sided identity element")
        else:
            for a in els:
                if a not in group._inverses:
                    report.add("no-inverse", f"no inverse for {a!r}")
    return report


# ---------------------------------------------------------------------------
# self-similar actions


@dataclass
class ElementTables:
    """Action data for a single group element (or integer generator)."""

    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    cocycle: dict[str, object]


@dataclass
class SelfSimilarAction:
    """The triple (group, graph, cocycle) with per-element tables.

    For ``IntegersZ`` the ``tables`` dict holds generator data under the
    keys +1 and -1; other powers are derived by composition and memoised
    per (power, edge).  For finite groups a table per element is stored.

    ``katsura_spec``/``katsura_edge_index`` are populated when the action
    is produced by the matrix-pair builder in :mod:`ssalg.katsura`; they
    unlock the exact integrality arithmetic used by the equality and
    zero tests.
    """

    graph: Graph
    group: Group
    tables: dict[object, ElementTables]
    katsura_spec: object = None
    katsura_edge_index: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    _edge_memo: dict = field(default_factory=dict, repr=False)
    _vertex_memo: dict = field(default_factory=dict, repr=False)
    analysis_cache: dict = field(default_factory=dict, repr=False)

    # -- single-step action -------------------------------------------------

    def act_vertex(self, g, v: str) -> str:
        group = self.group
        if group.is_identity(g):
            return v
        if isinstance(group, IntegersZ):
            key = (g, v)
            hit = self._vertex_memo.get(key)
            if hit is not None:
                return hit
            step = 1 if g > 0 else -1
            out = self.tables[step].vertex_map[self.act_vertex(g - step, v)]
            self._vertex_memo[key] = out
            return out
        return self.tables[g].vertex_map[v]

    def act_edge(self, g, e: str) -> tuple[str, object]:
        """Return (g.e, phi(g, e))."""
        group = self.group
        if group.is_identity(g):
            return e, group.identity()
        if isinstance(group, IntegersZ):
            key = (g, e)
            hit = self._edge_memo.get(key)
            if hit is not None:
                return hit
            step = 1 if g > 0 else -1
            mid_edge, mid_coc = self.act_edge(g - step, e)
            tab = self.tables[step]
            out = (tab.edge_map[mid_edge], tab.cocycle[mid_edge] + mid_coc)
            self._edge_memo[key] = out
            return out
        tab = self.tables[g]
        return tab.edge_map[e], tab.cocycle[e]

    def element_keys(self):
        """The group elements with stored tables (generators for Z)."""
        return tuple(self.tables.keys())


def act_path(act: SelfSimilarAction, g, a: Path) -> tuple[Path, object]:
    """Extend the action to a finite path: returns (g.a, phi(g, a)).

    For a length-0 path the result is (g.v, g): acting on a vertex
    carries the whole group element through.
    """
    if a.is_vertex:
        return act.graph.vertex_path(act.act_vertex(g, a.range_vertex)), g
    h = g
    out_edges = []
    for eid in a.edges:
        img, h = act.act_edge(h, eid)
        out_edges.append(img)
    return act.graph.path(out_edges), h


def strongly_fixed_by(act: SelfSimilarAction, g, a: Path) -> bool:
    """Whether g fixes the path and the carried cocycle dies: g.a = a and
    phi(g, a) = identity.  Vertices are never strongly fixed."""
    if a.is_vertex:
        return False
    image, carried = act_path(act, g, a)
    return image == a and act.group.is_identity(carried)


def validate_action(act: SelfSimilarAction) -> ValidationReport:
    """Exhaustively check the action axioms over the stored tables.

    Covers: each sigma_g is a graph automorphism, cocycle values move
    vertices exactly like the acting element, the cocycle identity
    holds, and composition of tables is consistent (generator
    consistency sigma_1 . sigma_-1 = id in the integer case).
    """
    report = ValidationReport()
    g, grp = act.graph, act.group

    keys = act.element_keys()
    if isinstance(grp, IntegersZ):
        if set(keys) != {1, -1}:
            report.add("missing-generator", "integer actions need tables for +1 and -1")
            return report
    else:
        missing = [e for e in grp.elements if e not in act.tables]
        if missing:
            report.add("missing-element", f"no tables for {missing}")
            return report

    for key in keys:
        tab = act.tables[key]
        label = grp.show(key)
        if sorted(tab.vertex_map) != sorted(g.vertices) or sorted(
            tab.vertex_map.values()
        ) != sorted(g.vertices):
            report.add("not-a-permutation", f"vertex map of {label} is not a permutation")
            continue
        eids = [e.id for e in g.edges]
        if sorted(tab.edge_map) != sorted(eids) or sorted(tab.edge_map.values()) != sorted(
            eids
        ):
            report.add("not-a-permutation", f"edge map of {label} is not a permutation")
            continue
        for e in g.edges:
            img = g.edge(tab.edge_map[e.id])
            if img.range_vertex != tab.vertex_map[e.range_vertex]:
                report.add(
                    "not-automorphism",
                    f"{label}: r({img.id}) != {label}.r({e.id})",
                )
            if img.source_vertex != tab.vertex_map[e.source_vertex]:
                report.add(
                    "not-automorphism",
                    f"{label}: s({img.id}) != {label}.s({e.id})",
                )
            if e.id not in tab.cocycle:
                report.add("missing-cocycle", f"{label}: no cocycle value for {e.id}")
            elif not grp.contains(tab.cocycle[e.id]):
                report.add(
                    "bad-cocycle",
                    f"{label}: cocycle value {tab.cocycle[e.id]!r} outside the group",
                )
    if not report.ok:
        return report

    if isinstance(grp, IntegersZ):
        plus, minus = act.tables[1], act.tables[-1]
        for v in g.vertices:
            if plus.vertex_map[minus.vertex_map[v]] != v or minus.vertex_map[
                plus.vertex_map[v]
            ] != v:
                report.add("generator-inconsistency", f"vertex maps of +1/-1 not inverse at {v!r}")
        for e in g.edges:
            if plus.edge_map[minus.edge_map[e.id]] != e.id or minus.edge_map[
                plus.edge_map[e.id]
            ] != e.id:
                report.add("generator-inconsistency", f"edge maps of +1/-1 not inverse at {e.id!r}")
            # cocycle identity at (+1, -1) and (-1, +1)
            if plus.cocycle[minus.edge_map[e.id]] + minus.cocycle[e.id] != 0:
                report.add("cocycle-identity", f"phi(1,-1.{e.id}) + phi(-1,{e.id}) != 0")
            if minus.cocycle[plus.edge_map[e.id]] + plus.cocycle[e.id] != 0:
                report.add("cocycle-identity", f"phi(-1,1.{e.id}) + phi(1,{e.id}) != 0")
        if report.ok:
            for e in g.edges:
                k = act.tables[1].cocycle[e.id]
                for v in g.vertices:
                    if act.act_vertex(k, v) != act.tables[1].vertex_map[v]:
                        report.add(
                            "vertex-compatibility",
                            f"phi(1,{e.id}).{v} != 1.{v}",
                        )
    else:
        ident = grp.identity()
        id_tab = act.tables[ident]
        for v in g.vertices:
            if id_tab.vertex_map[v] != v:
                report.add("identity-moves", f"identity moves vertex {v!r}")
        for e in g.edges:
            if id_tab.edge_map[e.id] != e.id:
                report.add("identity-moves", f"identity moves edge {e.id!r}")
            if not grp.is_identity(id_tab.cocycle[e.id]):
                report.add("identity-cocycle", f"phi(e_G,{e.id}) is not the identity")
        for a in grp.elements:
            for b in grp.elements:
                ab = grp.mul(a, b)
                for v in g.vertices:
                    if act.tables[a].vertex_map[act.tables[b].vertex_map[v]] != act.tables[
                        ab
                    ].vertex_map[v]:
                        report.add(
                            "composition", f"sigma_{a} sigma_{b} != sigma_{ab} at vertex {v!r}"
                        )
                for e in g.edges:
                    if act.tables[a].edge_map[act.tables[b].edge_map[e.id]] != act.tables[
                        ab
                    ].edge_map[e.id]:
                        report.add(
                            "composition", f"sigma_{a} sigma_{b} != sigma_{ab} at edge {e.id!r}"
                        )
                    lhs = act.tables[ab].cocycle[e.id]
                    rhs = grp.mul(
                        act.tables[a].cocycle[act.tables[b].edge_map[e.id]],
                        act.tables[b].cocycle[e.id],
                    )
                    if lhs != rhs:
                        report.add(
                            "cocycle-identity",
                            f"phi({ab},{e.id}) != phi({a},{b}.{e.id}) phi({b},{e.id})",
                        )
        if report.ok:
            for a in grp.elements:
                for e in g.edges:
                    k = act.tables[a].cocycle[e.id]
                    for v in g.vertices:
                        if act.tables[k].vertex_map[v] != act.tables[a].vertex_map[v]:
                            report.add(
                                "vertex-compatibility",
                                f"phi({a},{e.id}).{v!r} != {a}.{v!r}",
                            )
    return report


def trivial_action(graph: Graph) -> SelfSimilarAction:
    """The trivial group acting identically with zero cocycle."""
    grp = trivial_group()
    tab = ElementTables(
        vertex_map={v: v for v in graph.vertices},
        edge_map={e.id: e.id for e in graph.edges},
        cocycle={e.id: "0" for e in graph.edges},
    )
    return SelfSimilarAction(graph=graph, group=grp, tables={"0": tab})
