"""Line-oriented instance files.

Two input styles share one internal model.  Explicit style::

    graph {
      vertex u
      vertex v
      edge e u u        # edge <id> <range> <source>
      edge f u v
    }
    group Z             # or: group finite { elem a ... mul a b = c ... }
    action {
      gen 1 {           # per element for finite groups: elem a { ... }
        vertex u -> u
        edge e -> e cocycle 1
      }
      gen -1 { ... }
    }

Matrix style::

    katsura {
      vertices = [u, v]         # optional naming
      A = [[1,1],[0,1]]
      B = [[1,0],[0,1]]
      edge e 1 1 0              # optional naming: <id> <i> <j> <n>, i,j 1-based
    }

Comments run from '#' to end of line.  Exactly one of the two styles
must be present; integer actions must supply both generator blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .actions import (
    ElementTables,
    FiniteGroup,
    IntegersZ,
    SelfSimilarAction,
    validate_action,
    validate_group,
)
from .graphs import Edge, Graph, ValidationReport, validate_graph
from .katsura import KatsuraSpec, build_triple, validate_spec


class SpecFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass
class LoadedSpec:
    action: SelfSimilarAction
    source: str  # "explicit" or "katsura"
    reports: dict[str, ValidationReport] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports.values())


def _tokenize_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_spec(text: str) -> LoadedSpec:
    """Parse, build and validate an instance file."""
    graph_data: dict | None = None
    group_data: dict | None = None
    action_data: dict | None = None
    katsura_data: dict | None = None

    lines = list(_tokenize_lines(text))
    i = 0

    def block_lines(start):
        """Lines of a { } block opened at lines[start]; returns (inner, next)."""
        depth = 1
        inner = []
        j = start + 1
        while j < len(lines):
            lineno, line = lines[j]
            if line.endswith("{"):
                depth += 1
            if line == "}":
                depth -= 1
                if depth == 0:
                    return inner, j + 1
            inner.append((lineno, line))
            j += 1
        raise SpecFileError("unterminated block", lines[start][0])

    while i < len(lines):
        lineno, line = lines[i]
        if line == "graph {":
            if graph_data is not None:
                raise SpecFileError("duplicate graph block", lineno)
            inner, i = block_lines(i)
            graph_data = _parse_graph_block(inner)
        elif line == "group Z":
            if group_data is not None:
                raise SpecFileError("duplicate group block", lineno)
            group_data = {"kind": "Z"}
            i += 1
        elif line == "group finite {":
            if group_data is not None:
                raise SpecFileError("duplicate group block", lineno)
            inner, i = block_lines(i)
            group_data = _parse_finite_group_block(inner)
        elif line == "action {":
            if action_data is not None:
                raise SpecFileError("duplicate action block", lineno)
            inner, i = block_lines(i)
            action_data = _parse_action_block(inner)
        elif line == "katsura {":
            if katsura_data is not None:
                raise SpecFileError("duplicate katsura block", lineno)
            inner, i = block_lines(i)
            katsura_data = _parse_katsura_block(inner)
        else:
            raise SpecFileError(f"unrecognized directive {line!r}", lineno)

    explicit = any(x is not None for x in (graph_data, group_data, action_data))
    if explicit and katsura_data is not None:
        raise SpecFileError("give either explicit blocks or a katsura block, not both")
    if katsura_data is not None:
        return _load_katsura(katsura_data)
    if not explicit:
        raise SpecFileError("no instance found: need graph/group/action or katsura")
    if graph_data is None or group_data is None or action_data is None:
        raise SpecFileError("explicit style needs graph, group and action blocks")
    return _load_explicit(graph_data, group_data, action_data)


# ---------------------------------------------------------------------------
# block parsers


def _parse_graph_block(inner):
    vertices: list[str] = []
    edges: list[tuple] = []
    seen: set[str] = set()
    for lineno, line in inner:
        parts = line.split()
        if parts[0] == "vertex" and len(parts) == 2:
            if parts[1] in seen:
                raise SpecFileError(f"duplicate vertex id {parts[1]!r}", lineno)
            seen.add(parts[1])
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 4:
            if parts[1] in seen:
                raise SpecFileError(f"duplicate id {parts[1]!r}", lineno)
            seen.add(parts[1])
            edges.append((parts[1], parts[2], parts[3], lineno))
        else:
            raise SpecFileError(f"bad graph line {line!r}", lineno)
    for eid, r, s, lineno in edges:
        for v in (r, s):
            if v not in vertices:
                raise SpecFileError(f"edge {eid!r} uses undeclared vertex {v!r}", lineno)
    return {"vertices": vertices, "edges": [(e, r, s) for e, r, s, _ in edges]}


def _parse_finite_group_block(inner):
    elems: list[str] = []
    table: dict[tuple[str, str], str] = {}
    for lineno, line in inner:
        parts = line.split()
        if parts[0] == "elem" and len(parts) == 2:
            if parts[1] in elems:
                raise SpecFileError(f"duplicate element {parts[1]!r}", lineno)
            elems.append(parts[1])
        elif parts[0] == "mul" and len(parts) == 5 and parts[3] == "=":
            table[(parts[1], parts[2])] = parts[4]
        else:
            raise SpecFileError(f"bad group line {line!r}", lineno)
    for a in elems:
        for b in elems:
            if (a, b) not in table:
                raise SpecFileError(f"incomplete table: product {a} {b} missing")
    for (a, b), c in table.items():
        for x in (a, b, c):
            if x not in elems:
                raise SpecFileError(f"table mentions undeclared element {x!r}")
    return {"kind": "finite", "elements": elems, "table": table}


def _parse_action_block(inner):
    blocks: dict[str, dict] = {}
    i = 0
    while i < len(inner):
        lineno, line = inner[i]
        parts = line.split()
        if len(parts) == 3 and parts[0] in ("gen", "elem") and parts[2] == "{":
            key = (parts[0], parts[1])
            body: dict = {"vertex": {}, "edge": {}, "cocycle": {}, "line": lineno}
            i += 1
            while i < len(inner) and inner[i][1] != "}":
                lineno2, line2 = inner[i]
                p = line2.split()
                if len(p) == 4 and p[0] == "vertex" and p[2] == "->":
                    body["vertex"][p[1]] = p[3]
                elif len(p) == 6 and p[0] == "edge" and p[2] == "->" and p[4] == "cocycle":
                    body["edge"][p[1]] = p[3]
                    body["cocycle"][p[1]] = p[5]
                else:
                    raise SpecFileError(f"bad action line {line2!r}", lineno2)
                i += 1
            if i == len(inner):
                raise SpecFileError("unterminated action sub-block", lineno)
            i += 1  # closing brace
            if key in blocks:
                raise SpecFileError(f"duplicate action block for {parts[1]!r}", lineno)
            blocks[key] = body
        else:
            raise SpecFileError(f"bad action line {line!r}", lineno)
    return blocks


def _parse_matrix(text: str, lineno: int):
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"bad matrix literal: {exc.msg}", lineno) from None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SpecFileError("matrix must be a list of integer rows", lineno)
    for r in rows:
        for x in r:
            if not isinstance(x, int):
                raise SpecFileError("matrix entries must be integers", lineno)
    return tuple(tuple(r) for r in rows)


def _parse_katsura_block(inner):
    out: dict = {"vertices": None, "a": None, "b": None, "edge_names": {}}
    for lineno, line in inner:
        if line.startswith("A") and "=" in line:
            out["a"] = _parse_matrix(line.split("=", 1)[1].strip(), lineno)
        elif line.startswith("B") and "=" in line:
            out["b"] = _parse_matrix(line.split("=", 1)[1].strip(), lineno)
        elif line.startswith("vertices") and "=" in line:
            body = line.split("=", 1)[1].strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise SpecFileError("vertices = [name, name, ...]", lineno)
            names = [x.strip() for x in body[1:-1].split(",") if x.strip()]
            out["vertices"] = tuple(names)
        elif line.startswith("edge "):
            parts = line.split()
            if len(parts) != 5:
                raise SpecFileError("edge <id> <i> <j> <n>", lineno)
            try:
                i, j, n = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise SpecFileError("edge indices must be integers", lineno) from None
            out["edge_names"][(i - 1, j - 1, n)] = parts[1]
        else:
            raise SpecFileError(f"bad katsura line {line!r}", lineno)
    if out["a"] is None or out["b"] is None:
        raise SpecFileError("katsura block needs both A = ... and B = ...")
    return out


# ---------------------------------------------------------------------------
# loaders


def _load_katsura(data) -> LoadedSpec:
    spec = KatsuraSpec(data["a"], data["b"])
    report = validate_spec(spec)
    if not report.ok:
        raise SpecFileError("invalid matrices: " + "; ".join(report.messages()))
    names = data["vertices"]
    if names is not None and len(names) != spec.n:
        raise SpecFileError(f"expected {spec.n} vertex names, got {len(names)}")
    for (i, j, n) in data["edge_names"]:
        if not (0 <= i < spec.n and 0 <= j < spec.n and 0 <= n < spec.a[i][j]):
            raise SpecFileError(f"edge naming ({i + 1},{j + 1},{n}) out of range")
    action = build_triple(spec, vertex_names=names, edge_names=data["edge_names"])
    loaded = LoadedSpec(action=action, source="katsura")
    loaded.reports["matrices"] = report
    loaded.reports["graph"] = validate_graph(action.graph)
    loaded.reports["action"] = validate_action(action)
    return loaded


def _load_explicit(graph_data, group_data, action_data) -> LoadedSpec:
    graph = Graph(
        graph_data["vertices"], [Edge(e, r, s) for e, r, s in graph_data["edges"]]
    )
    if group_data["kind"] == "Z":
        group = IntegersZ()
        wanted = [("gen", "1"), ("gen", "-1")]
        for key in wanted:
            if key not in action_data:
                raise SpecFileError(
                    "generator action required: integer actions need gen 1 and gen -1"
                )
        extras = [k for k in action_data if k not in wanted]
        if extras:
            raise SpecFileError(f"unexpected action block {extras[0][1]!r} for group Z")
        tables = {}
        for key, m in ((("gen", "1"), 1), (("gen", "-1"), -1)):
            tables[m] = _tables_from_block(graph, action_data[key], int_cocycle=True)
    else:
        group = FiniteGroup(group_data["elements"], group_data["table"])
        tables = {}
        for key, body in action_data.items():
            kind, name = key
            if kind != "elem":
                raise SpecFileError(f"finite groups use elem blocks, found {kind} {name}")
            if name not in group_data["elements"]:
                raise SpecFileError(f"action block for unknown element {name!r}")
            tables[name] = _tables_from_block(graph, body, int_cocycle=False)
        ident = group._identity
        if ident is not None and ident not in tables:
            tables[ident] = ElementTables(
                vertex_map={v: v for v in graph.vertices},
                edge_map={e.id: e.id for e in graph.edges},
                cocycle={e.id: ident for e in graph.edges},
            )
        missing = [e for e in group_data["elements"] if e not in tables]
        if missing:
            raise SpecFileError(f"missing action blocks for elements {missing}")

    action = SelfSimilarAction(graph=graph, group=group, tables=tables)
    loaded = LoadedSpec(action=action, source="explicit")
    loaded.reports["graph"] = validate_graph(graph)
    loaded.reports["group"] = validate_group(group)
    if loaded.reports["graph"].ok and loaded.reports["group"].ok:
        loaded.reports["action"] = validate_action(action)
    return loaded


def _tables_from_block(graph: Graph, body: dict, int_cocycle: bool) -> ElementTables:
    lineno = body["line"]
    for v in graph.vertices:
        if v not in body["vertex"]:
            raise SpecFileError(f"vertex map missing {v!r}", lineno)
    for e in graph.edges:
        if e.id not in body["edge"]:
            raise SpecFileError(f"edge map missing {e.id!r}", lineno)
    for name, target in body["vertex"].items():
        if not graph.has_vertex(name) or not graph.has_vertex(target):
            raise SpecFileError(f"unknown vertex in {name} -> {target}", lineno)
    cocycle: dict[str, object] = {}
    for eid, target in body["edge"].items():
        if not graph.has_edge(eid) or not graph.has_edge(target):
            raise SpecFileError(f"unknown edge in {eid} -> {target}", lineno)
        raw = body["cocycle"][eid]
        if int_cocycle:
            try:
                cocycle[eid] = int(raw)
            except ValueError:
                raise SpecFileError(f"cocycle for {eid!r} must be an integer", lineno) from None
        else:
            cocycle[eid] = raw
    return ElementTables(
        vertex_map=dict(body["vertex"]), edge_map=dict(body["edge"]), cocycle=cocycle
    )


def load_spec_file(path: str) -> LoadedSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())
