"""Expression language for algebra elements and germ literals.

Grammar (recursive descent, whitespace insensitive)::

    expr    := term (("+" | "-") term)*
    term    := (coeff "*")? factor ("*" factor)*
    factor  := "p(" id "," gelem ")"
             | "s(" pathlit "," gelem ")"
             | "adj(" expr ")"
             | "(" expr ")"
    pathlit := id ("." id)*
    coeff   := int ("/" int)?
    gelem   := int | id

The leftmost id of a path literal is the range end.  A path literal
consisting of a single vertex id denotes the length-0 path, so
``s(v, g)`` is the twisted vertex projection, same as ``p(v, g)``.
Rational coefficients (``3/2``) are accepted so that elements over the
rational ring round trip through printing.

Germ literals::

    germ (pathlit, gelem, pathlit) : [pathlit] "(" pathlit ")^inf"

The tail after ":" is the full infinite path, transient first.
"""

from __future__ import annotations

from fractions import Fraction

from .actions import IntegersZ, SelfSimilarAction
from .algebra import Element, elem_mul, elem_star
from .graphs import Path, make_ev_path
from .rings import Ring
from .semigroup import STriple, make_triple
from .steinberg import GermPoint, make_germ


class ExprError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at column {pos + 1})")


class _Tokens:
    SYMBOLS = ("+", "-", "*", "(", ")", ",", ".", "/", ":", "^")

    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in self.SYMBOLS:
                self.items.append(("sym", ch, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.items.append(("num", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                    j += 1
                self.items.append(("id", text[i:j], i))
                i = j
                continue
            raise ExprError(f"unexpected character {ch!r}", i)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.items):
            return self.items[self.pos]
        return ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, text, at = self.next()
        if text != value:
            raise ExprError(f"expected {value!r}, found {text or 'end of input'!r}", at)

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value:
            self.pos += 1
            return True
        return False


class _ExprParser:
    def __init__(self, text: str, act: SelfSimilarAction, ring: Ring):
        self.toks = _Tokens(text)
        self.act = act
        self.ring = ring

    def parse(self) -> Element:
        out = self.expr()
        kind, text, at = self.toks.peek()
        if kind != "eof":
            raise ExprError(f"trailing input starting with {text!r}", at)
        return out

    def expr(self) -> Element:
        out = self.term()
        while True:
            if self.toks.accept("+"):
                out = out + self.term()
            elif self.toks.accept("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> Element:
        coeff = None
        kind, text, at = self.toks.peek()
        if kind == "num":
            save = self.toks.pos
            coeff = self.number()
            if not self.toks.accept("*"):
                self.toks.pos = save
                raise ExprError("a number must multiply a factor", at)
        out = self.factor()
        if coeff is not None:
            out = out.scale(coeff)
        while self.toks.accept("*"):
            out = elem_mul(out, self.factor())
        return out

    def number(self):
        kind, text, at = self.toks.next()
        if kind != "num":
            raise ExprError(f"expected a number, found {text!r}", at)
        value = int(text)
        if self.toks.peek()[1] == "/":
            save = self.toks.pos
            self.toks.next()
            kind2, text2, at2 = self.toks.next()
            if kind2 != "num":
                self.toks.pos = save
            else:
                return Fraction(value, int(text2))
        return value

    def factor(self) -> Element:
        kind, text, at = self.toks.next()
        if text == "(":
            out = self.expr()
            self.toks.expect(")")
            return out
        if kind != "id":
            raise ExprError(f"expected p(...), s(...), adj(...) or (...), found {text!r}", at)
        if text == "adj":
            self.toks.expect("(")
            out = self.expr()
            self.toks.expect(")")
            return elem_star(out)
        if text == "p":
            self.toks.expect("(")
            kind2, vid, at2 = self.toks.next()
            if kind2 != "id":
                raise ExprError("p(...) takes a vertex id first", at2)
            if not self.act.graph.has_vertex(vid):
                raise ExprError(f"unknown vertex {vid!r}", at2)
            self.toks.expect(",")
            g = self.gelem()
            self.toks.expect(")")
            return Element.p(self.act, self.ring, vid, g)
        if text == "s":
            self.toks.expect("(")
            path = self.pathlit()
            self.toks.expect(",")
            g = self.gelem()
            self.toks.expect(")")
            return self._s_factor(path, g, at)
        raise ExprError(f"unknown factor {text!r}", at)

    def _s_factor(self, path: Path, g, at: int) -> Element:
        act, ring = self.act, self.ring
        if path.is_vertex:
            return Element.p(act, ring, path.range_vertex, g)
        grp = act.group
        beta = act.graph.vertex_path(act.act_vertex(grp.inv(g), path.source_vertex))
        return Element.from_triple(act, ring, make_triple(act, path, g, beta))

    def pathlit(self) -> Path:
        ids = []
        kind, text, at = self.toks.next()
        if kind != "id":
            raise ExprError(f"expected a path literal, found {text!r}", at)
        ids.append((text, at))
        while self.toks.accept("."):
            kind2, text2, at2 = self.toks.next()
            if kind2 != "id":
                raise ExprError(f"expected an id after '.', found {text2!r}", at2)
            ids.append((text2, at2))
        return resolve_path(self.act, ids)

    def gelem(self):
        grp = self.act.group
        negative = self.toks.accept("-")
        kind, text, at = self.toks.next()
        if isinstance(grp, IntegersZ):
            if kind != "num":
                raise ExprError(f"expected an integer group element, found {text!r}", at)
            return -int(text) if negative else int(text)
        if negative:
            raise ExprError("finite group elements are named, not signed", at)
        if kind not in ("id", "num"):
            raise ExprError(f"expected a group element id, found {text!r}", at)
        if not grp.contains(text):
            raise ExprError(f"{text!r} is not an element of the group", at)
        return text


def resolve_path(act: SelfSimilarAction, ids) -> Path:
    """Resolve dotted ids to a path; a single id may be a vertex."""
    graph = act.graph
    if len(ids) == 1:
        name, at = ids[0]
        is_v, is_e = graph.has_vertex(name), graph.has_edge(name)
        if is_v and is_e:
            raise ExprError(f"{name!r} names both a vertex and an edge", at)
        if is_v:
            return graph.vertex_path(name)
        if is_e:
            return graph.path([name])
        raise ExprError(f"unknown vertex or edge {name!r}", at)
    for name, at in ids:
        if not graph.has_edge(name):
            raise ExprError(f"unknown edge {name!r}", at)
    try:
        return graph.path([name for name, _ in ids])
    except Exception as exc:
        raise ExprError(str(exc), ids[0][1]) from None


def parse_expr(text: str, act: SelfSimilarAction, ring: Ring) -> Element:
    """Parse and lower an expression against a loaded instance."""
    return _ExprParser(text, act, ring).parse()


def parse_germ(text: str, act: SelfSimilarAction) -> GermPoint:
    """Parse a germ literal ``germ (a, g, b) : mu (rho)^inf``."""
    toks = _Tokens(text)
    if toks.peek()[1] == "germ":
        toks.next()
    toks.expect("(")
    parser = _ExprParser("", act, None)  # reuse id resolution helpers
    parser.toks = toks
    alpha = parser.pathlit()
    toks.expect(",")
    g = parser.gelem()
    toks.expect(",")
    beta = parser.pathlit()
    toks.expect(")")
    toks.expect(":")
    triple = make_triple(act, alpha, g, beta)
    transient = None
    if toks.peek()[1] != "(":
        transient = parser.pathlit()
    toks.expect("(")
    cycle = parser.pathlit()
    toks.expect(")")
    toks.expect("^")
    kind, text2, at = toks.next()
    if text2 != "inf":
        raise ExprError("the cycle must be marked ^inf", at)
    if cycle.is_vertex:
        raise ExprError("the repeated part of a germ tail cannot be a vertex", at)
    if transient is None:
        transient = act.graph.vertex_path(cycle.range_vertex)
    x = make_ev_path(act.graph, transient, cycle)
    return make_germ(act, triple, x)


# ---------------------------------------------------------------------------
# printing


def _show_group_elem(act: SelfSimilarAction, g) -> str:
    return str(g)


def _show_coeff(ring: Ring, c) -> tuple[str, bool]:
    """Rendered magnitude and whether the coefficient is negative."""
    if isinstance(c, (int, Fraction)) and c < 0:
        return ring.show(-c), True
    return ring.show(c), False


def format_term(act: SelfSimilarAction, t: STriple) -> str:
    grp = act.group
    alpha, beta = t.alpha, t.beta
    if beta.is_vertex:
        if alpha.is_vertex:
            return f"p({alpha.range_vertex},{_show_group_elem(act, t.g)})"
        return f"s({alpha},{_show_group_elem(act, t.g)})"
    ident = _show_group_elem(act, grp.identity())
    return f"s({alpha},{_show_group_elem(act, t.g)})*adj(s({beta},{ident}))"


def format_element(a: Element) -> str:
    """Canonical, reparseable rendering of an element."""
    items = a.canonical_items()
    if not items:
        return "0*p({},{})".format(
            a.action.graph.vertices[0], _show_group_elem(a.action, a.action.group.identity())
        )
    bits = []
    for t, c in items:
        mag, neg = _show_coeff(a.ring, c)
        rendered = format_term(a.action, t)
        if mag != "1":
            rendered = f"{mag}*{rendered}"
        if not bits:
            bits.append(f"-{rendered}" if neg else rendered)
        else:
            bits.append(f"- {rendered}" if neg else f"+ {rendered}")
    return " ".join(bits)
