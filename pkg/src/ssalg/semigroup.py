"""The inverse semigroup of an action: triples (alpha, g, beta) and zero.

A nonzero element is a pair of finite paths joined by a group element,
subject to the endpoint condition s(alpha) = g.s(beta).  The product is
piecewise by prefix comparison of the inner paths, the involution swaps
the legs and inverts the group element, and the natural partial order
is s <= t iff s = t s* s.  Zero is a distinguished absorbing value, not
a null.

All functions here are pure over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import SelfSimilarAction, act_path
from .graphs import CylinderRelation, Path, concat, cylinder_relation


class TripleError(ValueError):
    pass


class _ZeroType:
    """The absorbing zero of the semigroup (a singleton)."""

    __slots__ = ()

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_zero_instance, ())


ZERO = _ZeroType()


def _zero_instance():
    return ZERO


@dataclass(frozen=True, slots=True)
class STriple:
    alpha: Path
    g: object
    beta: Path

    @property
    def degree(self) -> int:
        return len(self.alpha) - len(self.beta)

    def __str__(self) -> str:
        return f"({self.alpha}, {self.g}, {self.beta})"


def make_triple(act: SelfSimilarAction, alpha: Path, g, beta: Path) -> STriple:
    """Build a validated triple; rejects endpoint mismatches."""
    if not act.group.contains(g):
        raise TripleError(f"{g!r} is not an element of the group")
    if act.act_vertex(g, beta.source_vertex) != alpha.source_vertex:
        raise TripleError(
            f"endpoint condition fails: s(alpha)={alpha.source_vertex!r} "
            f"but g.s(beta)={act.act_vertex(g, beta.source_vertex)!r}"
        )
    return STriple(alpha, g, beta)


def s_mul(act: SelfSimilarAction, s, t):
    """The piecewise product; ZERO is absorbing.

    With s = (alpha, g, beta) and t = (gamma, h, delta):

    * if gamma = beta.eps the product is (alpha (g.eps), phi(g,eps) h, delta);
    * if beta = gamma.eps the product is
      (alpha, g phi(h^-1,eps)^-1, delta ((h^-1).eps));
    * otherwise the cylinders of beta and gamma are disjoint and the
      product is ZERO.
    """
    if s is ZERO or t is ZERO:
        return ZERO
    grp = act.group
    rel = cylinder_relation(s.beta, t.alpha)
    if rel in (CylinderRelation.EQUAL, CylinderRelation.LEFT_PREFIX_OF_RIGHT):
        eps = act.graph.subpath(t.alpha, len(s.beta))
        img, carried = act_path(act, s.g, eps)
        return STriple(concat(s.alpha, img), grp.mul(carried, t.g), t.beta)
    if rel is CylinderRelation.RIGHT_PREFIX_OF_LEFT:
        eps = act.graph.subpath(s.beta, len(t.alpha))
        hinv = grp.inv(t.g)
        img, carried = act_path(act, hinv, eps)
        return STriple(s.alpha, grp.mul(s.g, grp.inv(carried)), concat(t.beta, img))
    return ZERO


def s_star(act: SelfSimilarAction, s):
    """The involution (alpha, g, beta)* = (beta, g^-1, alpha)."""
    if s is ZERO:
        return ZERO
    return STriple(s.beta, act.group.inv(s.g), s.alpha)


def s_leq(act: SelfSimilarAction, s, t) -> bool:
    """The natural partial order: s <= t iff s = t s* s."""
    if s is ZERO:
        return True
    return s_mul(act, t, s_mul(act, s_star(act, s), s)) == s


def is_idempotent(act: SelfSimilarAction, s) -> bool:
    return s is ZERO or s_mul(act, s, s) == s


def idempotent(act: SelfSimilarAction, alpha: Path) -> STriple:
    """The idempotent (alpha, e_G, alpha) over a path."""
    return STriple(alpha, act.group.identity(), alpha)
