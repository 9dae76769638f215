"""Exact computation with self-similar group actions on directed graphs.

The package models a group acting on a finite row-finite graph with a
cocycle, the inverse semigroup of the action, exact arithmetic in the
associated *-algebra, the germ function model with a three-valued zero
test, and the matrix-pair (Katsura) constructions with Hausdorffness
decisions.  See the per-module docstrings for conventions.
"""

from .actions import (
    ElementTables,
    FiniteGroup,
    IntegersZ,
    SelfSimilarAction,
    act_path,
    cyclic_group,
    strongly_fixed_by,
    trivial_action,
    trivial_group,
    validate_action,
    validate_group,
)
from .algebra import (
    Element,
    diagonal_report,
    elem_is_zero,
    elem_mul,
    elem_star,
    expand_to_depth,
    full_unitary,
    grade_decompose,
)
from .graphs import (
    CylinderRelation,
    Edge,
    EvPath,
    Graph,
    Path,
    concat,
    cylinder_relation,
    make_ev_path,
    validate_graph,
)
from .katsura import (
    KatsuraSpec,
    build_triple,
    is_hausdorff,
    k_sequence,
    katsura_family_check,
    minimal_fixed_paths,
)
from .rings import QQ, ZZ, ModularRing, ring_by_name
from .semigroup import ZERO, STriple, make_triple, s_leq, s_mul, s_star
from .steinberg import (
    GermPoint,
    SteinbergFn,
    fn_eval,
    fn_is_zero,
    germ_eq,
    make_germ,
    partition_units,
    pi_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]
