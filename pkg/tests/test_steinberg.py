import random

import pytest

from ssalg import (
    Element,
    QQ,
    ZZ,
    elem_is_zero,
    elem_mul,
    elem_star,
    fn_eval,
    fn_is_zero,
    germ_eq,
    make_ev_path,
    make_germ,
    make_triple,
    partition_units,
    pi_map,
)
from ssalg.semigroup import ZERO, s_mul, s_star
from ssalg.steinberg import (
    GermEqual,
    GermError,
    GermNotEqual,
    GermUndecided,
    NonZeroWitness,
    ZeroCertified,
    ZeroUpToDepth,
    UnsupportedInstance,
    class_coefficient_sums,
    fn_eval_convolution,
    germ_points_for_term,
    instance_certificate,
    tail_points,
)

from conftest import random_triple


def _ev(act, transient_edges, cycle_edges, at=None):
    g = act.graph
    transient = g.path(transient_edges) if transient_edges else g.vertex_path(at)
    return make_ev_path(g, transient, g.path(cycle_edges))


def test_germ_eq_reflexive(ex41):
    u = ex41.graph.vertex_path("u")
    t = make_triple(ex41, u, 2, u)
    x = _ev(ex41, [], ["e"], at="u")
    assert germ_eq(ex41, t, t, x) == GermEqual(0)


def test_germ_eq_separated_along_unfixed_tail(ex41):
    u = ex41.graph.vertex_path("u")
    x = _ev(ex41, [], ["e"], at="u")
    for m in range(-2, 3):
        for n in range(-2, 3):
            verdict = germ_eq(
                ex41, make_triple(ex41, u, m, u), make_triple(ex41, u, n, u), x
            )
            if m == n:
                assert isinstance(verdict, GermEqual)
            else:
                assert isinstance(verdict, GermNotEqual)


def test_germ_eq_meets_along_fixed_prefix(ex43):
    u = ex43.graph.vertex_path("u")
    x = _ev(ex43, ["e_1_2_0", "e_2_3_0"], ["e_3_3_0"])
    s = make_triple(ex43, u, 0, u)
    t = make_triple(ex43, u, 2, u)
    assert germ_eq(ex43, s, t, x) == GermEqual(2)
    t1 = make_triple(ex43, u, 1, u)
    assert isinstance(germ_eq(ex43, s, t1, x), GermNotEqual)


def test_germ_eq_total_on_growing_difference():
    from ssalg import KatsuraSpec, build_triple

    # the loop multiplies differences by 2: no recurrence, but the
    # integrality argument still settles the comparison
    act = build_triple(KatsuraSpec.from_matrices([[1]], [[2]]))
    u = act.graph.vertex_path("v1")
    x = _ev(act, [], ["e_1_1_0"], at="v1")
    verdict = germ_eq(act, make_triple(act, u, 0, u), make_triple(act, u, 4, u), x)
    assert isinstance(verdict, GermNotEqual)


def test_germ_eq_checks_cylinders(ex41):
    g = ex41.graph
    t = make_triple(ex41, g.path(["f"]), 0, g.path(["f"]))
    x = _ev(ex41, [], ["e"], at="u")  # not in Z(f)
    with pytest.raises(GermError):
        germ_eq(ex41, t, t, x)


def test_fn_eval_indicator_at_own_germ(ex41):
    g = ex41.graph
    t = make_triple(ex41, g.vertex_path("v"), 0, g.vertex_path("v"))
    fn = pi_map(Element.from_triple(ex41, ZZ, t))
    x = _ev(ex41, [], ["g"], at="v")
    assert fn_eval(fn, make_germ(ex41, t, x)) == 1


def test_fn_eval_difference_examples(ex41, ex43):
    u41 = ex41.graph.vertex_path("u")
    diff = pi_map(Element.p(ex41, ZZ, "u", 0) - Element.p(ex41, ZZ, "u", 1))
    germ = make_germ(ex41, make_triple(ex41, u41, 0, u41), _ev(ex41, [], ["e"], at="u"))
    assert fn_eval(diff, germ) == 1

    # the 5x5 relation vanishes at every generated germ
    coeffs = {0: 1, 1: 2, 2: 1, 3: -1, 4: -2, 5: -1}
    total = Element.zero(ex43, ZZ)
    for m, c in coeffs.items():
        total = total + Element.p(ex43, ZZ, "u", m).scale(c)
    fn = pi_map(total)
    u = ex43.graph.vertex_path("u")
    germs = []
    for m in coeffs:
        t = make_triple(ex43, u, m, u)
        germs.extend(make_germ(ex43, t, y.x if hasattr(y, "x") else y.x) for y in [])
        for y in tail_points(ex43, "u", 4):
            germs.append(make_germ(ex43, t, y))
    assert len(germs) >= 50
    assert all(fn_eval(fn, p) == 0 for p in germs)


def test_fn_is_zero_trivial_zero(ex41):
    assert isinstance(fn_is_zero(pi_map(Element.zero(ex41, ZZ))), ZeroCertified)


def test_fn_is_zero_defining_relation(ex41):
    se, sf = Element.s(ex41, ZZ, "e", 0), Element.s(ex41, ZZ, "f", 0)
    rel = Element.p(ex41, ZZ, "u", 0) - elem_mul(se, elem_star(se)) - elem_mul(
        sf, elem_star(sf)
    )
    verdict = fn_is_zero(pi_map(rel))
    assert isinstance(verdict, ZeroCertified)
    assert "defining-relation" in verdict.route


def test_fn_is_zero_katsura_relation(ex43):
    coeffs = {0: 1, 1: 2, 2: 1, 3: -1, 4: -2, 5: -1}
    total = Element.zero(ex43, ZZ)
    for m, c in coeffs.items():
        total = total + Element.p(ex43, ZZ, "u", m).scale(c)
    verdict = fn_is_zero(pi_map(total))
    assert isinstance(verdict, ZeroCertified)


def test_fn_is_zero_witness_over_loop_tail(ex41):
    verdict = fn_is_zero(pi_map(Element.p(ex41, ZZ, "u", 0) - Element.p(ex41, ZZ, "u", 1)))
    assert isinstance(verdict, NonZeroWitness)
    assert verdict.witness.x.cycle.edges == ("e",)
    assert not verdict.witness.x.transient.edges


def test_elem_is_zero_c2(c2_swap):
    assert instance_certificate(c2_swap) is not None
    a = Element.p(c2_swap, ZZ, "u", "i") - Element.p(c2_swap, ZZ, "u", "a")
    verdict = elem_is_zero(a)
    assert isinstance(verdict, NonZeroWitness)
    se = Element.s(c2_swap, ZZ, "e", "i")
    rel = Element.p(c2_swap, ZZ, "u", "i") - elem_mul(se, elem_star(se))
    assert elem_is_zero(rel).kind == "zero"


def _strip_matrix_data(act):
    import dataclasses

    return dataclasses.replace(
        act, katsura_spec=None, katsura_edge_index={}, analysis_cache={},
        _edge_memo={}, _vertex_memo={},
    )


def test_zero_up_to_depth_without_certificate(ex43):
    """On a plain integer action the collision automaton can still prove
    the function model vanishes, but without an instance certificate the
    verdict must stay modest."""
    bare = _strip_matrix_data(ex43)
    assert instance_certificate(bare) is None
    coeffs = {0: 1, 1: 2, 2: 1, 3: -1, 4: -2, 5: -1}
    total = Element.zero(bare, ZZ)
    for m, c in coeffs.items():
        total = total + Element.p(bare, ZZ, "u", m).scale(c)
    verdict = elem_is_zero(total)
    assert isinstance(verdict, ZeroUpToDepth)
    assert "vanishes" in verdict.note


def test_bare_integer_action_still_finds_witnesses(ex41):
    """Without matrix data the same functions are separated by the
    collision automaton when its state walk closes."""
    bare = _strip_matrix_data(ex41)
    g = bare.graph
    f = g.path(["f"])
    a = Element.from_triple(bare, ZZ, make_triple(bare, f, 0, f)) - Element.from_triple(
        bare, ZZ, make_triple(bare, f, 1, f)
    )
    verdict = elem_is_zero(a)
    assert isinstance(verdict, NonZeroWitness)
    # the separating tail loops at the source of f, which nothing fixes
    assert verdict.witness.x.cycle.edges == ("g",)


def test_structural_product_matches_convolution(ex41, ex43):
    rng = random.Random(67)
    for act in (ex41, ex43):
        triples = [random_triple(rng, act, max_len=2) for _ in range(40)]
        checked = 0
        for _ in range(200):
            s, t = rng.choice(triples), rng.choice(triples)
            fs = pi_map(Element.from_triple(act, ZZ, s))
            ft = pi_map(Element.from_triple(act, ZZ, t))
            prod = fs * ft
            st = s_mul(act, s, t)
            if st is ZERO:
                continue
            for y in tail_points(act, st.beta.source_vertex, 3)[:4]:
                germ = make_germ(act, st, _prepend(act, st.beta, y))
                assert fn_eval(prod, germ) == fn_eval_convolution(fs, ft, germ)
                checked += 1
        assert checked > 20


def _prepend(act, beta, tail):
    from ssalg.steinberg import prepend_tail

    return prepend_tail(act.graph, beta, tail)


def test_star_matches_inverse_germs(ex41):
    rng = random.Random(71)
    for _ in range(60):
        s = random_triple(rng, ex41, max_len=2)
        fs = pi_map(Element.from_triple(ex41, ZZ, s))
        assert fs.star() == pi_map(elem_star(Element.from_triple(ex41, ZZ, s)))
        assert s_star(ex41, s_star(ex41, s)) == s


def test_degree_cocycle_on_composable_germs(ex41):
    rng = random.Random(73)
    for _ in range(100):
        s = random_triple(rng, ex41, max_len=3)
        t = random_triple(rng, ex41, max_len=3)
        st = s_mul(ex41, s, t)
        if st is ZERO:
            continue
        assert st.degree == s.degree + t.degree


def test_pi_map_is_multiplicative_pointwise(ex43):
    rng = random.Random(79)
    for _ in range(30):
        a = Element.from_triple(ex43, ZZ, random_triple(rng, ex43, 2), rng.choice([1, 2]))
        b = Element.from_triple(ex43, ZZ, random_triple(rng, ex43, 2), rng.choice([1, -1]))
        ab = elem_mul(a, b)
        fa, fb, fab = pi_map(a), pi_map(b), pi_map(ab)
        assert fa * fb == fab
        assert pi_map(elem_star(a)) == fa.star()
        for t in ab.terms():
            for germ in germ_points_for_term(ex43, t, 3)[:3]:
                assert fn_eval(fab, germ) == fn_eval_convolution(fa, fb, germ)


# ---------------------------------------------------------------------------
# partitions


def test_partition_units_ex43(ex43):
    report = partition_units(ex43, ZZ, "u", range(6))
    assert report.applicable and report.every_tail_strongly_fixed
    assert len(report.fixed_paths) == 5

    v_paths = [p for p in report.fixed_paths if p.edges[0].startswith("e_1_2")]
    w_paths = [p for p in report.fixed_paths if p.edges[0].startswith("e_1_5")]
    assert len(v_paths) == 2 and len(w_paths) == 3
    for p in v_paths:
        got = sorted(
            frozenset(m for m, _ in cls)
            for cls in report.classes
            if cls[0][1] == p
        )
        assert got == sorted([frozenset({0, 2, 4}), frozenset({1, 3, 5})])
    for p in w_paths:
        got = sorted(
            frozenset(m for m, _ in cls)
            for cls in report.classes
            if cls[0][1] == p
        )
        assert got == sorted([frozenset({0, 3}), frozenset({1, 4}), frozenset({2, 5})])


def test_partition_units_equal_classes_share_elements(ex43):
    report = partition_units(ex43, ZZ, "u", range(6))
    for cls in report.classes:
        elems = {report.unit(m, gamma).element for m, gamma in cls}
        assert len(elems) == 1
    # distinct classes have germ-disjoint supports: the unit indicator
    # of one class vanishes on germs of the other
    for cls in report.classes:
        m0, gamma0 = cls[0]
        u0 = report.unit(m0, gamma0)
        fn = pi_map(u0.element)
        for other in report.classes:
            if other is cls or other[0][1] != gamma0:
                continue
            m1, gamma1 = other[0]
            u1 = report.unit(m1, gamma1)
            for y in tail_points(ex43, gamma1.source_vertex, 3)[:3]:
                germ = make_germ(
                    ex43, u1.triple, _prepend(ex43, u1.triple.beta, y)
                )
                assert fn_eval(fn, germ) == 0


def test_partition_identities_certify(ex43):
    report = partition_units(ex43, ZZ, "u", range(6))
    assert report.identities
    for lhs, units in report.identities:
        total = Element.zero(ex43, ZZ)
        for u in units:
            total = total + u.element
        assert elem_is_zero(lhs - total).kind == "zero"


def test_partition_class_sums_certify_relation(ex43):
    report = partition_units(ex43, ZZ, "u", range(6))
    coeffs = {0: 1, 1: 2, 2: 1, 3: -1, 4: -2, 5: -1}
    sums = class_coefficient_sums(report, coeffs, ZZ)
    assert sums and all(total == 0 for _, total in sums)


def test_partition_units_trivial_group():
    import conftest

    rng = random.Random(83)
    act = conftest.trivial_action(conftest.random_graph(rng))
    report = partition_units(act, ZZ, act.graph.vertices[0], ["0"])
    assert not report.applicable
    assert "no strongly fixed paths" in report.note


def test_partition_units_rejects_infinite_family(ex41):
    with pytest.raises(UnsupportedInstance):
        partition_units(ex41, ZZ, "u", range(3))
