import random

import pytest

from ssalg import (
    FiniteGroup,
    IntegersZ,
    act_path,
    concat,
    cyclic_group,
    strongly_fixed_by,
    validate_action,
    validate_group,
)

from conftest import (
    build_c2_swap,
    random_graph,
    random_group_elem,
    random_path,
    trivial_action,
)


def test_validate_group_c2():
    assert validate_group(cyclic_group(2)).ok


def test_validate_group_missing_inverse():
    # a row without the identity value: no inverse for a
    g = FiniteGroup(("e", "a"), {
        ("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "a",
    })
    report = validate_group(g)
    assert not report.ok
    assert any(v.code == "no-inverse" for v in report.violations)


def test_validate_group_integers():
    assert validate_group(IntegersZ()).ok


def test_validate_action_examples(ex41, ex43, ba, c2_swap):
    for act in (ex41, ex43, ba, c2_swap):
        report = validate_action(act)
        assert report.ok, report.messages()


def test_validate_action_trivial_group():
    rng = random.Random(23)
    for _ in range(5):
        act = trivial_action(random_graph(rng))
        assert validate_action(act).ok


def test_validate_action_catches_broken_automorphism():
    # swapping two edges with different sources while fixing vertices
    act = build_c2_swap()
    act.tables["a"].vertex_map.update({"u": "u", "v": "v"})
    report = validate_action(act)
    assert not report.ok
    assert any(v.code == "not-automorphism" for v in report.violations)


def test_act_path_fixed_edge(ex41):
    g = ex41.graph
    f = g.path(["f"])
    assert act_path(ex41, 1, f) == (f, 0)
    assert strongly_fixed_by(ex41, 1, f)


def test_act_path_ef(ex41):
    g = ex41.graph
    ef = g.path(["e", "f"])
    # along e the carried value stays 1, then f kills it
    img, carried = act_path(ex41, 1, ef)
    assert img == ef and carried == 0
    img_e, carried_e = act_path(ex41, 1, g.path(["e"]))
    assert img_e == g.path(["e"]) and carried_e == 1


def test_act_path_identity_is_neutral(ex43):
    rng = random.Random(3)
    for _ in range(50):
        a = random_path(rng, ex43, 5)
        assert act_path(ex43, 0, a) == (a, 0)


def test_integer_powers_memoised(ex41):
    g = ex41.graph
    e = g.path(["e"])
    img, carried = act_path(ex41, 5, e)
    assert img == e and carried == 5
    img, carried = act_path(ex41, -7, e)
    assert img == e and carried == -7


@pytest.mark.parametrize("name", ["ex41", "ex43", "ba", "c2"])
def test_extension_identities(example_actions, name):
    """The defining identities of the path extension, sampled."""
    act = example_actions[name]
    graph, grp = act.graph, act.group
    rng = random.Random(hash(name) & 0xFFFF)
    paths = []
    for v in graph.vertices:
        paths.extend(graph.all_paths(v, 6))
    checked = 0
    while checked < 500:
        a = rng.choice(paths)
        g = random_group_elem(rng, act)
        h = random_group_elem(rng, act)
        ga, ca = act_path(act, g, a)
        # (1) lengths are preserved
        assert len(ga) == len(a)
        # (5)/(6) endpoints transform with the action
        assert ga.range_vertex == act.act_vertex(g, a.range_vertex)
        assert ga.source_vertex == act.act_vertex(g, a.source_vertex)
        # (2)/(3) composition law and cocycle identity
        ha, ch = act_path(act, h, a)
        gha, cgh = act_path(act, grp.mul(g, h), a)
        assert gha == act_path(act, g, ha)[0]
        assert cgh == grp.mul(act_path(act, g, ha)[1], ch)
        # (3) identity acts trivially on the carried value
        assert act_path(act, grp.identity(), a) == (a, grp.identity())
        # (4)/(7) vertices: carried value equals the acting element,
        # and the carried value moves vertices the same way
        x = rng.choice(graph.vertices)
        assert act_path(act, g, graph.vertex_path(x)) == (
            graph.vertex_path(act.act_vertex(g, x)),
            g,
        )
        assert act.act_vertex(ca, x) == act.act_vertex(g, x)
        # (8)/(9) concatenation folds through the carried value
        b = random_path(rng, act, 6, source=None)
        if b.range_vertex == a.source_vertex:
            ab = concat(a, b)
            gab, cab = act_path(act, g, ab)
            gb, cb = act_path(act, ca, b)
            assert gab == concat(ga, gb)
            assert cab == cb
        checked += 1


@pytest.mark.parametrize("name", ["ex41", "ex43", "c2"])
def test_action_is_bijective_on_path_sets(example_actions, name):
    act = example_actions[name]
    rng = random.Random(5)
    for _ in range(12):
        v = rng.choice(act.graph.vertices)
        n = rng.randint(0, 4)
        g = random_group_elem(rng, act, span=3)
        domain = act.graph.extend_paths(v, n)
        images = {act_path(act, g, p)[0] for p in domain}
        target = set(act.graph.extend_paths(act.act_vertex(g, v), n))
        assert images == target
