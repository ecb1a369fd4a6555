import pytest

from khcob.diagram import (
    diagram_symmetries,
    from_braid_closure,
    from_pd_code,
    fuse,
    mirror_diagram,
    orient,
    parse_braid_text,
    parse_pd_text,
    unknot,
)
from khcob.errors import BadSlot, InconsistentOrientation, LastVertexOnComponent, MalformedPD
from khcob.fixtures import knot_meta, list_knots, load_knot
from khcob.moves import Move, prepare
from randdiag import random_diagrams

LEFT = [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]


RIGHT = [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)]


def test_pd_trefoil_loops():
    # the oriented smoothing has two loops: all-0 at positive crossings,
    # all-1 at negative ones
    r, l_ = from_pd_code(RIGHT), from_pd_code(LEFT)
    assert r.n_crossings == l_.n_crossings == 3
    assert [len(r.loops(b)[1]) for b in ((0, 0, 0), (1, 1, 1))] == [2, 3]
    assert [len(l_.loops(b)[1]) for b in ((0, 0, 0), (1, 1, 1))] == [3, 2]


def test_spec_pd_example_is_left_handed():
    d = from_pd_code(LEFT)
    assert (d.n_plus, d.n_minus) == (0, 3)


@pytest.mark.parametrize("bad", [[], [(1, 2, 1, 2, 3)], [(1, 4, 2, 3)], [(1, 1, 1, 1)]])
def test_malformed_pd(bad):
    with pytest.raises(MalformedPD):
        from_pd_code(bad)


def test_pd_round_trip_on_random_knots():
    for d in random_diagrams(30, 6, seed=1):
        if d.n_crossings == 0 or not all(d.is_crossing(v) for v, _ in d.vertices):
            continue
        back = from_pd_code(d.to_pd_code())
        assert (back.n_plus, back.n_minus) == (d.n_plus, d.n_minus)
        assert back.to_pd_code() == d.to_pd_code()


def test_braids():
    t = from_braid_closure([1, 1, 1])
    assert (t.n_plus, t.n_minus) == (3, 0)
    assert len(t.loops((0, 0, 0))[1]) == 2
    assert len(from_braid_closure([1]).components()) == 1
    t46 = from_braid_closure([1, 2, 3] * 6)
    assert t46.n_crossings == 18 and t46.n_plus == 18
    assert len(t46.components()) == 2


def test_t46_orientation_from_seeds():
    t46 = orient(from_braid_closure([1, 2, 3] * 6), [("c0", 0), ("c0", 1)])
    assert t46.n_plus + t46.n_minus == 18


def test_orient_is_idempotent_and_checks_seeds():
    t = from_braid_closure([1, 1, 1])
    seeds = [("c0", 0)]
    once = orient(t, seeds)
    assert orient(once, seeds) == once
    with pytest.raises(InconsistentOrientation):
        orient(t, [("c0", 0), ("c0", 2)])


def test_mirror():
    t = from_braid_closure([1, 1, 1])
    m = mirror_diagram(t)
    assert (m.n_plus, m.n_minus) == (0, 3)
    assert mirror_diagram(m) == t
    assert mirror_diagram(unknot()) == unknot()
    for d in random_diagrams(20, 6, seed=2):
        assert mirror_diagram(mirror_diagram(d)) == d


def test_fuse():
    u = unknot()
    with pytest.raises(LastVertexOnComponent):
        fuse(u, "s0")
    d = u
    for _ in range(2):
        d = prepare(d, Move("add_strand", at=((sorted(v for v, _ in d.vertices)[0], 0),))).post
    assert len(d.vertices) == 3
    d = fuse(d, d.vertices[0][0])
    d = fuse(d, d.vertices[0][0])
    with pytest.raises(LastVertexOnComponent):
        fuse(d, d.vertices[0][0])


def test_bad_slot():
    with pytest.raises(BadSlot):
        from_braid_closure([1]).check_slot(("c9", 0))


def test_text_parsers():
    assert parse_pd_text("X[1,4,2,5] X[3,6,4,1]") == [(1, 4, 2, 5), (3, 6, 4, 1)]
    assert parse_braid_text("1, -2,3") == [1, -2, 3]
    with pytest.raises(MalformedPD):
        parse_braid_text("1,a")


def test_knot_fixtures_have_expected_invariants():
    names = list_knots()
    assert len(names) == 15 and "8_20" in names
    for n in names:
        d = load_knot(n)
        meta = knot_meta(n)
        assert d.n_crossings == meta["crossings"]
        assert len(d.components()) == 1
        circles = meta["seifert_circles"]
        assert 1 - circles + d.n_crossings == 2 * meta["seifert_genus"]


def test_fixture_symmetry_groups():
    assert len(diagram_symmetries(load_knot("6_1"))) == 4
    assert len(diagram_symmetries(load_knot("8_20"))) == 2
    for sym in diagram_symmetries(load_knot("6_1")):
        assert sym.image(load_knot("6_1")).same_graph(load_knot("6_1"))
