import json

import pytest

from khcob.apps.seifert import seifert_movie
from khcob.cobordism import Movie, compare_movies, normalize_sign, replace_link
from khcob.diagram import empty, from_braid_closure, from_pd_code, mirror_diagram, unknot
from khcob.errors import BoundaryMismatch, MovieError, NoEmptyEnd
from khcob.fixtures import list_movies, load_knot
from khcob.io import read_movie
from khcob.moves import Move, prepare
from khcob.state import ONE, ChainElement, differential, is_outside

U2 = prepare(unknot(), Move("add_strand", at=(("s0", 0),))).post


def torus():
    m = Movie(empty()).morse_birth().then(Move("add_strand", at=(("s0", 0),)))
    return m.morse_saddle(("s0", 0), ("s0", 1)).morse_saddle(("s0", 0), ("s1", 0)).morse_death(("s0", 0))


def test_empty_movie():
    m = Movie(from_braid_closure([1, 1, 1]))
    assert len(m) == 0 and m.chi() == 0
    c = ChainElement(m.start, {((0, 0, 0), (ONE, ONE)): 1})
    assert m.propagate(c) == c


def test_birth_disk():
    m = Movie(empty()).morse_birth()
    k = m.kj_class()
    assert m.chi() == 1 and k.grading == (0, 1)
    assert list(k.element.terms.items()) == [(((), (ONE,)), 1)]


def test_closed_torus_evaluates_to_two():
    m = torus()
    assert m.chi() == 0
    assert m.kj_class().element.integer() == 2


def test_json_round_trip():
    for name in list_movies():
        m = read_movie(name)
        again = Movie.from_json(json.loads(m.dumps()))
        assert [str(x) for x in again.moves] == [str(x) for x in m.moves]
        assert again.end.same_graph(m.end)


def test_reverse_and_mirror_are_involutions():
    for m in (seifert_movie(load_knot("3_1")), read_movie("6_1_disk_a"), torus()):
        rr = m.reverse().reverse()
        assert [str(x) for x in rr.moves] == [str(x) for x in m.moves]
        assert m.reverse().chi() == m.chi()
        mm = m.mirror().mirror()
        assert [str(x) for x in mm.moves] == [str(x) for x in m.moves]
        assert m.mirror().chi() == m.chi()


def test_mirror_of_trefoil_seifert_movie():
    m = seifert_movie(load_knot("3_1")).mirror()
    assert m.start == mirror_diagram(load_knot("3_1"))
    assert (m.start.n_plus, m.start.n_minus) == (0, 3)
    assert not m.end.vertices


def test_reverse_single_saddle():
    m = Movie(U2).morse_saddle(("s0", 0), ("s0", 1))
    r = m.reverse()
    assert len(r) == 1 and r.moves[0].kind == "saddle" and r.start == m.end
    assert r.end.same_graph(U2)


def test_band_move_shapes():
    plain = Movie(U2).band_move(0, ("s0", 0), ("s0", 1))
    assert [x.kind for x in plain.moves] == ["saddle"]
    twisted = Movie(U2).band_move(1, ("s0", 0), ("s0", 1))
    assert [x.kind for x in twisted.moves] == ["r1_up", "saddle"]
    assert twisted.chi() == -1 and len(twisted.end.components()) == 1


def test_finish_examples():
    kink = Movie(from_pd_code([(1, 1, 2, 2)])).finish()
    assert [x.kind for x in kink.moves] == ["r1_down", "death"]
    two = Movie(Movie(U2).morse_saddle(("s0", 0), ("s0", 1)).end).finish()
    assert [x.kind for x in two.moves] == ["death", "death"]


def test_seifert_movie_shape_for_trefoil():
    m = seifert_movie(load_knot("3_1"))
    kinds = [x.kind for x in m.moves]
    assert kinds.count("saddle") == 3 and kinds.count("r1_down") == 3
    assert kinds.count("death") == 2 and m.chi() == -1


def test_seifert_unknot():
    m = seifert_movie(unknot())
    assert [x.kind for x in m.moves] == ["death"] and m.chi() == 1


@pytest.mark.parametrize("name,grading,dense", [("3_1", (0, 1), [[1]]), ("4_1", (0, 1), [[2]]),
                                                ("6_3", (0, 3), [[]])])
def test_induced_matrix(name, grading, dense):
    m = seifert_movie(load_knot(name))
    assert -m.chi() == grading[1]
    M = m.induced_matrix(*grading)
    assert M.dense() == dense


def test_induced_matrix_is_sign_normalized():
    from khcob.algebra import IntegerMatrix

    assert normalize_sign(IntegerMatrix(1, 2, {(0, 0): -2, (0, 1): 4})).dense() == [[2, -4]]


def test_chain_level_composite_commutes_with_d():
    from khcob.state import all_generators

    m = seifert_movie(load_knot("4_1"))
    # the first two moves leave crossings on the end diagram
    part = Movie(m.start, m.moves[:2])
    assert part.end.n_crossings

    for g in all_generators(part.start):
        c = ChainElement(part.start, {g: 1})
        assert part.propagate(differential(c)) == differential(part.propagate(c))


def test_compare_self_and_t46():
    m = read_movie("6_1_disk_a")
    assert compare_movies(m, m).verdict == "equal"
    a0, a1 = read_movie("t46_a0"), read_movie("t46_a1")
    v = compare_movies(a0, a1)
    assert (v.verdict, v.certificate) == ("distinct", "outside-image")
    k0, k1 = a0.kj_class().element, a1.kj_class().element
    from khcob.cobordism import align

    k1 = align(k1, k0.diagram)
    assert is_outside(k0 - k1)[0] and is_outside(k0 + k1)[0]


def test_t46_setup():
    a0 = read_movie("t46_a0")
    assert a0.start.n_crossings == 18 and a0.chi() == 0
    assert a0.moves[0].kind == "saddle"


def test_compare_errors():
    with pytest.raises(NoEmptyEnd):
        Movie(from_braid_closure([1, 1, 1])).kj_class()
    with pytest.raises(BoundaryMismatch):
        compare_movies(read_movie("6_1_disk_a"), read_movie("8_20_disk_a"))


def test_bad_move_reports_stage():
    with pytest.raises(MovieError) as info:
        Movie(from_braid_closure([1, 1, 1])).then(Move("r1_down", at=(("c0", 0),)))
    assert info.value.record()["stage"] == 0


def test_replace_link_identity_and_rotation():
    t = load_knot("3_1")
    c = ChainElement(t, {((0, 0, 0), (ONE, ONE)): 1})
    assert replace_link(c, t) == c
    for sym in __import__("khcob").diagram_symmetries(t):
        img = sym.image(t)
        moved = replace_link(c, img, {x: sym.cmap[x][0] for x in t.crossings}, flipping=True)
        assert differential(moved).is_zero() == differential(c).is_zero()
