"""Every move kind induces a chain map of the expected degree."""

import pytest

from chainmaps import try_prepare
from khcob.moves import Move, inverse_move, prepare
from khcob.state import ChainElement, all_generators, reorder_onto
from properties import LOCI, move_cases, move_failures, move_plan, r1_moves, r2_moves


@pytest.mark.parametrize("kind,name", move_plan())
def test_chain_map(kind, name):
    total, bad = move_failures(kind, name)
    assert total or (kind == "saddle" and name == "unknot")
    assert not bad, bad


def test_every_kind_is_exercised():
    from khcob.moves import KINDS

    seen = set()
    for kind, name in move_plan():
        for P, _ in move_cases(kind, name):
            seen.add(P.canonical.kind)
    assert seen == set(KINDS)


@pytest.mark.parametrize("name", sorted(LOCI))
def test_r1_sign_matches_request(name):
    d = LOCI[name]
    for m in r1_moves(d):
        P = prepare(d, m)
        assert P.post.sign(P.info["crossing"]) == (1 if m.sign == "+" else -1)


def test_saddle_needs_a_shared_face():
    d = LOCI["unknot2"]
    ok = try_prepare(d, Move("saddle", at=(("s0", 0), ("s0", 1))))
    assert ok is not None and len(ok.post.components()) == 2
    assert try_prepare(d, Move("saddle", at=(("s0", 0), ("s1", 1)))) is None


@pytest.mark.parametrize("name", ["trefoil", "figure8"])
def test_down_after_up_is_identity(name):
    d = LOCI[name]
    loci = list(r1_moves(d))[:8] + list(r2_moves(d))[:40]
    for m in loci:
        P = try_prepare(d, m)
        if P is None:
            continue
        Q = prepare(P.post, inverse_move(P.pre, P))
        assert Q.post.same_graph(P.pre)
        for g in all_generators(P.pre):
            c = ChainElement(P.pre, {g: 1})
            assert reorder_onto(Q.apply(P.chain(c)), P.pre) == c


@pytest.mark.parametrize("name", ["trefoil", "figure8", "kinked", "unknot2"])
def test_mirror_move_reproduces_the_mirror_stage(name):
    from khcob.diagram import mirror_diagram
    from khcob.moves import mirror_move

    d = LOCI[name]
    md = mirror_diagram(d)
    for m in list(r1_moves(d)) + list(r2_moves(d)):
        P = try_prepare(d, m)
        if P is None:
            continue
        Q = prepare(md, mirror_move(d, m))
        assert Q.post.same_graph(mirror_diagram(P.post)), str(m)
