"""The homology engine against the stand-alone oracle, grading by grading."""

import pytest

from khcob.diagram import from_pd_code
from khcob.homology import kh
from oracle import khovanov_oracle as oracle

PD = {
    "unknot_kink": [(1, 1, 2, 2)],
    "unknot_two_kinks": [(1, 4, 2, 1), (2, 4, 3, 3)],
    "unknot_three": [(6, 4, 1, 3), (4, 2, 5, 1), (5, 2, 6, 3)],
    "right_trefoil": [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)],
    "left_trefoil": [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)],
    "figure_eight": [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)],
}

KNOWN = {
    "right_trefoil": {(0, 1): (1, []), (0, 3): (1, []), (2, 5): (1, []),
                      (3, 7): (0, [2]), (3, 9): (1, [])},
    "figure_eight": {(-2, -5): (1, []), (-1, -3): (0, [2]), (-1, -1): (1, []),
                     (0, -1): (1, []), (0, 1): (1, []), (1, 1): (1, []),
                     (2, 3): (0, [2]), (2, 5): (1, [])},
}


def _package(pd, h, q):
    pres = kh(from_pd_code(pd), h, q)
    return pres.free_rank, sorted(pres.torsion)


@pytest.mark.parametrize("name", sorted(PD))
def test_oracle_is_a_complex(name):
    assert oracle.check_d_squared(PD[name])


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_oracle_reproduces_known_tables(name):
    assert oracle.table(PD[name]) == KNOWN[name]


@pytest.mark.parametrize("name", sorted(PD))
def test_signs_agree(name):
    d = from_pd_code(PD[name])
    signs = oracle.signs(PD[name])
    assert (d.n_plus, d.n_minus) == (signs.count(1), signs.count(-1))


@pytest.mark.parametrize("name", sorted(PD))
def test_every_grading_matches(name):
    pd = PD[name]
    mismatches = []
    for h, q in oracle.gradings(pd):
        want = oracle.khovanov(pd, h, q)
        got = _package(pd, h, q)
        if want != got:
            mismatches.append(((h, q), want, got))
    assert mismatches == []


def test_mirror_pair_is_dual():
    r = oracle.table(PD["right_trefoil"])
    l_ = oracle.table(PD["left_trefoil"])
    assert {(-h, -q) for (h, q), (f, _) in r.items() if f} == {g for g, (f, _) in l_.items() if f}
