import itertools

import pytest

from khcob.algebra import (
    IntegerMatrix,
    homology,
    homology_with_generators,
    in_image,
    invariant_factors,
    smith_check,
    smith_normal_form,
)
from khcob.diagram import unknot
from khcob.errors import DimensionMismatch
from khcob.state import ONE, generators


def M(rows):
    return IntegerMatrix.from_dense(rows)


def test_snf_examples():
    z = smith_normal_form(M([[0]]))
    assert z.S.dense() == [[0]] and z.U.dense() == [[1]] and z.V.dense() == [[1]]
    assert invariant_factors(M([[1, 2], [3, 4]])) == [1, 2]
    assert invariant_factors(M([[2, 0], [0, 2]])) == [2, 2]
    s = smith_normal_form(M([[1, 2], [3, 4]]))
    assert smith_check(M([[1, 2], [3, 4]]), s)
    assert (s.P @ M([[1, 2], [3, 4]]) @ s.Q) == s.S


def test_in_image_examples():
    assert in_image(M([[2]]), [1]) == (False, None)
    assert in_image(M([[2]]), [4]) == (True, [2])
    with pytest.raises(DimensionMismatch):
        in_image(M([[2]]), [1, 2])


def test_in_image_against_brute_force():
    A = M([[1, 2], [3, 4]])
    for b in itertools.product(range(-3, 4), repeat=2):
        brute = any(x + 2 * y == b[0] and 3 * x + 4 * y == b[1]
                    for x in range(-10, 11) for y in range(-10, 11))
        ok, x = in_image(A, list(b))
        assert ok == brute
        if ok:
            assert A.apply(x) == list(b)


def test_homology_of_small_complexes():
    # Z --2--> Z gives Z/2; Z --0--> Z gives Z, Z from the two ends
    two = homology(M([[2]]), IntegerMatrix(0, 1))
    assert two.summands == [2]
    zero = homology(IntegerMatrix(1, 0), M([[0]]))
    assert zero.summands == [0]
    # d_out kills one of two basis vectors
    part = homology(IntegerMatrix(2, 0), M([[1, 1]]))
    assert part.summands == [0] and len(part.vectors) == 1
    assert M([[1, 1]]).apply(part.vectors[0]) == [0]


def test_homology_unknot_generator():
    u = unknot()
    basis = generators(u, 0, 1)
    pres = homology_with_generators(IntegerMatrix(1, 0), IntegerMatrix(0, 1), (u, basis))
    assert pres.summands == [0]
    assert list(pres.generators[0].terms.items()) == [(((), (ONE,)), 1)]


def test_matrix_basics():
    A = M([[1, 2, 0], [0, -1, 3]])
    assert A.transpose().transpose() == A
    assert (A @ IntegerMatrix.identity(3)) == A
    assert A.dense() == [[1, 2, 0], [0, -1, 3]]
