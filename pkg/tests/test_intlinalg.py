from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import invariant_factors_from_minors, laplace_det, matmul
from tcox.errors import DegeneratePoints, InvalidBasis
from tcox.intlinalg import (FGAbelianGroup, IntMatrix, cokernel, degree_relations, hnf_rows, kernel_basis,
                            lattice_index, primitive_int, rebase, same_grading, saturation, snf, solve_integer,
                            syz2, trinomial_syzygies)

small = st.integers(-9, 9)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_of_two_d4_relation_matrix():
    a = [[-1, 1, 1, 0, 0, 0], [-1, 0, 0, 2, 0, 0], [-1, 0, 0, 0, 2, 0], [-1, 0, 0, 0, 0, 2], [0, -2, -1, 1, 1, 1]]
    assert snf(IntMatrix.from_rows(a)).invariant_factors == (1, 1, 1, 2, 2)


def test_snf_of_zero_and_empty():
    assert snf(IntMatrix.zeros(2, 3)).invariant_factors == ()
    assert snf(IntMatrix.zeros(0, 3)).rank == 0


def test_snf_simple_diagonal():
    # diag(2, 3) has invariant factors (1, 6)
    assert snf(IntMatrix.from_rows([[2, 0], [0, 3]])).invariant_factors == (1, 6)


@given(matrices())
def test_snf_transform_and_divisibility(a):
    res = snf(IntMatrix.from_rows(a))
    U, V, S = res.U.tolist(), res.V.tolist(), res.S.tolist()
    assert matmul(matmul(U, a), V) == S
    assert abs(laplace_det(U)) == 1 and abs(laplace_det(V)) == 1
    assert res.S.is_diagonal()
    fs = res.invariant_factors
    assert all(d > 0 for d in fs)
    assert all(fs[i + 1] % fs[i] == 0 for i in range(len(fs) - 1))


@given(matrices(4, 4))
def test_snf_matches_gcd_of_minors(a):
    assert list(snf(IntMatrix.from_rows(a)).invariant_factors) == invariant_factors_from_minors(a)


@given(matrices(4, 6))
def test_kernel_basis_is_saturated_and_complete(a):
    A = IntMatrix.from_rows(a)
    ker = kernel_basis(A)
    for k in ker:
        assert all(sum(r[j] * k[j] for j in range(A.cols)) == 0 for r in a)
    rank = snf(A).rank
    assert len(ker) == A.cols - rank
    assert lattice_index(ker, A.cols) == 1


@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_integer(a, x):
    A = IntMatrix.from_rows(a)
    x = x[:A.cols] + [0] * (A.cols - len(x))
    b = [sum(r[j] * x[j] for j in range(A.cols)) for r in a]
    y = solve_integer(A, b)
    assert y is not None
    assert [sum(r[j] * y[j] for j in range(A.cols)) for r in a] == b


def test_solve_integer_detects_no_solution():
    assert solve_integer(IntMatrix.from_rows([[2, 4]]), [3]) is None


def test_saturation_and_index():
    assert lattice_index([[2, 0], [0, 3]], 2) == 6
    assert saturation([[2, 4]], 2) == [(1, 2)]


def test_hnf_is_canonical():
    assert hnf_rows([[2, 4], [1, 1]], 2) == hnf_rows([[1, 1], [0, 2]], 2)


def test_group_arithmetic_and_printing():
    g = FGAbelianGroup(1, (2, 2))
    a = g.element((1,), (1, 0))
    assert str(g) == "Z + Z/2 + Z/2"
    assert (a + a).as_tuple() == (2, 0, 0)
    assert (a * 2 - a) == a
    assert str(a) == "(1, 1~, 0~)"
    assert g.element((0,), (2, 4)).is_zero()
    with pytest.raises(ValueError):
        FGAbelianGroup(0, (3, 2))


def test_cokernel_of_cyclic_relation():
    g, degs = cokernel(IntMatrix.from_rows([[2, -2]]))
    assert (g.free_rank, g.torsion_orders) == (1, (2,))
    # the two generators differ by an element of order 2
    assert not (degs[0] - degs[1]).is_zero() and ((degs[0] - degs[1]) * 2).is_zero()


@given(matrices(3, 5))
def test_cokernel_degree_map_kills_exactly_the_row_lattice(a):
    A = IntMatrix.from_rows(a)
    g, degs = cokernel(A)
    assert hnf_rows(degree_relations(degs), A.cols) == hnf_rows([r for r in a if any(r)], A.cols)
    fs = snf(A).invariant_factors
    assert g.free_rank == A.cols - len(fs)
    assert g.torsion_orders == tuple(d for d in fs if d > 1)


def test_rebase_rejects_wrong_orders():
    g, degs = cokernel(IntMatrix.from_rows([[0, 2]]))
    with pytest.raises(InvalidBasis):
        rebase(g, degs, [[1, 0]], [[1, 0]], [2])


def test_same_grading_up_to_isomorphism():
    g, degs = cokernel(IntMatrix.from_rows([[1, -1, 0]]))
    h = FGAbelianGroup(2)
    other = [h.element((0, 1)), h.element((0, 1)), h.element((1, 1))]
    assert same_grading(degs, other)
    assert not same_grading(degs, [h.element((1, 0)), h.element((0, 1)), h.element((1, 1))])


def test_syzygies_of_points():
    pts = [(1, 0), (0, 1), (-1, -1), (1, -1)]
    assert trinomial_syzygies(pts)[0] == (1, 1, 1, 0)
    for s in trinomial_syzygies(pts) + [tuple(map(Fraction, v)) for v in syz2(pts)]:
        assert sum(c * p[0] for c, p in zip(s, pts)) == 0
        assert sum(c * p[1] for c, p in zip(s, pts)) == 0
    assert len(syz2(pts)) == 2
    assert syz2(pts[:2]) == [] and trinomial_syzygies(pts[:2]) == []


def test_degenerate_points_rejected():
    with pytest.raises(DegeneratePoints):
        syz2([(1, 0), (2, 0), (0, 1)])
    with pytest.raises(DegeneratePoints):
        trinomial_syzygies([(0, 0), (1, 0), (0, 1)])


def test_primitive_int():
    assert primitive_int((Fraction(1, 2), Fraction(-3, 4))) == (2, -3)
    with pytest.raises(ValueError):
        primitive_int((0, 0))
