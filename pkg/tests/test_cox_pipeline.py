import random
from fractions import Fraction

import pytest

from conftest import TWO_D4_BASIS
from random_data import random_geometric_data
from tcox.cox_pipeline import (ComplexityOneData, canonical_class, class_group, cox_relations, cox_ring, from_fan,
                               moving_cone, relation_rows, run_fan)
from tcox.errors import GradingUnavailable, InvalidBasis, InvalidFan
from tcox.pdiv import DivisorialFanP1, P1Point, PolyhedralDivisorP1
from tcox.polyhedra import Cone, SigmaPolyhedron
from tcox.presentation import degree_of, is_homogeneous, parse_polynomial, row_space_equal


def test_from_fan_labels_two_d4(fan_2d4):
    data = from_fan(fan_2d4)
    assert data.arms == ((("T1", 1), ("T2", 1)), (("T3", 2),), (("T4", 2),), (("T5", 2),))
    assert data.e_labels == () and data.padded == 0
    assert dict(data.vertices)["T1"] == (Fraction(-2),)


def test_relation_rows_two_d4(fan_2d4):
    cols, rows = relation_rows(from_fan(fan_2d4))
    assert cols == ("D0", "T1", "T2", "T3", "T4", "T5")
    assert rows == [[-1, 1, 1, 0, 0, 0], [-1, 0, 0, 2, 0, 0], [-1, 0, 0, 0, 2, 0], [-1, 0, 0, 0, 0, 2],
                    [0, -2, -1, 1, 1, 1]]


def test_class_group_two_d4_in_chosen_basis(fan_2d4):
    cg = class_group(from_fan(fan_2d4), TWO_D4_BASIS)
    assert str(cg.group) == "Z + Z/2 + Z/2"
    assert cg.snf.invariant_factors == (1, 1, 1, 2, 2)
    got = {l: cg.degree(l).as_tuple() for l in ("T1", "T2", "T3", "T4", "T5")}
    assert got == {"T1": (1, 1, 0), "T2": (1, 1, 0), "T3": (1, 1, 1), "T4": (1, 0, 0), "T5": (1, 0, 1)}
    assert cg.degree("D0").as_tuple() == (2, 0, 0)


def test_bad_basis_is_rejected(fan_2d4):
    with pytest.raises(InvalidBasis):
        class_group(from_fan(fan_2d4), {"free": [{"T4": 1}], "torsion": [({"T4": 1}, 2), ({"T5": 1}, 2)]})


def test_syzygy_bases_span_the_same_relations(fan_2d4):
    data = from_fan(fan_2d4)
    tri, sat = cox_relations(data, "trinomial"), cox_relations(data, "saturated")
    assert len(tri) == len(sat) == 2
    assert row_space_equal(tri, sat)
    assert all(len(r.terms) == 3 for r in tri)
    with pytest.raises(ValueError):
        cox_relations(data, "groebner")


def test_canonical_class_two_d4(fan_2d4):
    data = from_fan(fan_2d4)
    cg = class_group(data, TWO_D4_BASIS)
    ks = {canonical_class(data, cg, i).as_tuple() for i in range(4)}
    assert ks == {(-1, 1, 0)}
    # adjunction: K = sum of relation degrees - sum of generator degrees
    P = cox_ring(data, cg)
    adj = P.grading.zero()
    for r in P.relations:
        adj = adj + degree_of(r.monomials[0], P)
    for g in P.generators:
        adj = adj - g.degree
    assert adj.as_tuple() == (-1, 1, 0)
    with pytest.raises(IndexError):
        canonical_class(data, cg, 4)


def test_run_fan_two_d4(fan_2d4):
    res = run_fan(fan_2d4, TWO_D4_BASIS)
    assert res.moving_cone == Cone.from_generators([(1,)], 1)
    assert res.presentation.grading_status == "full"
    want = [parse_polynomial("T1*T2 + T3^2 + T4^2"), parse_polynomial("2*T3^2 + T4^2 + T5^2")]
    assert row_space_equal(res.presentation.relations, want)


def test_cotangent_fan(fan_cotangent):
    res = run_fan(fan_cotangent)
    P = res.presentation
    assert P.grading.free_rank == 2 and P.grading.torsion_orders == ()
    degs = P.degrees()
    assert degs["T1"] == degs["T3"] == degs["T6"] and degs["T2"] == degs["T4"] == degs["T5"]
    assert degs["T1"] != degs["T2"]
    assert row_space_equal(P.relations, [parse_polynomial("T1*T2 + T3*T4 + T5*T6")])
    assert res.canonical_class.as_tuple() == (-2, 0)


def p1xp1_fan():
    pos, neg = Cone.from_generators([(1,)], 1), Cone.from_generators([(-1,)], 1)
    z, inf = P1Point(1, 0, "0"), P1Point(0, 1, "inf")
    e = SigmaPolyhedron.empty(1)
    divs = [PolyhedralDivisorP1(t, [(p, e)], f"D{k}") for k, (t, p) in enumerate(
        [(pos, inf), (pos, z), (neg, inf), (neg, z)])]
    return DivisorialFanP1(tuple(divs), (z, inf))


def test_padding_when_no_point_is_marked():
    data = from_fan(p1xp1_fan())
    assert data.padded == 2 and data.marked_points == ()
    assert data.e_labels == ("S1", "S2")
    P = cox_ring(data)
    assert P.relations == () and P.grading.free_rank == 2
    d = P.degrees()
    assert d["S1"] == d["S2"] and d["T1"] == d["T2"] and d["S1"] != d["T1"]


def test_invalid_fan_is_refused(fan_2d4):
    with pytest.raises(InvalidFan):
        from_fan(DivisorialFanP1(fan_2d4.divisors[:2], fan_2d4.points))


def test_data_without_geometry_gets_maximal_grading():
    pts = (P1Point(1, 0), P1Point(0, 1), P1Point(1, 1))
    data = ComplexityOneData(pts, ((("T1", 2),), (("T2", 3),), (("T3", 5),)))
    P = cox_ring(data)
    assert P.grading_status == "maximal" and is_homogeneous(P)
    with pytest.raises(GradingUnavailable):
        class_group(data)


def test_complexity_one_data_validation():
    pts = (P1Point(1, 0), P1Point(0, 1))
    with pytest.raises(ValueError):
        ComplexityOneData(pts, ((("T1", 1),),))
    with pytest.raises(ValueError):
        ComplexityOneData(pts, ((("T1", 1),), (("T1", 1),)))
    with pytest.raises(ValueError):
        ComplexityOneData(pts, ((("T1", 0),), (("T2", 1),)))


def test_moving_cone_examples():
    from tcox.intlinalg import FGAbelianGroup
    g = FGAbelianGroup(2)
    degs = [g.element((1, 0)), g.element((1, 0)), g.element((0, 1)), g.element((1, 1))]
    # F1: removing C + f leaves cone(f, C) intact; removing the only C leaves cone(f, C + f)
    assert moving_cone(degs) == Cone.from_generators([(1, 0), (1, 1)], 2)


@pytest.mark.parametrize("seed", range(10))
def test_random_data_invariants(seed):
    data = random_geometric_data(random.Random(seed))
    P = cox_ring(data)
    assert is_homogeneous(P)
    assert len(P.relations) == max(0, data.r - 1)
    ks = {canonical_class(data, class_group(data), i) for i in range(data.r + 1)}
    assert len(ks) == 1
