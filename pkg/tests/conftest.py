from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from tcox.pdiv import DivisorialFanP1, P1Point, PolyhedralDivisorP1
from tcox.polyhedra import Cone, SigmaPolyhedron

# every property test is derandomized: same examples on every run
settings.register_profile("fixed", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fixed")

HALF = Fraction(1, 2)
I = SigmaPolyhedron.interval


def two_d4_points():
    return [P1Point(1, 0, "a0"), P1Point(0, 1, "a1"), P1Point(-1, -1, "a2"), P1Point(1, -1, "a3")]


def two_d4_fan(mu_half=HALF):
    """The K*-surface of type 2D4 as a divisorial fan with three cells over Z."""
    pts = two_d4_points()
    neg = Cone.from_generators([(-1,)], 1)
    pos = Cone.from_generators([(1,)], 1)
    h = mu_half
    d1 = PolyhedralDivisorP1(neg, [(pts[0], I(None, -2))] + [(p, I(None, h)) for p in pts[1:]], "D1")
    d2 = PolyhedralDivisorP1(pos, [(pts[0], I(-1, None))] + [(p, I(h, None)) for p in pts[1:]], "D2")
    d3 = PolyhedralDivisorP1(Cone(1), [(pts[0], I(-2, -1)), (pts[1], I(h, h)), (pts[2], I(h, h)),
                                       (pts[3], SigmaPolyhedron.empty(1))], "D3")
    return DivisorialFanP1((d1, d2, d3), tuple(pts))


TWO_D4_BASIS = {"free": [{"T4": 1}], "torsion": [({"T3": 1, "T5": -1}, 2), ({"T4": 1, "T5": -1}, 2)]}


def cotangent_p2_fan():
    """P(T) over P^2: six cells whose tails form the fan with rays +-e1, +-e2, +-(e1 + e2)."""
    pts = [P1Point(1, 0, "0"), P1Point(-1, -1, "1"), P1Point(0, 1, "inf")]

    def cone(*g):
        return Cone.from_generators(g, 2)

    tails = [cone((0, 1), (1, 1)), cone((1, 0), (1, 1)), cone((1, 0), (0, -1)),
             cone((0, -1), (-1, -1)), cone((-1, -1), (-1, 0)), cone((-1, 0), (0, 1))]
    verts = {
        0: [[(0, 1)], [(0, 0), (0, 1)], [(0, 0)], [(0, 0)], [(0, 0), (0, 1)], [(0, 1)]],
        1: [[(0, 0), (1, 0)], [(1, 0)], [(1, 0)], [(0, 0), (1, 0)], [(0, 0)], [(0, 0)]],
        2: [[(0, 0)], [(0, 0)], [(0, 0), (-1, -1)], [(-1, -1)], [(-1, -1)], [(0, 0), (-1, -1)]],
    }
    divs = []
    for k, t in enumerate(tails):
        coeffs = [(pts[i], SigmaPolyhedron.make(verts[i][k], t)) for i in range(3)]
        divs.append(PolyhedralDivisorP1(t, coeffs, f"D{k + 1}"))
    return DivisorialFanP1(tuple(divs), tuple(pts))


@pytest.fixture
def fan_2d4():
    return two_d4_fan()


@pytest.fixture
def fan_cotangent():
    return cotangent_p2_fan()


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
