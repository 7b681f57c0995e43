"""Random complexity-one data for the property tests (seeded by the caller)."""
from fractions import Fraction
from math import gcd

from tcox.cox_pipeline import ComplexityOneData
from tcox.orlik_wagreich import OWArm, OWGraph
from tcox.pdiv import P1Point


def random_points(rng, k):
    pts, seen = [], set()
    while len(pts) < k:
        b, c = rng.randint(-4, 4), rng.randint(-4, 4)
        if (b, c) == (0, 0):
            continue
        p = P1Point(b, c)
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return pts


def random_geometric_data(rng):
    """Points, arms with isotropy orders, vertices d/l with gcd(d, l) = 1 and optional rays in Z^n."""
    n = rng.randint(1, 2)
    k = rng.randint(2, 5)
    pts = random_points(rng, k)
    arms, verts, lab = [], [], 0
    for _ in pts:
        arm = []
        for _ in range(rng.randint(1, 3)):
            lab += 1
            mu = rng.randint(1, 4)
            v = []
            for c in range(n):
                d = rng.randint(-5, 5)
                while c == 0 and gcd(d, mu) != 1:
                    d += 1
                v.append(Fraction(d, mu))
            arm.append((f"T{lab}", mu))
            verts.append((f"T{lab}", tuple(v)))
        arms.append(tuple(arm))
    rays = []
    for j in range(rng.randint(0, 2)):
        r = tuple(rng.choice([-1, 1]) if c == 0 else rng.randint(-2, 2) for c in range(n))
        rays.append((f"S{j + 1}", r))
    return ComplexityOneData(tuple(pts), tuple(arms), tuple(l for l, _ in rays), tuple(verts), tuple(rays))


def random_closed_arm(rng, blowups):
    """Self-intersection numbers of a chain reached from a single 0-curve by blowing up."""
    b = [0]
    for _ in range(blowups):
        pos = rng.randint(0, len(b))  # 0 and len(b): blow up the end point on F+ or F-
        if pos == 0:
            b = [1, b[0] + 1] + b[1:]
        elif pos == len(b):
            b = b[:-1] + [b[-1] + 1, 1]
        else:
            b = b[:pos - 1] + [b[pos - 1] + 1, 1, b[pos] + 1] + b[pos + 1:]
    return tuple(b)


def random_ow_graph(rng):
    k = rng.randint(1, 5)
    pts = random_points(rng, k)
    arms = tuple(OWArm(p, random_closed_arm(rng, rng.randint(0, 4))) for p in pts)
    return OWGraph(arms, c_plus=rng.randint(-3, 1))
