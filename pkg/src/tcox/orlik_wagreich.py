"""Cox rings of smooth rational K*-surfaces from Orlik-Wagreich graphs.

An arm is the chain of invariant curves over one point of P^1 running
from the source curve F+ to the sink curve F-; curve j has self
intersection -b_j.  Isotropy orders are continuants of the b's.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cox_pipeline import ComplexityOneData, _PAD_CANDIDATES, cox_ring
from .errors import InvalidGraph, UnknownLabel
from .intlinalg import cokernel, degree_relations, IntMatrix
from .pdiv import P1Point
from .presentation import GradedPresentation, substitute_one


def continuants(b: Sequence[int], first: tuple[int, int] = (0, 1)) -> list[int]:
    """x_0, x_1, ..., x_{n+1} of x_{j+1} = b_j x_j - x_{j-1}."""
    x = list(first)
    for bj in b:
        x.append(bj * x[-1] - x[-2])
    return x


def arm_isotropy(b: Sequence[int]) -> tuple[int, ...]:
    """l_1..l_n: l_j is the numerator of b_1 - 1/(b_2 - ... - 1/b_{j-1}), l_1 = 1."""
    if not b:
        raise InvalidGraph("an arm needs at least one curve")
    out = [1]
    prev, cur = 0, 1
    for bj in b[:-1]:
        prev, cur = cur, bj * cur - prev
        if not cur:
            raise InvalidGraph(f"arm {tuple(b)} has a vanishing continuant; no K*-surface has it")
        out.append(cur if cur > 0 else -cur)
    return tuple(out)


def arm_closes(b: Sequence[int]) -> bool:
    """Whether the chain ends on F-: the continuant after the last curve vanishes."""
    x = continuants(b)
    return x[-1] == 0 and all(v > 0 for v in x[1:-1])


@dataclass(frozen=True)
class OWArm:
    point: P1Point
    b: tuple[int, ...]


@dataclass(frozen=True)
class OWGraph:
    """Arms between F+ and F-; ``c_plus``/``c_minus`` are the self intersections of F+/F-."""
    arms: tuple[OWArm, ...]
    c_plus: int | None = None
    c_minus: int | None = None

    def __post_init__(self):
        if not self.arms:
            raise InvalidGraph("an Orlik-Wagreich graph needs at least one arm")
        pts = [a.point for a in self.arms]
        if len(set(pts)) != len(pts):
            raise InvalidGraph("arm points must be pairwise distinct")
        for i, a in enumerate(self.arms):
            if not a.b:
                raise InvalidGraph(f"arm {i} is empty")


@dataclass(frozen=True)
class ContractionSpec:
    exceptional_labels: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "exceptional_labels", frozenset(self.exceptional_labels))


def arm_label(i: int, j: int) -> str:
    return f"T{i}{j}" if i < 10 and j < 10 else f"T{i}_{j}"


def resolution_data(g: OWGraph) -> ComplexityOneData:
    """Complexity-one data of the surface; vertices only when F+^2 is known.

    Fewer than two arms are padded with arms of a single 0-curve (the
    general fibre).  With ``c_plus`` the slopes d_j of the vertices d_j/l_j
    follow the same recurrence as the l_j, started at (1, delta_i) with
    sum(delta_i) = -c_plus; we put the whole shift on arm 0.
    """
    arms = list(g.arms)
    taken = [a.point for a in arms]
    while len(arms) < 2:
        p = next(P1Point(b, c) for b, c in _PAD_CANDIDATES if P1Point(b, c) not in taken)
        taken.append(p)
        arms.append(OWArm(p, (0,)))
    d_arms, verts = [], []
    last_d = 0
    for i, a in enumerate(arms):
        if not arm_closes(a.b):
            raise InvalidGraph(f"arm {i} with b = {a.b} does not close up at F-")
        ls = arm_isotropy(a.b)
        labs = [arm_label(i, j + 1) for j in range(len(ls))]
        d_arms.append(tuple(zip(labs, ls)))
        if g.c_plus is not None:
            delta = -g.c_plus if i == 0 else 0
            ds = continuants(a.b, (1, delta))[1:-1]
            verts += [(lab, (Fraction(dj, lj),)) for lab, dj, lj in zip(labs, ds, ls)]
            last_d += ds[-1]
    if g.c_plus is not None and g.c_minus is not None and last_d != g.c_minus:
        raise InvalidGraph(f"F- self intersection {g.c_minus} is inconsistent with the arms (expected {last_d})")
    prov = (("S1", "F-plus"), ("S2", "F-minus"))
    rays = (("S1", (1,)), ("S2", (-1,))) if g.c_plus is not None else ()
    return ComplexityOneData(tuple(a.point for a in arms), tuple(d_arms), ("S1", "S2"), tuple(verts), rays, prov,
                             len(arms) - len(g.arms))


def resolution_cox(g: OWGraph) -> GradedPresentation:
    """Cox ring of the smooth surface: S1 = S+, S2 = S-, T_ij, trinomial relations.

    With F+^2 given, the grading is the class group (free, since the surface
    is smooth); otherwise the finest homogeneous grading is attached.
    """
    data = resolution_data(g)
    return cox_ring(data)


def contract(P: GradedPresentation, spec: ContractionSpec) -> GradedPresentation:
    """Set the generators of contracted curves to 1.

    If P carries its class group grading, the result is graded by the
    quotient by the classes of the contracted curves.
    """
    exc = set(spec.exceptional_labels)
    for l in exc:
        if l not in P.labels:
            raise UnknownLabel(f"exceptional label {l!r} is not a generator")
    if not exc:
        return P
    if P.grading_status != "full":
        return substitute_one(P, exc)
    labels = P.labels
    degs = P.degrees()
    rows = [list(r) for r in degree_relations([degs[l] for l in labels])]
    rows += [[int(l == e) for l in labels] for e in sorted(exc)]
    group, new = cokernel(IntMatrix.from_rows(rows, len(labels)))
    return substitute_one(P, exc, (group, dict(zip(labels, new))))
