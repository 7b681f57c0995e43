"""Complexity-one engine.

Turns a divisorial fan over P^1 (or abstract complexity-one data) into the
class group with its degree map, the trinomial Cox ring presentation, the
canonical class and the moving cone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import GradingUnavailable, InvalidFan, UnknownLabel
from .intlinalg import (FGAbelianGroup, GroupElement, IntMatrix, SNFResult, check_points, cokernel,
                        rebase, snf, syz2, trinomial_syzygies)
from .pdiv import DivisorialFanP1, P1Point, ValidityReport, check_fan, slices
from .polyhedra import Cone
from .presentation import (GradedPresentation, Generator, Monomial, Polynomial, saturation_grading)


@dataclass(frozen=True)
class ComplexityOneData:
    """Combinatorial input of the trinomial Cox ring.

    ``arms[i]`` lists (label, l_ij) for the D-divisors over ``points[i]``.
    ``vertices`` (label -> point of N_Q) and ``rays`` (label -> primitive
    ray) are optional; with them the class group can be computed exactly.
    ``padded`` counts trailing points that carry trivial slices and were
    added so that at least two points are marked.
    """
    points: tuple[P1Point, ...]
    arms: tuple[tuple[tuple[str, int], ...], ...]
    e_labels: tuple[str, ...] = ()
    vertices: tuple[tuple[str, tuple[Fraction, ...]], ...] = ()
    rays: tuple[tuple[str, tuple[int, ...]], ...] = ()
    provenance: tuple[tuple[str, str], ...] = ()
    padded: int = 0
    fan: DivisorialFanP1 | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.points) != len(self.arms):
            raise ValueError("one arm of D-labels per point is required")
        check_points([p.representative for p in self.points])
        labels = [l for arm in self.arms for l, _ in arm] + list(self.e_labels)
        if len(set(labels)) != len(labels) or "D0" in labels:
            raise ValueError("generator labels must be unique and different from D0")
        for i, arm in enumerate(self.arms):
            if not arm:
                raise ValueError(f"point {i} has no D-divisor")
            for l, mu in arm:
                if mu < 1:
                    raise ValueError(f"isotropy order of {l} must be positive")

    @property
    def r(self) -> int:
        return len(self.points) - 1

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for arm in self.arms for l, _ in arm) + tuple(self.e_labels)

    @property
    def marked_points(self) -> tuple[P1Point, ...]:
        return self.points[:len(self.points) - self.padded]

    def l(self, label: str) -> int:
        for arm in self.arms:
            for lab, mu in arm:
                if lab == label:
                    return mu
        raise UnknownLabel(label)

    def provenance_of(self, label: str) -> str:
        p = dict(self.provenance)
        if label in p:
            return p[label]
        return "E-ray" if label in self.e_labels else "D-vertex"

    @property
    def has_geometry(self) -> bool:
        v = dict(self.vertices)
        rr = dict(self.rays)
        return all(l in v for arm in self.arms for l, _ in arm) and all(e in rr for e in self.e_labels)


_PAD_CANDIDATES = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)]


def _pad_points(taken: Sequence[P1Point], declared: Sequence[P1Point], k: int) -> list[P1Point]:
    out = []
    for p in list(declared) + [P1Point(b, c) for b, c in _PAD_CANDIDATES]:
        if len(out) == k:
            break
        if p not in taken and p not in out:
            out.append(p)
    return out


def from_fan(fan: DivisorialFanP1) -> ComplexityOneData:
    """Marked points, D-labels (extremal vertices) and E-labels (extremal rays).

    D-labels are T1, T2, ... in point order then lexicographic vertex order;
    E-labels are S1, S2, ... in lexicographic ray order.  When fewer than two
    points have non-trivial slices, points with trivial slices (single vertex
    0, index 1) are added until two are marked.
    """
    if fan.valid is None or fan.complete is None:
        fan = fan.checked()
    if not fan.valid:
        raise InvalidFan("divisorial fan is not valid: " + "; ".join(check_fan(fan).messages))
    if not fan.complete:
        raise InvalidFan("divisorial fan is not complete: " + "; ".join(check_fan(fan).messages))
    sd = slices(fan)
    n = fan.ambient_rank
    pts, arms, verts, prov = [], [], [], []
    k = 0
    for s in sd.nontrivial_points:
        arm = []
        for v, mu in s.vertices:
            k += 1
            lab = f"T{k}"
            arm.append((lab, mu))
            verts.append((lab, v))
        pts.append(s.point)
        arms.append(tuple(arm))
    padded = 0
    if len(pts) < 2:
        extra = _pad_points(pts, [s.point for s in sd.points if not s.nontrivial], 2 - len(pts))
        for p in extra:
            k += 1
            lab = f"T{k}"
            pts.append(p)
            arms.append(((lab, 1),))
            verts.append((lab, (Fraction(0),) * n))
        padded = len(extra)
    rays = [(f"S{j + 1}", r) for j, r in enumerate(sd.extremal_rays)]
    return ComplexityOneData(tuple(pts), tuple(arms), tuple(l for l, _ in rays), tuple(verts), tuple(rays),
                             tuple(prov), padded, fan)


@dataclass(frozen=True)
class ClassGroup:
    """Relation matrix, its SNF and the resulting degree map (including D0)."""
    matrix: IntMatrix
    column_labels: tuple[str, ...]
    group: FGAbelianGroup
    degrees: Mapping[str, GroupElement]
    snf: SNFResult

    def degree(self, label: str) -> GroupElement:
        if label not in self.degrees:
            raise UnknownLabel(f"no degree for {label!r}")
        return self.degrees[label]


def relation_rows(data: ComplexityOneData) -> tuple[tuple[str, ...], list[list[int]]]:
    """Columns D0, D-labels, E-labels; one slice row per point, one row per basis vector of M."""
    if not data.has_geometry:
        raise GradingUnavailable("class group needs vertex and ray data for every generator")
    cols = ("D0",) + data.labels
    idx = {l: i for i, l in enumerate(cols)}
    rows = []
    for arm in data.arms:
        row = [0] * len(cols)
        row[0] = -1
        for lab, mu in arm:
            row[idx[lab]] = mu
        rows.append(row)
    verts = dict(data.vertices)
    rays = dict(data.rays)
    dims = {len(v) for v in verts.values()} | {len(r) for r in rays.values()}
    if len(dims) > 1:
        raise ValueError("vertices and rays live in lattices of different rank")
    n = dims.pop() if dims else 0
    for k in range(n):
        row = [0] * len(cols)
        for arm in data.arms:
            for lab, mu in arm:
                x = mu * Fraction(verts[lab][k])
                if x.denominator != 1:
                    raise ValueError(f"isotropy order {mu} of {lab} does not clear the denominators of its vertex")
                row[idx[lab]] = int(x)
        for lab in data.e_labels:
            row[idx[lab]] = rays[lab][k]
        rows.append(row)
    return cols, rows


def class_group_from_rows(cols: Sequence[str], rows: Sequence[Sequence[int]], basis: Mapping | None = None) -> ClassGroup:
    A = IntMatrix.from_rows(rows, len(cols)) if rows else IntMatrix.zeros(0, len(cols))
    group, degs = cokernel(A)
    if basis is not None:
        idx = {l: i for i, l in enumerate(cols)}

        def vec(combo):
            v = [0] * len(cols)
            for l, c in combo.items():
                if l not in idx:
                    raise UnknownLabel(f"basis mentions unknown generator {l!r}")
                v[idx[l]] = c
            return v

        group, degs = rebase(group, degs, [vec(c) for c in basis.get("free", ())],
                             [vec(c) for c, _ in basis.get("torsion", ())],
                             [o for _, o in basis.get("torsion", ())])
    return ClassGroup(A, tuple(cols), group, dict(zip(cols, degs)), snf(A))


def class_group(data: ComplexityOneData, basis: Mapping | None = None) -> ClassGroup:
    cols, rows = relation_rows(data)
    return class_group_from_rows(cols, rows, basis)


def class_group_from_fan(fan: DivisorialFanP1, basis: Mapping | None = None) -> ClassGroup:
    return class_group(from_fan(fan), basis)


def arm_monomial(data: ComplexityOneData, i: int) -> Monomial:
    return Monomial(tuple(data.arms[i]))


def cox_relations(data: ComplexityOneData, syzygy_basis: str = "trinomial") -> tuple[Polynomial, ...]:
    reps = [p.representative for p in data.points]
    if len(reps) < 3:
        return ()
    if syzygy_basis == "trinomial":
        syz = trinomial_syzygies(reps)
    elif syzygy_basis == "saturated":
        syz = syz2(reps)
    else:
        raise ValueError(f"unknown syzygy basis {syzygy_basis!r}")
    fs = [arm_monomial(data, i) for i in range(len(reps))]
    return tuple(Polynomial(tuple((f, Fraction(b)) for f, b in zip(fs, s) if b)) for s in syz)


def _grading_pair(grading):
    if isinstance(grading, ClassGroup):
        return grading.group, grading.degrees
    return grading


def cox_ring(data: ComplexityOneData, grading=None, syzygy_basis: str = "trinomial") -> GradedPresentation:
    """Generators S_k (E-labels) and T_ij (D-labels), trinomial relations.

    ``grading`` is a ClassGroup or a pair (group, degree dict).  If omitted,
    the class group is computed from the vertex data when available;
    otherwise the finest homogeneous grading is used and marked as such.
    """
    rels = cox_relations(data, syzygy_basis)
    if grading is None and data.has_geometry:
        grading = class_group(data)
    order = list(data.e_labels) + [l for arm in data.arms for l, _ in arm]
    if grading is None:
        gens = tuple(Generator(l, None, data.provenance_of(l)) for l in order)
        P = GradedPresentation(gens, rels, None, "ungraded")
        return saturation_grading(P)
    group, degs = _grading_pair(grading)
    for l in order:
        if l not in degs:
            raise UnknownLabel(f"grading has no degree for {l!r}")
    gens = tuple(Generator(l, degs[l], data.provenance_of(l)) for l in order)
    return GradedPresentation(gens, rels, group, "full")


def canonical_class(data: ComplexityOneData, grading, i: int = 0) -> GroupElement:
    """Class of max(0, r-1) * sum_j l_ij D_ij - sum E_k - sum D_ij."""
    if not 0 <= i <= data.r:
        raise IndexError(f"arm index {i} out of range 0..{data.r}")
    group, degs = _grading_pair(grading)
    c = max(0, data.r - 1)
    out = group.zero()
    for lab, mu in data.arms[i]:
        out = out + degs[lab] * (c * mu)
    for lab in data.labels:
        out = out - degs[lab]
    return out


def moving_cone(degrees: Sequence[GroupElement]) -> Cone:
    """Intersection over all generators g of the cone spanned by the other free parts."""
    if not degrees:
        raise ValueError("no degrees")
    d = degrees[0].owner.free_rank
    out = None
    for k in range(len(degrees)):
        others = [g.free_part for j, g in enumerate(degrees) if j != k and any(g.free_part)]
        c = Cone.from_generators(others, d) if others else Cone(d)
        out = c if out is None else out.intersect(c)
    return out


@dataclass
class FanResult:
    data: ComplexityOneData
    validity: ValidityReport
    class_group: ClassGroup
    presentation: GradedPresentation
    canonical_class: GroupElement
    moving_cone: Cone


def run_fan(fan: DivisorialFanP1, basis: Mapping | None = None, syzygy_basis: str = "trinomial") -> FanResult:
    rep = check_fan(fan)
    if not rep.valid or not rep.complete:
        raise InvalidFan("; ".join(rep.messages) or "divisorial fan rejected")
    fan = DivisorialFanP1(fan.divisors, fan.points, rep.valid, rep.complete)
    data = from_fan(fan)
    cg = class_group(data, basis)
    P = cox_ring(data, cg, syzygy_basis)
    K = canonical_class(data, cg, 0)
    mc = moving_cone([g.degree for g in P.generators])
    return FanResult(data, rep, cg, P, K, mc)
