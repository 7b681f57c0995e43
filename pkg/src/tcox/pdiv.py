"""Polyhedral divisors and divisorial fans over the projective line."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor
from typing import Mapping, Sequence

from .errors import InvalidFan, NonCompleteLocus, TailMismatch
from .polyhedra import (Cone, SigmaPolyhedron, intersect, is_face,
                        is_subset, minkowski_sum, support_min, vertex_index)


class P1Point:
    """A point [b : c] of P^1 that remembers the representative it was given.

    Equality and hashing are projective; the representative matters only
    for trinomial coefficients downstream.
    """
    __slots__ = ("b", "c", "name", "key")

    def __init__(self, b, c, name: str | None = None):
        b, c = Fraction(b), Fraction(c)
        if b == 0 and c == 0:
            raise ValueError("[0:0] is not a point of P^1")
        self.b, self.c = b, c
        self.name = name
        self.key = (Fraction(0), Fraction(1)) if b == 0 else (Fraction(1), c / b)

    @property
    def representative(self) -> tuple[Fraction, Fraction]:
        return (self.b, self.c)

    def __eq__(self, other):
        return isinstance(other, P1Point) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def sort_key(self):
        # affine points [1:c] ordered by c, the point [0:1] last
        return (self.key[0] == 0, self.key[1] if self.key[0] else 0)

    def label(self) -> str:
        return self.name if self.name is not None else f"[{self.b}:{self.c}]"

    def __repr__(self):
        return f"P1Point({self.b}, {self.c}{', ' + repr(self.name) if self.name else ''})"


def _tail_poly(tail: Cone) -> SigmaPolyhedron:
    return SigmaPolyhedron.from_cone(tail)


@dataclass(frozen=True)
class PolyhedralDivisorP1:
    """D = sum_Z Delta_Z * Z over P^1, stored with non-tail coefficients only."""
    tail: Cone
    coefficients: tuple[tuple[P1Point, SigmaPolyhedron], ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.tail.is_pointed:
            raise InvalidFan(f"tail cone {self.tail} of divisor {self.name!r} is not pointed")
        coeffs = dict(self.coefficients) if not isinstance(self.coefficients, Mapping) else dict(self.coefficients)
        if len(coeffs) != len(list(self.coefficients)):
            raise ValueError(f"divisor {self.name!r} lists a point twice")
        tp = _tail_poly(self.tail)
        kept = []
        for p, poly in coeffs.items():
            if poly.ambient_rank != self.tail.ambient_rank:
                raise ValueError(f"coefficient at {p.label()} has the wrong ambient rank")
            if not poly.is_empty and poly.tail != self.tail:
                raise TailMismatch(f"coefficient at {p.label()} of divisor {self.name!r} has tail {poly.tail}, "
                                   f"expected {self.tail}")
            if poly != tp:
                kept.append((p, poly))
        kept.sort(key=lambda t: t[0].sort_key)
        object.__setattr__(self, "coefficients", tuple(kept))

    @property
    def ambient_rank(self) -> int:
        return self.tail.ambient_rank

    @property
    def support(self) -> tuple[P1Point, ...]:
        return tuple(p for p, _ in self.coefficients)

    def coefficient(self, point: P1Point) -> SigmaPolyhedron:
        for p, poly in self.coefficients:
            if p == point:
                return poly
        return _tail_poly(self.tail)

    @property
    def has_empty(self) -> bool:
        return any(poly.is_empty for _, poly in self.coefficients)

    def sort_key(self):
        return (str(self.tail), tuple((p.sort_key, str(poly)) for p, poly in self.coefficients))


def trivial_divisor(tail: Cone, name="") -> PolyhedralDivisorP1:
    return PolyhedralDivisorP1(tail, (), name)


def evaluate(D: PolyhedralDivisorP1, u: Sequence) -> dict[P1Point, Fraction]:
    """The rational divisor D(u); points with Empty coefficient are left out."""
    u = tuple(Fraction(x) for x in u)
    tp = _tail_poly(D.tail)
    support_min(tp, u)  # raises UnboundedBelow outside the dual tail cone
    return {p: support_min(poly, u) for p, poly in D.coefficients if not poly.is_empty}


def degree(D: PolyhedralDivisorP1) -> SigmaPolyhedron:
    out = _tail_poly(D.tail)
    for _, poly in D.coefficients:
        out = minkowski_sum(out, poly)
    return out


def is_proper_p1(D: PolyhedralDivisorP1) -> bool:
    """deg(D) strictly inside tail(D), or deg(D) empty."""
    deg = degree(D)
    if deg.is_empty:
        return True
    tp = _tail_poly(D.tail)
    return is_subset(deg, tp) and deg != tp


def intersect_pdiv(D1: PolyhedralDivisorP1, D2: PolyhedralDivisorP1, name="") -> PolyhedralDivisorP1:
    tail = D1.tail.intersect(D2.tail)
    pts = {p for p in D1.support} | {p for p in D2.support}
    coeffs = []
    for p in pts:
        c = intersect(D1.coefficient(p), D2.coefficient(p))
        coeffs.append((p, c))
    return PolyhedralDivisorP1(tail, tuple(coeffs), name or f"{D1.name}&{D2.name}")


def is_face_pdiv(Dp: PolyhedralDivisorP1, D: PolyhedralDivisorP1) -> bool:
    """D' is a face of D: slice-wise faces plus deg(D) cap tail(D') = deg(D')."""
    if Dp.ambient_rank != D.ambient_rank:
        raise ValueError("divisors live in lattices of different rank")
    pts = set(Dp.support) | set(D.support)
    for p in pts:
        if not is_face(Dp.coefficient(p), D.coefficient(p)):
            return False
    # on the generic fiber both coefficients are tails
    if not is_face(_tail_poly(Dp.tail), _tail_poly(D.tail)):
        return False
    return intersect(degree(D), _tail_poly(Dp.tail)) == degree(Dp)


@dataclass(frozen=True)
class DivisorialFanP1:
    """A finite family of polyhedral divisors on P^1 with declared marked points.

    ``points`` fixes the order and the representatives used for the marked
    points; every support point of a divisor must be declared.  Divisors
    are kept in a canonical order.
    """
    divisors: tuple[PolyhedralDivisorP1, ...]
    points: tuple[P1Point, ...] = ()
    valid: bool | None = field(default=None, compare=False)
    complete: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        divs = tuple(self.divisors)
        if not divs:
            raise InvalidFan("a divisorial fan needs at least one divisor")
        n = divs[0].ambient_rank
        if any(D.ambient_rank != n for D in divs):
            raise InvalidFan("divisors of a fan must share the ambient rank")
        pts = list(self.points)
        if len(set(pts)) != len(pts):
            raise InvalidFan("marked points must be pairwise distinct")
        for D in divs:
            for p in D.support:
                if p not in pts:
                    pts.append(p)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "divisors", tuple(sorted(divs, key=lambda D: D.sort_key())))

    @property
    def ambient_rank(self) -> int:
        return self.divisors[0].ambient_rank

    def checked(self) -> "DivisorialFanP1":
        rep = check_fan(self)
        return replace(self, valid=rep.valid, complete=rep.complete)


@dataclass
class ValidityReport:
    valid: bool
    complete: bool
    proper: dict
    face_failures: list
    incomplete_points: list
    messages: list

    def to_json(self):
        return {
            "valid": self.valid,
            "complete": self.complete,
            "proper": self.proper,
            "face_failures": [list(f) for f in self.face_failures],
            "incomplete_points": self.incomplete_points,
            "messages": self.messages,
        }


def _covers_space(cells: list[SigmaPolyhedron], d: int) -> bool:
    """Whether a polyhedral complex (cells meeting in faces) covers Q^d.

    Each facet of a full-dimensional cell has to lie in a second
    full-dimensional cell; with at least one full cell this is equivalent
    to covering.
    """
    full = [c for c in cells if not c.is_empty and not c._hrep[1]]
    if not full:
        return False
    for i, c in enumerate(full):
        ineqs, eqs = c._hrep
        for a in ineqs:
            if not any(a[1:]):
                continue
            F = SigmaPolyhedron._from_homog_h(list(ineqs), list(eqs) + [a], d)
            if F.is_empty:
                continue
            if not any(is_subset(F, c2) for j, c2 in enumerate(full) if j != i):
                return False
    return True


def _div_label(D, i):
    return D.name or f"#{i}"


def check_fan(fan: DivisorialFanP1) -> ValidityReport:
    """Validity (pairwise intersections are faces), properness and completeness."""
    msgs = []
    proper = {}
    divs = fan.divisors
    for i, D in enumerate(divs):
        ok = is_proper_p1(D)
        proper[_div_label(D, i)] = ok
        if not ok:
            msgs.append(f"properness criterion deg(D) < tail(D) failed for divisor {_div_label(D, i)} "
                        "(the criterion is sufficient only; the divisor is rejected)")
    failures = []
    for i in range(len(divs)):
        for j in range(i + 1, len(divs)):
            I = intersect_pdiv(divs[i], divs[j])
            for a, b in ((i, j), (j, i)):
                if not is_face_pdiv(I, divs[a]):
                    failures.append((_div_label(divs[i], i), _div_label(divs[j], j),
                                     f"intersection is not a face of {_div_label(divs[a], a)}"))
                    msgs.append(f"divisors {_div_label(divs[i], i)} and {_div_label(divs[j], j)}: "
                                f"intersection is not a face of {_div_label(divs[a], a)}")
                    break
    d = fan.ambient_rank
    incomplete = []
    for p in fan.points:
        cells = [D.coefficient(p) for D in divs]
        if not _covers_space(cells, d):
            incomplete.append(p.label())
    generic = [_tail_poly(D.tail) for D in divs]
    if not _covers_space(generic, d):
        incomplete.append("generic")
    if incomplete:
        msgs.append("slices do not cover N_Q at: " + ", ".join(incomplete))
    valid = not failures and all(proper.values())
    return ValidityReport(valid, not incomplete, proper, failures, incomplete, msgs)


@dataclass(frozen=True)
class PointSlice:
    point: P1Point
    vertices: tuple[tuple[tuple[Fraction, ...], int], ...]
    nontrivial: bool


@dataclass(frozen=True)
class SliceData:
    points: tuple[PointSlice, ...]
    rays: tuple[tuple[tuple[int, ...], bool], ...]

    @property
    def nontrivial_points(self) -> tuple[PointSlice, ...]:
        return tuple(s for s in self.points if s.nontrivial)

    @property
    def extremal_rays(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r, e in self.rays if e)


def slices(fan: DivisorialFanP1) -> SliceData:
    out = []
    for p in fan.points:
        verts = set()
        nontrivial = False
        for D in fan.divisors:
            c = D.coefficient(p)
            if c.is_empty:
                continue
            if c != _tail_poly(D.tail):
                nontrivial = True
            verts.update(c.vertices)
        out.append(PointSlice(p, tuple((v, vertex_index(v)) for v in sorted(verts)), nontrivial))
    rays = sorted({r for D in fan.divisors for r in D.tail.rays})
    flagged = []
    for r in rays:
        ray = SigmaPolyhedron.from_cone(Cone(fan.ambient_rank, (r,)))
        ext = False
        for D in fan.divisors:
            if D.tail.contains(r) and intersect(ray, degree(D)).is_empty:
                ext = True
                break
        flagged.append((r, ext))
    return SliceData(tuple(out), tuple(flagged))


def graded_piece_dim(D: PolyhedralDivisorP1, u: Sequence) -> int:
    """dim of the degree-u piece of A(D): h^0 of the round-down of D(u) on P^1."""
    if D.has_empty:
        raise NonCompleteLocus(f"divisor {D.name!r} has an empty coefficient; its locus is not P^1")
    vals = evaluate(D, u)
    return max(0, 1 + sum(floor(v) for v in vals.values()))
