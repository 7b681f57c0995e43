"""Exact rational polyhedral geometry in Q^n.

Cones are stored by their extreme rays (primitive, lexicographically
sorted) together with a canonical lineality basis, so two cones are equal
iff their fields are equal.  Polyhedra Delta = conv(V) + sigma are handled
through the homogenized cone over {1} x Delta.  Conversions between
generators and inequalities use the double description method with the
combinatorial adjacency test.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import EmptyPolyhedron, TailMismatch, UnboundedBelow

Vec = tuple


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _prim(v) -> tuple[int, ...]:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    fr = [x if isinstance(x, int) else Fraction(x) for x in v]
    den = 1
    for x in fr:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def primitive(v: Sequence) -> tuple[int, ...]:
    """The primitive lattice vector on the ray Q>=0 * v."""
    return _prim(v)


def vertex_index(v: Sequence) -> int:
    """Least mu >= 1 with mu * v integral."""
    out = 1
    for x in v:
        out = lcm(out, Fraction(x).denominator)
    return out


def _dd(ineqs: Sequence[Sequence[int]], d: int):
    """Extreme rays and lineality basis of {x : a.x >= 0 for all a in ineqs}."""
    lin = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    rays: list[tuple[int, ...]] = []
    tight: dict[tuple[int, ...], set] = {}
    done = []
    for a in ineqs:
        a = tuple(a)
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lin) if _dot(a, l)), None)
        idx = len(done)
        if k is not None:
            l0 = lin.pop(k)
            s = _dot(a, l0)
            if s < 0:
                l0, s = tuple(-x for x in l0), -s
            lin = [_prim([s * x - _dot(a, l) * y for x, y in zip(l, l0)]) for l in lin]
            new_rays = []
            new_tight = {}
            for r in rays:
                rr = [s * x - _dot(a, r) * y for x, y in zip(r, l0)]
                if any(rr):
                    rr = _prim(rr)
                    new_rays.append(rr)
                    new_tight[rr] = tight[r] | {idx}
            rays = new_rays
            tight = new_tight
            rays.append(l0)
            tight[l0] = set(range(idx))
            done.append(a)
            continue
        vals = {r: _dot(a, r) for r in rays}
        pos = [r for r in rays if vals[r] > 0]
        zer = [r for r in rays if vals[r] == 0]
        neg = [r for r in rays if vals[r] < 0]
        new = []
        new_t = {}
        if pos and neg:
            others = pos + zer + neg
            for p in pos:
                for q in neg:
                    common = tight[p] & tight[q]
                    adjacent = True
                    for r in others:
                        if r is p or r is q:
                            continue
                        if common <= tight[r]:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vp, vq = vals[p], vals[q]
                    w = _prim([vp * y - vq * x for x, y in zip(p, q)])
                    if w not in new_t:
                        new.append(w)
                        new_t[w] = common | {idx}
        for r in zer:
            tight[r] = tight[r] | {idx}
        rays = pos + zer + new
        tight = {r: tight[r] for r in pos + zer} | new_t
        done.append(a)
    return rays, lin


def _h_from_v(rays, lin, d):
    """Inequalities (facet normals) and equations of cone(rays) + span(lin)."""
    cons = [tuple(r) for r in rays]
    for l in lin:
        cons.append(tuple(l))
        cons.append(tuple(-x for x in l))
    if not cons:
        # the zero cone: no inequalities, every coordinate is an equation
        return [], [tuple(int(i == j) for j in range(d)) for i in range(d)]
    ineqs, eqs = _dd(cons, d)
    return ineqs, eqs


def _v_from_h(ineqs, eqs, d):
    cons = [tuple(a) for a in ineqs]
    for e in eqs:
        cons.append(tuple(e))
        cons.append(tuple(-x for x in e))
    return _dd(cons, d)


def _rref_basis(vectors, d) -> tuple[tuple[int, ...], ...]:
    """Canonical primitive basis of the rational span (reduced row echelon form)."""
    rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
    out = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    for row in rows[:r]:
        out.append(_prim(row))
    return tuple(out)


def _project_out(v, lin):
    """Orthogonal projection of v onto the complement of span(lin)."""
    if not lin:
        return tuple(v)
    # Gram-Schmidt over Q
    basis = []
    for l in lin:
        w = [Fraction(x) for x in l]
        for b, bb in basis:
            c = _dot(w, b) / bb
            w = [x - c * y for x, y in zip(w, b)]
        basis.append((w, _dot(w, w)))
    w = [Fraction(x) for x in v]
    for b, bb in basis:
        c = _dot(w, b) / bb
        w = [x - c * y for x, y in zip(w, b)]
    return tuple(w)


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone cone(rays) + span(lineality) in Q^n."""
    ambient_rank: int
    rays: tuple[tuple[int, ...], ...] = ()
    lineality: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], ambient_rank: int,
                        lineality: Iterable[Sequence] = ()) -> "Cone":
        gens = [_prim(g) for g in generators if any(Fraction(x) for x in g)]
        lin = [_prim(g) for g in lineality if any(Fraction(x) for x in g)]
        for g in gens + lin:
            if len(g) != ambient_rank:
                raise ValueError(f"generator {g} does not live in Q^{ambient_rank}")
        if not gens and not lin:
            return cls(ambient_rank)
        ineqs, eqs = _h_from_v(gens, lin, ambient_rank)
        rays, lin2 = _v_from_h(ineqs, eqs, ambient_rank)
        return cls._canonical(rays, lin2, ambient_rank)

    @classmethod
    def _canonical(cls, rays, lin, d) -> "Cone":
        lb = _rref_basis(lin, d)
        rs = set()
        for r in rays:
            w = _project_out(r, lb)
            if any(w):
                rs.add(_prim(w))
        return cls(d, tuple(sorted(rs)), lb)

    @classmethod
    def from_inequalities(cls, ineqs, d: int, eqs=()) -> "Cone":
        rays, lin = _v_from_h([_prim(a) for a in ineqs if any(a)], [_prim(e) for e in eqs if any(e)], d)
        return cls._canonical(rays, lin, d)

    @classmethod
    def full(cls, d: int) -> "Cone":
        return cls._canonical([], [tuple(int(i == j) for j in range(d)) for i in range(d)], d)

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        """Generators as a cone: rays, lineality vectors and their negatives."""
        neg = tuple(tuple(-x for x in l) for l in self.lineality)
        return tuple(sorted(set(self.rays + self.lineality + neg)))

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @cached_property
    def _hrep(self):
        return _h_from_v(self.rays, self.lineality, self.ambient_rank)

    @property
    def inequalities(self):
        return self._hrep[0]

    @property
    def equations(self):
        return self._hrep[1]

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self._hrep[1])

    def contains(self, x: Sequence) -> bool:
        ineqs, eqs = self._hrep
        return all(_dot(a, x) >= 0 for a in ineqs) and all(_dot(e, x) == 0 for e in eqs)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def dual(self) -> "Cone":
        ineqs, eqs = self._hrep
        return Cone._canonical(ineqs, eqs, self.ambient_rank)

    def intersect(self, other: "Cone") -> "Cone":
        _check_rank(self.ambient_rank, other.ambient_rank)
        i1, e1 = self._hrep
        i2, e2 = other._hrep
        return Cone.from_inequalities(list(i1) + list(i2), self.ambient_rank, list(e1) + list(e2))

    def __str__(self):
        s = "cone(" + ", ".join(str(r) for r in self.rays) + ")"
        if self.lineality:
            s += " + span(" + ", ".join(str(l) for l in self.lineality) + ")"
        return s


def _check_rank(a, b):
    if a != b:
        raise ValueError(f"ambient rank mismatch: {a} vs {b}")


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class SigmaPolyhedron:
    """conv(vertices) + tail, or the empty polyhedron (vertices == (), tail is None)."""
    ambient_rank: int
    vertices: tuple[tuple[Fraction, ...], ...]
    tail: Cone | None

    @classmethod
    def make(cls, vertices: Iterable[Sequence], tail: Cone) -> "SigmaPolyhedron":
        d = tail.ambient_rank
        verts = [_frac_vec(v) for v in vertices]
        if not verts:
            raise ValueError("a non-empty polyhedron needs at least one vertex; use SigmaPolyhedron.empty")
        for v in verts:
            if len(v) != d:
                raise ValueError(f"vertex {v} does not live in Q^{d}")
        gens = [_prim((1,) + v) for v in set(verts)] + [(0,) + r for r in tail.rays]
        lin = [(0,) + l for l in tail.lineality]
        ineqs, eqs = _h_from_v(gens, lin, d + 1)
        return cls._from_homog_h(ineqs, eqs, d)

    @classmethod
    def _from_homog_h(cls, ineqs, eqs, d) -> "SigmaPolyhedron":
        t_pos = tuple(int(i == 0) for i in range(d + 1))
        rays, lin = _v_from_h(list(ineqs) + [t_pos], eqs, d + 1)
        if not any(r[0] > 0 for r in rays):
            return cls.empty(d)
        tail = Cone._canonical([r[1:] for r in rays if r[0] == 0], [l[1:] for l in lin], d)
        verts = set()
        for r in rays:
            if r[0] > 0:
                v = _project_out([Fraction(x, r[0]) for x in r[1:]], tail.lineality)
                verts.add(tuple(Fraction(x) for x in v))
        return cls(d, tuple(sorted(verts)), tail)

    @classmethod
    def empty(cls, d: int) -> "SigmaPolyhedron":
        return cls(d, (), None)

    @classmethod
    def from_cone(cls, cone: Cone) -> "SigmaPolyhedron":
        return cls.make([(0,) * cone.ambient_rank], cone)

    @classmethod
    def interval(cls, lo, hi) -> "SigmaPolyhedron":
        """1-d convenience: [lo, hi] with None for an infinite end."""
        if lo is None and hi is None:
            return cls.make([(0,)], Cone.full(1))
        if lo is None:
            return cls.make([(hi,)], Cone.from_generators([(-1,)], 1))
        if hi is None:
            return cls.make([(lo,)], Cone.from_generators([(1,)], 1))
        return cls.make([(lo,), (hi,)], Cone(1))

    @property
    def is_empty(self) -> bool:
        return self.tail is None

    @property
    def is_bounded(self) -> bool:
        return not self.is_empty and not self.tail.rays and not self.tail.lineality

    @cached_property
    def _hrep(self):
        """Homogenized inequalities a0*t + a.x >= 0 and equations."""
        gens = [_prim((1,) + v) for v in self.vertices] + [(0,) + r for r in self.tail.rays]
        lin = [(0,) + l for l in self.tail.lineality]
        return _h_from_v(gens, lin, self.ambient_rank + 1)

    def contains(self, x: Sequence) -> bool:
        if self.is_empty:
            return False
        p = (Fraction(1),) + _frac_vec(x)
        ineqs, eqs = self._hrep
        return all(_dot(a, p) >= 0 for a in ineqs) and all(_dot(e, p) == 0 for e in eqs)

    def __str__(self):
        if self.is_empty:
            return "Empty"
        vs = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"conv{{{vs}}} + {self.tail}"


def _as_poly(x, d=None) -> SigmaPolyhedron:
    if isinstance(x, Cone):
        return SigmaPolyhedron.from_cone(x)
    return x


def minkowski_sum(a, b) -> SigmaPolyhedron:
    """Minkowski sum of sigma-polyhedra with a common tail; Empty absorbs.

    Either argument may also be a Cone, standing for the tail polyhedron.
    """
    a, b = _as_poly(a), _as_poly(b)
    _check_rank(a.ambient_rank, b.ambient_rank)
    if a.is_empty or b.is_empty:
        return SigmaPolyhedron.empty(a.ambient_rank)
    if a.tail != b.tail:
        raise TailMismatch(f"tails differ: {a.tail} vs {b.tail}")
    verts = [tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices]
    return SigmaPolyhedron.make(verts, a.tail)


def support_min(delta: SigmaPolyhedron, u: Sequence) -> Fraction:
    """min of <u, .> over delta."""
    if delta.is_empty:
        raise EmptyPolyhedron("support function of the empty polyhedron")
    _check_rank(delta.ambient_rank, len(u))
    u = _frac_vec(u)
    if any(_dot(u, r) < 0 for r in delta.tail.rays) or any(_dot(u, l) != 0 for l in delta.tail.lineality):
        raise UnboundedBelow(f"u = {tuple(str(x) for x in u)} is not in the dual of the tail cone {delta.tail}")
    return min(_dot(u, v) for v in delta.vertices)


def intersect(a, b) -> SigmaPolyhedron:
    a, b = _as_poly(a), _as_poly(b)
    _check_rank(a.ambient_rank, b.ambient_rank)
    d = a.ambient_rank
    if a.is_empty or b.is_empty:
        return SigmaPolyhedron.empty(d)
    i1, e1 = a._hrep
    i2, e2 = b._hrep
    return SigmaPolyhedron._from_homog_h(list(i1) + list(i2), list(e1) + list(e2), d)


def is_subset(a, b) -> bool:
    a, b = _as_poly(a), _as_poly(b)
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return all(b.contains(v) for v in a.vertices) and b.tail.contains_cone(a.tail)


def face_containing(f: SigmaPolyhedron, delta: SigmaPolyhedron):
    """Smallest face of delta containing f (None if f is not inside delta)."""
    d = delta.ambient_rank
    if not is_subset(f, delta):
        return None
    if f.is_empty:
        return f
    ineqs, eqs = delta._hrep
    pts = [(Fraction(1),) + v for v in f.vertices] + [(0,) + r for r in f.tail.rays]
    pts += [(0,) + l for l in f.tail.lineality] + [(0,) + tuple(-x for x in l) for l in f.tail.lineality]
    tight = [a for a in ineqs if any(a[1:]) and all(_dot(a, p) == 0 for p in pts)]
    return SigmaPolyhedron._from_homog_h(list(ineqs), list(eqs) + tight, d)


def is_face(f, delta) -> bool:
    """Whether f is a face of delta (the empty set is a face of everything)."""
    f, delta = _as_poly(f), _as_poly(delta)
    _check_rank(f.ambient_rank, delta.ambient_rank)
    if f.is_empty:
        return True
    if delta.is_empty:
        return False
    F = face_containing(f, delta)
    return F is not None and F == f


def faces(delta: SigmaPolyhedron) -> list[SigmaPolyhedron]:
    """All non-empty faces, by intersecting with every subset of tight facets."""
    if delta.is_empty:
        return []
    ineqs, eqs = delta._hrep
    real = [a for a in ineqs if any(a[1:])]
    out = set()
    from itertools import combinations
    for k in range(len(real) + 1):
        for sub in combinations(real, k):
            F = SigmaPolyhedron._from_homog_h(list(ineqs), list(eqs) + list(sub), delta.ambient_rank)
            if not F.is_empty:
                out.add(F)
    return sorted(out, key=lambda p: (len(p.vertices), p.vertices, str(p.tail)))
