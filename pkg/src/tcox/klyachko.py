"""Cox rings of projectivized rank-2 toric bundles and tangent bundles.

The class group is the cokernel of two kinds of rows over the generators
(S_rho for the rays, T_L for the lines):

* fibre rows: all products T_L * S^L have one common degree (they are the
  homogeneous coordinates of the fibre P^1);
* character rows: <u, v_rho> at S_rho for a basis u of M.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cox_pipeline import _PAD_CANDIDATES, ComplexityOneData
from .errors import InvalidBundle
from .intlinalg import IntMatrix, cokernel, kernel_basis, syz2
from .pdiv import P1Point
from .presentation import GradedPresentation, Generator, Monomial, Polynomial


@dataclass(frozen=True)
class BundleRay:
    v: tuple[int, ...]
    i0: int
    i1: int
    line: P1Point | None = None

    def __post_init__(self):
        if self.i0 > self.i1:
            raise InvalidBundle(f"ray {self.v}: i0 = {self.i0} exceeds i1 = {self.i1}")
        if self.i0 < self.i1 and self.line is None:
            raise InvalidBundle(f"ray {self.v} jumps in two steps but no line L is given")


@dataclass(frozen=True)
class Rank2BundleData:
    ambient_rank: int
    rays: tuple[BundleRay, ...]

    def __post_init__(self):
        if self.ambient_rank < 1:
            raise InvalidBundle("ambient rank must be positive")
        vs = [r.v for r in self.rays]
        if len(set(vs)) != len(vs):
            raise InvalidBundle("rays must be pairwise distinct")
        for v in vs:
            if len(v) != self.ambient_rank:
                raise InvalidBundle(f"ray {v} does not live in Z^{self.ambient_rank}")

    def lines(self) -> list[P1Point]:
        out = []
        for r in self.rays:
            if r.i0 < r.i1 and r.line not in out:
                out.append(r.line)
        return out


def _cokernel_grading(labels, rows):
    A = IntMatrix.from_rows(rows, len(labels)) if rows else IntMatrix.zeros(0, len(labels))
    return cokernel(A)


def _fibre_rows(labels, fibre_monomials):
    idx = {l: i for i, l in enumerate(labels)}
    vecs = []
    for m in fibre_monomials:
        v = [0] * len(labels)
        for l, e in m.exps:
            v[idx[l]] += e
        vecs.append(v)
    return [[a - b for a, b in zip(vecs[k + 1], vecs[k])] for k in range(len(vecs) - 1)]


def _character_rows(labels, s_rays):
    n = len(next(iter(s_rays.values()))) if s_rays else 0
    return [[s_rays[l][k] if l in s_rays else 0 for l in labels] for k in range(n)]


def projectivization_cox(d: Rank2BundleData, smooth: bool = True) -> GradedPresentation:
    """Cox ring of P(E) for a rank-2 bundle given by its filtration jumps.

    With fewer than two distinct lines, extra fibre generators are added
    until two are present, so the coordinates of the fibre P^1 survive.
    """
    s_labels = [f"S{k + 1}" for k in range(len(d.rays))]
    lines = d.lines()
    reps = list(lines)
    for b, c in _PAD_CANDIDATES:
        if len(reps) >= 2:
            break
        p = P1Point(b, c)
        if p not in reps:
            reps.append(p)
    t_labels = [f"T{k + 1}" for k in range(len(reps))]
    fibre = []
    for k, L in enumerate(reps):
        exps = [(t_labels[k], 1)]
        if k < len(lines):
            exps += [(s, r.i1 - r.i0) for s, r in zip(s_labels, d.rays) if r.i0 < r.i1 and r.line == L]
        fibre.append(Monomial(tuple(exps)))
    rels = []
    for lam in syz2([p.representative for p in reps]):
        rels.append(Polynomial(tuple((m, Fraction(c)) for m, c in zip(fibre, lam) if c)))
    labels = s_labels + t_labels
    rows = _fibre_rows(labels, fibre) + _character_rows(labels, dict(zip(s_labels, (r.v for r in d.rays))))
    group, degs = _cokernel_grading(labels, rows)
    gens = [Generator(l, g, "bundle-S" if l.startswith("S") else "bundle-T") for l, g in zip(labels, degs)]
    notes = ()
    if len(lines) < 2:
        notes = (f"{2 - len(lines)} fibre generator(s) added: fewer than two distinct jump lines",)
    status = "full" if smooth else "free-part-only"
    return GradedPresentation(tuple(gens), tuple(rels), group, status, notes)


def cotangent_cox(rays: Sequence[Sequence[int]], smooth: bool = True) -> GradedPresentation:
    """Cox ring of the projectivized tangent bundle of a complete toric variety."""
    rays = [tuple(int(x) for x in r) for r in rays]
    if len(rays) < 2:
        raise InvalidBundle("at least two rays are required")
    if len(set(rays)) != len(rays):
        raise InvalidBundle("rays must be pairwise distinct")
    n = len(rays[0])
    if n < 2 or any(len(r) != n for r in rays):
        raise InvalidBundle("rays must share one ambient rank of at least 2")
    s_labels = [f"S{k + 1}" for k in range(len(rays))]
    s_of = dict(zip(rays, s_labels))
    reps = []
    for r in rays:
        neg = tuple(-x for x in r)
        if r not in reps and neg not in reps:
            reps.append(r)
    t_labels = [f"T{k + 1}" for k in range(len(reps))]
    fibre = []
    for t, v in zip(t_labels, reps):
        neg = tuple(-x for x in v)
        exps = [(t, 1), (s_of[v], 1)]
        if neg in s_of:
            exps.append((s_of[neg], 1))
        fibre.append(Monomial(tuple(exps)))
    A = IntMatrix.from_rows([[v[k] for v in reps] for k in range(n)], len(reps))
    rels = [Polynomial(tuple((m, Fraction(c)) for m, c in zip(fibre, lam) if c)) for lam in kernel_basis(A)]
    labels = s_labels + t_labels
    rows = _fibre_rows(labels, fibre) + _character_rows(labels, dict(zip(s_labels, rays)))
    group, degs = _cokernel_grading(labels, rows)
    gens = [Generator(l, g, "bundle-S" if l.startswith("S") else "bundle-T") for l, g in zip(labels, degs)]
    return GradedPresentation(tuple(gens), tuple(rels), group, "full" if smooth else "free-part-only")


def projectivization_data(d: Rank2BundleData) -> ComplexityOneData:
    """The same ring read as complexity-one data: over each line L the arm is T_L and the jumping S_rho."""
    s_labels = [f"S{k + 1}" for k in range(len(d.rays))]
    lines = d.lines()
    reps = list(lines)
    for b, c in _PAD_CANDIDATES:
        if len(reps) >= 2:
            break
        p = P1Point(b, c)
        if p not in reps:
            reps.append(p)
    arms = []
    for k, L in enumerate(reps):
        arm = [(f"T{k + 1}", 1)]
        if k < len(lines):
            arm += [(s, r.i1 - r.i0) for s, r in zip(s_labels, d.rays) if r.i0 < r.i1 and r.line == L]
        arms.append(tuple(arm))
    e = tuple(s for s, r in zip(s_labels, d.rays) if r.i0 == r.i1)
    prov = tuple((s, "bundle-S") for s in s_labels) + tuple((f"T{k + 1}", "bundle-T") for k in range(len(reps)))
    return ComplexityOneData(tuple(reps), tuple(arms), e, provenance=prov, padded=len(reps) - len(lines))


def cotangent_data(rays: Sequence[Sequence[int]]) -> ComplexityOneData:
    """Complexity-one data of P(T_X) for a toric surface X."""
    rays = [tuple(int(x) for x in r) for r in rays]
    if any(len(r) != 2 for r in rays):
        raise InvalidBundle("complexity-one reading needs a toric surface")
    s_of = {r: f"S{k + 1}" for k, r in enumerate(rays)}
    reps = []
    for r in rays:
        if r not in reps and tuple(-x for x in r) not in reps:
            reps.append(r)
    arms = []
    for k, v in enumerate(reps):
        neg = tuple(-x for x in v)
        arm = [(f"T{k + 1}", 1), (s_of[v], 1)]
        if neg in s_of:
            arm.append((s_of[neg], 1))
        arms.append(tuple(arm))
    prov = tuple((s, "bundle-S") for s in s_of.values()) + tuple((f"T{k + 1}", "bundle-T") for k in range(len(reps)))
    return ComplexityOneData(tuple(P1Point(v[0], v[1]) for v in reps), tuple(arms), (), provenance=prov)
