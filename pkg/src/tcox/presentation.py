"""Graded ring presentations: generators with degrees, sparse relations."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import GradingUnavailable, UnknownLabel
from .intlinalg import (FGAbelianGroup, GroupElement, IntMatrix, cokernel,
                        saturation, same_grading)

PROVENANCE = ("E-ray", "D-vertex", "F-plus", "F-minus", "bundle-S", "bundle-T")
STATUSES = ("full", "free-part-only", "maximal", "ungraded")


def natural_key(label: str):
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", label))


@dataclass(frozen=True)
class Monomial:
    exps: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        d = {}
        for lab, e in (self.exps.items() if isinstance(self.exps, Mapping) else self.exps):
            if e < 0:
                raise ValueError("negative exponent")
            d[lab] = d.get(lab, 0) + int(e)
        object.__setattr__(self, "exps", tuple(sorted(((k, v) for k, v in d.items() if v),
                                                      key=lambda t: natural_key(t[0]))))

    @classmethod
    def of(cls, **exps) -> "Monomial":
        return cls(tuple(exps.items()))

    def as_dict(self) -> dict[str, int]:
        return dict(self.exps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.exps + other.exps)

    def drop(self, labels) -> "Monomial":
        return Monomial(tuple((l, e) for l, e in self.exps if l not in labels))

    def rename(self, mapping: Mapping[str, str]) -> "Monomial":
        return Monomial(tuple((mapping.get(l, l), e) for l, e in self.exps))

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(l if e == 1 else f"{l}^{e}" for l, e in self.exps)


@dataclass(frozen=True)
class Polynomial:
    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    def __post_init__(self):
        d: dict[Monomial, Fraction] = {}
        items = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        for m, c in items:
            d[m] = d.get(m, Fraction(0)) + Fraction(c)
        kept = [(m, c) for m, c in d.items() if c != 0]
        kept.sort(key=lambda t: tuple((natural_key(l), -e) for l, e in t[0].exps))
        object.__setattr__(self, "terms", tuple(kept))

    @property
    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def substitute_one(self, labels) -> "Polynomial":
        return Polynomial(tuple((m.drop(labels), c) for m, c in self.terms))

    def rename(self, mapping) -> "Polynomial":
        return Polynomial(tuple((m.rename(mapping), c) for m, c in self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = str(m) if a == 1 else (f"{a}" if not m.exps else f"{a}*{m}")
            if m.exps == () and a == 1:
                body = "1"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, constants: Mapping[str, Fraction] | None = None) -> Polynomial:
    """Parse sums of terms like ``2*T1*T2^3 - 1/2*S1``.

    Names in ``constants`` are substituted by their values (e.g. a
    parameter lambda).
    """
    constants = dict(constants or {})
    s = text.replace("−", "-").strip()
    if not s:
        raise ValueError("empty polynomial")
    terms = []
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos and s[pos:m.start()].strip():
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        exps = []
        for factor in m.group(2).split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if "^" in factor:
                base, e = factor.split("^")
                base, e = base.strip(), int(e)
            else:
                base, e = factor, 1
            if re.fullmatch(r"\d+(/\d+)?", base):
                coef *= Fraction(base) ** e
            elif base in constants:
                coef *= Fraction(constants[base]) ** e
            elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_+\-]*", base):
                exps.append((base, e))
            else:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
        terms.append((Monomial(tuple(exps)), coef))
    if pos != len(s):
        raise ValueError(f"cannot parse {text!r}")
    return Polynomial(tuple(terms))


@dataclass(frozen=True)
class Generator:
    label: str
    degree: GroupElement | None
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance tag {self.provenance!r}")


@dataclass(frozen=True)
class GradedPresentation:
    generators: tuple[Generator, ...]
    relations: tuple[Polynomial, ...]
    grading: FGAbelianGroup | None
    grading_status: str
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(r for r in self.relations if not r.is_zero()))
        if self.grading_status not in STATUSES:
            raise ValueError(f"unknown grading status {self.grading_status!r}")
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        known = set(labels)
        for rel in self.relations:
            for m in rel.monomials:
                for l in m.labels:
                    if l not in known:
                        raise UnknownLabel(f"relation uses unknown generator {l!r}")
        if self.grading_status != "ungraded":
            if self.grading is None or any(g.degree is None or g.degree.owner != self.grading for g in self.generators):
                raise ValueError("graded presentation needs a degree in the grading group for every generator")
            if self.grading_status == "full" and not is_homogeneous(self):
                raise ValueError("relations are not homogeneous for the supplied grading")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.generators)

    def generator(self, label: str) -> Generator:
        for g in self.generators:
            if g.label == label:
                return g
        raise UnknownLabel(f"no generator {label!r}")

    def degrees(self) -> dict[str, GroupElement]:
        return {g.label: g.degree for g in self.generators}

    @property
    def is_graded(self) -> bool:
        return self.grading_status != "ungraded"


def polynomial_ring(labels: Sequence[str], provenance="D-vertex") -> GradedPresentation:
    g = FGAbelianGroup(len(labels))
    gens = [Generator(l, g.element(tuple(int(i == j) for i in range(len(labels)))), provenance)
            for j, l in enumerate(labels)]
    return GradedPresentation(tuple(gens), (), g, "maximal")


def degree_of(m: Monomial, P: GradedPresentation) -> GroupElement:
    if not P.is_graded:
        raise GradingUnavailable("presentation is ungraded")
    degs = P.degrees()
    out = P.grading.zero()
    for l, e in m.exps:
        if l not in degs:
            raise UnknownLabel(f"no generator {l!r}")
        out = out + degs[l] * e
    return out


def is_homogeneous(P: GradedPresentation) -> bool:
    if not P.is_graded:
        raise GradingUnavailable("presentation is ungraded")
    for rel in P.relations:
        ds = {degree_of(m, P) for m in rel.monomials}
        if len(ds) > 1:
            return False
    return True


def ci_dimension(P: GradedPresentation) -> int:
    return len(P.generators) - len(P.relations)


def substitute_one(P: GradedPresentation, labels: Iterable[str],
                   grading: tuple[FGAbelianGroup, Mapping[str, GroupElement]] | None = None,
                   status: str = "full") -> GradedPresentation:
    """Set the listed generators to 1 and drop them.

    Without a replacement ``grading`` the result is ungraded.
    """
    labels = set(labels)
    known = set(P.labels)
    for l in labels:
        if l not in known:
            raise UnknownLabel(f"cannot remove unknown generator {l!r}")
    if not labels:
        return P
    rels = tuple(r.substitute_one(labels) for r in P.relations)
    keep = [g for g in P.generators if g.label not in labels]
    if grading is None:
        gens = tuple(Generator(g.label, None, g.provenance) for g in keep)
        return GradedPresentation(gens, rels, None, "ungraded", P.notes)
    group, degs = grading
    gens = tuple(Generator(g.label, degs[g.label], g.provenance) for g in keep)
    return GradedPresentation(gens, rels, group, status, P.notes)


def relation_lattice_rows(P: GradedPresentation) -> list[list[int]]:
    """Exponent-vector differences of the monomials within each relation."""
    idx = {l: i for i, l in enumerate(P.labels)}
    n = len(idx)
    rows = []
    for rel in P.relations:
        vecs = []
        for m in rel.monomials:
            v = [0] * n
            for l, e in m.exps:
                v[idx[l]] = e
            vecs.append(v)
        for v in vecs[1:]:
            rows.append([a - b for a, b in zip(v, vecs[0])])
    return rows


def saturation_grading(P: GradedPresentation, character_rows: Sequence[Mapping[str, int]] = (),
                       smooth: bool = False) -> GradedPresentation:
    """Grade by Z^n / sat(L), L = relation differences plus optional character rows.

    Without character rows this is the finest grading keeping the relations
    homogeneous, which is strictly finer than the class group grading when
    a torus acts; the result is then marked ``maximal``.  With the rows of
    the torus characters it is the class group modulo torsion: ``full`` if
    the caller asserts smoothness (free class group), else
    ``free-part-only``.
    """
    labels = P.labels
    n = len(labels)
    rows = relation_lattice_rows(P)
    for ch in character_rows:
        for l in ch:
            if l not in labels:
                raise UnknownLabel(f"character row mentions unknown generator {l!r}")
        rows.append([int(ch.get(l, 0)) for l in labels])
    rows = [r for r in rows if any(r)]
    sat = saturation(rows, n) if rows else []
    group, degs = cokernel(IntMatrix.from_rows(sat, n) if sat else IntMatrix.zeros(0, n))
    if not character_rows:
        status = "maximal"
    else:
        status = "full" if smooth else "free-part-only"
    gens = tuple(Generator(g.label, d, g.provenance) for g, d in zip(P.generators, degs))
    return GradedPresentation(gens, P.relations, group, status, P.notes)


# -- comparison ----------------------------------------------------------------

def _rref(rows: list[list[Fraction]]) -> list[tuple[Fraction, ...]]:
    rows = [list(r) for r in rows]
    out_r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(out_r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[out_r], rows[piv] = rows[piv], rows[out_r]
        p = rows[out_r][c]
        rows[out_r] = [x / p for x in rows[out_r]]
        for i in range(len(rows)):
            if i != out_r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[out_r])]
        out_r += 1
    return [tuple(r) for r in rows[:out_r]]


def relation_row_space(relations: Sequence[Polynomial], monomials: Sequence[Monomial] | None = None):
    """RREF of the coefficient matrix over the given (or collected) monomial basis."""
    if monomials is None:
        ms = sorted({m for r in relations for m in r.monomials}, key=lambda m: str(m))
    else:
        ms = list(monomials)
    index = {m: i for i, m in enumerate(ms)}
    rows = []
    for r in relations:
        row = [Fraction(0)] * len(ms)
        for m, c in r.terms:
            if m not in index:
                raise ValueError(f"monomial {m} outside the comparison basis")
            row[index[m]] = c
        rows.append(row)
    return ms, _rref(rows)


def row_space_equal(rels_a: Sequence[Polynomial], rels_b: Sequence[Polynomial]) -> bool:
    ms = sorted({m for r in list(rels_a) + list(rels_b) for m in r.monomials}, key=lambda m: str(m))
    return relation_row_space(rels_a, ms)[1] == relation_row_space(rels_b, ms)[1]


def presentations_equal(P: GradedPresentation, Q: GradedPresentation, renaming: Mapping[str, str] | None = None,
                        check_grading: bool = True) -> bool:
    """Same generators (after renaming P's labels), same relation row space, same grading up to iso."""
    ren = dict(renaming or {})
    plabels = [ren.get(l, l) for l in P.labels]
    if sorted(plabels) != sorted(Q.labels):
        return False
    if not row_space_equal([r.rename(ren) for r in P.relations], Q.relations):
        return False
    if check_grading and P.is_graded and Q.is_graded:
        qd = Q.degrees()
        pd = P.degrees()
        order = list(P.labels)
        return same_grading([pd[l] for l in order], [qd[ren.get(l, l)] for l in order])
    return True


def find_renaming(P: GradedPresentation, Q: GradedPresentation, check_grading: bool = True) -> dict | None:
    """A bijection of generator labels identifying P with Q, or None.

    Backtracking over label assignments; partial assignments are pruned as
    soon as some fully assigned monomial of P has no counterpart in Q.
    """
    if len(P.labels) != len(Q.labels) or len(P.relations) != len(Q.relations):
        return None
    qmons = {m for r in Q.relations for m in r.monomials}
    pmons = sorted({m for r in P.relations for m in r.monomials}, key=str)

    def signature(pres, label):
        sig = []
        for r in pres.relations:
            for m in r.monomials:
                e = m.as_dict().get(label)
                if e:
                    sig.append((e, len(m.exps), sum(m.as_dict().values())))
        return tuple(sorted(sig))

    psig = {l: signature(P, l) for l in P.labels}
    qsig = {l: signature(Q, l) for l in Q.labels}
    plabels = sorted(P.labels, key=lambda l: (-len(psig[l]), natural_key(l)))
    assign: dict[str, str] = {}
    used = set()

    def consistent():
        for m in pmons:
            if all(l in assign for l in m.labels):
                if m.rename(assign) not in qmons:
                    return False
        return True

    def rec(k):
        if k == len(plabels):
            return presentations_equal(P, Q, assign, check_grading)
        l = plabels[k]
        for q in sorted(Q.labels, key=natural_key):
            if q in used or qsig[q] != psig[l]:
                continue
            assign[l] = q
            used.add(q)
            if consistent() and rec(k + 1):
                return True
            del assign[l]
            used.discard(q)
        return False

    return dict(assign) if rec(0) else None


# -- serialization ---------------------------------------------------------------

def to_json(P: GradedPresentation) -> dict:
    return {
        "grading_status": P.grading_status,
        "grading": P.grading.to_json() if P.grading is not None else None,
        "generators": [{"label": g.label, "provenance": g.provenance,
                        "degree": g.degree.to_json() if g.degree is not None else None}
                       for g in P.generators],
        "relations": [str(r) for r in P.relations],
        "notes": list(P.notes),
    }


def from_json(doc: Mapping) -> GradedPresentation:
    gr = doc.get("grading")
    group = FGAbelianGroup(gr["free_rank"], tuple(gr["torsion"])) if gr else None
    gens = []
    for g in doc["generators"]:
        d = g.get("degree")
        deg = group.element(tuple(d["free"]), tuple(d["torsion"])) if (d is not None and group) else None
        gens.append(Generator(g["label"], deg, g["provenance"]))
    rels = tuple(parse_polynomial(s) for s in doc["relations"])
    return GradedPresentation(tuple(gens), rels, group, doc["grading_status"], tuple(doc.get("notes", ())))


def ideal_listing(P: GradedPresentation) -> str:
    """Plain text for computer algebra systems: variables, degrees, relations."""
    lines = ["# variables", " ".join(P.labels), "# grading"]
    lines.append(str(P.grading) if P.grading is not None else "ungraded")
    lines.append(f"# status {P.grading_status}")
    lines.append("# degrees (free part, then torsion residues)")
    for g in P.generators:
        lines.append(f"{g.label} {' '.join(map(str, g.degree.as_tuple())) if g.degree is not None else '-'}")
    lines.append("# relations")
    lines += [str(r) for r in P.relations]
    return "\n".join(lines) + "\n"
