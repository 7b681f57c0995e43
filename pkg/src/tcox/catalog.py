"""Job runner, structural checks and the built-in fixture catalog."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import permutations
from typing import Mapping, Sequence

from .cox_pipeline import ComplexityOneData, canonical_class, moving_cone, run_fan
from .dialects import JobSpec, parse_document
from .errors import InvalidBasis, InvalidBundle, InvalidFan, InvalidGraph, TcoxError
from .intlinalg import FGAbelianGroup, GroupElement
from .klyachko import cotangent_cox, cotangent_data, projectivization_cox, projectivization_data
from .orlik_wagreich import (ContractionSpec, OWArm, OWGraph, arm_closes, contract, resolution_cox,
                             resolution_data)
from .pdiv import P1Point, ValidityReport
from .polyhedra import Cone
from .presentation import (GradedPresentation, Generator, degree_of, find_renaming, is_homogeneous, parse_polynomial,
                           row_space_equal, substitute_one, to_json)


@dataclass
class Report:
    kind: str
    name: str
    ok: bool
    presentation: GradedPresentation | None = None
    canonical_class: GroupElement | None = None
    moving_cone: Cone | None = None
    validity: ValidityReport | None = None
    contracted: GradedPresentation | None = None
    extra: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)
    data: ComplexityOneData | None = field(default=None, repr=False)

    @property
    def class_group(self) -> FGAbelianGroup | None:
        return self.presentation.grading if self.presentation is not None else None


def _grading(P: GradedPresentation):
    return P.grading, P.degrees()


def run(job: JobSpec, check: bool = False) -> Report:
    """Dispatch a parsed job to its pipeline."""
    p = job.payload
    rep = Report(job.kind, job.name, True)
    try:
        if job.kind == "fan":
            try:
                res = run_fan(p.fan, p.basis, p.syzygy_basis)
            except InvalidFan as e:
                from .pdiv import check_fan
                rep.ok = False
                rep.validity = check_fan(p.fan)
                rep.messages.append(str(e))
                return rep
            rep.presentation = res.presentation
            rep.validity = res.validity
            rep.canonical_class = res.canonical_class
            rep.moving_cone = res.moving_cone
            rep.data = res.data
            rep.extra = {
                "relation_matrix": res.class_group.matrix.tolist(),
                "column_labels": list(res.class_group.column_labels),
                "invariant_factors": list(res.class_group.snf.invariant_factors),
                "marked_points": len(res.data.marked_points),
                "padded_points": res.data.padded,
            }
        elif job.kind == "owgraph":
            P = resolution_cox(p.graph)
            rep.presentation = P
            rep.data = resolution_data(p.graph)
            if P.grading_status == "full":
                rep.canonical_class = canonical_class(rep.data, _grading(P), 0)
            if P.grading is not None:
                rep.moving_cone = moving_cone([g.degree for g in P.generators])
            if p.contraction is not None:
                rep.contracted = contract(P, p.contraction)
        elif job.kind == "bundle":
            P = projectivization_cox(p.data, p.smooth)
            rep.presentation = P
            rep.data = projectivization_data(p.data)
            rep.canonical_class = canonical_class(rep.data, _grading(P), 0)
            rep.moving_cone = moving_cone([g.degree for g in P.generators])
            rep.messages += list(P.notes)
        elif job.kind == "cotangent":
            P = cotangent_cox(p.rays, p.smooth)
            rep.presentation = P
            if len(p.rays[0]) == 2:
                rep.data = cotangent_data(p.rays)
                rep.canonical_class = canonical_class(rep.data, _grading(P), 0)
            rep.moving_cone = moving_cone([g.degree for g in P.generators])
        else:
            raise ValueError(f"unknown job kind {job.kind!r}")
    except (InvalidGraph, InvalidBundle, InvalidBasis) as e:
        rep.ok = False
        rep.messages.append(str(e))
        return rep
    if check:
        rep.checks = structural_checks(rep)
        if not all(rep.checks.values()):
            rep.ok = False
            rep.messages.append("structural checks failed: " + ", ".join(k for k, v in rep.checks.items() if not v))
    return rep


def structural_checks(rep: Report) -> dict[str, bool]:
    """Invariants every output must satisfy; names map to pass/fail."""
    out: dict[str, bool] = {}
    P = rep.presentation
    if P is None:
        return out
    if P.is_graded:
        out["homogeneous"] = is_homogeneous(P)
    out["relations_have_three_terms"] = all(len(r.terms) >= 3 for r in P.relations)
    data = rep.data
    if data is not None:
        m = len(data.e_labels)
        n = sum(len(a) for a in data.arms)
        r = data.r
        if r >= 1:
            out["complete_intersection_dimension"] = len(P.generators) - len(P.relations) == m + n - r + 1
        out["relation_count"] = len(P.relations) == max(0, r - 1)
        # each relation is a syzygy of the point representatives
        fs = {tuple(sorted(a)): i for i, a in enumerate(data.arms)}
        ok = True
        for rel in P.relations:
            s = [Fraction(0), Fraction(0)]
            for mono, c in rel.terms:
                i = fs.get(tuple(sorted(mono.exps)))
                if i is None:
                    ok = False
                    break
                b, cc = data.points[i].representative
                s[0] += c * b
                s[1] += c * cc
            ok = ok and s == [0, 0]
        out["syzygies_annihilate_points"] = ok
        if P.grading_status == "full":
            ks = {canonical_class(data, _grading(P), i) for i in range(len(data.points))}
            out["canonical_class_independent"] = len(ks) == 1
            # adjunction for a complete intersection: K = sum deg(relations) - sum deg(generators)
            adj = P.grading.zero()
            for rel in P.relations:
                adj = adj + degree_of(rel.monomials[0], P)
            for g in P.generators:
                adj = adj - g.degree
            out["canonical_class_adjunction"] = ks == {adj}
    if rep.kind in ("bundle", "cotangent"):
        out["multilinear_in_T"] = all(
            sum(e for l, e in mono.exps if l.startswith("T")) == 1 for rel in P.relations for mono in rel.monomials)
    if rep.contracted is not None and rep.contracted.is_graded:
        out["contracted_homogeneous"] = is_homogeneous(rep.contracted)
    return out


# -- report rendering ----------------------------------------------------------

def _cone_json(c: Cone | None):
    if c is None:
        return None
    return {"rays": [list(r) for r in c.rays], "lineality": [list(l) for l in c.lineality]}


def report_json(rep: Report) -> dict:
    doc = {
        "kind": rep.kind,
        "name": rep.name,
        "ok": rep.ok,
        "messages": rep.messages,
    }
    if rep.validity is not None:
        doc["validity"] = rep.validity.to_json()
    if rep.presentation is not None:
        doc["presentation"] = to_json(rep.presentation)
        doc["class_group"] = rep.class_group.to_json() if rep.class_group is not None else None
    if rep.contracted is not None:
        doc["contracted"] = to_json(rep.contracted)
    doc["canonical_class"] = rep.canonical_class.to_json() if rep.canonical_class is not None else None
    doc["moving_cone"] = _cone_json(rep.moving_cone)
    if rep.extra:
        doc["details"] = rep.extra
    if rep.checks:
        doc["checks"] = rep.checks
    return doc


def _pres_text(P: GradedPresentation, title: str) -> list[str]:
    lines = [f"{title}: {len(P.generators)} generators, {len(P.relations)} relations"]
    lines.append(f"  grading: {P.grading if P.grading is not None else 'none'} ({P.grading_status})")
    for g in P.generators:
        lines.append(f"  deg {g.label:<6} = {g.degree if g.degree is not None else '-'}   [{g.provenance}]")
    for r in P.relations:
        lines.append(f"  0 = {r}")
    return lines


def report_text(rep: Report) -> str:
    lines = [f"{rep.kind} job {rep.name or ''}".rstrip() + (": ok" if rep.ok else ": FAILED")]
    if rep.validity is not None:
        v = rep.validity
        lines.append(f"fan valid: {v.valid}, complete: {v.complete}")
    if rep.extra.get("invariant_factors") is not None:
        lines.append("relation matrix columns: " + " ".join(rep.extra["column_labels"]))
        for row in rep.extra["relation_matrix"]:
            lines.append("  [" + " ".join(f"{x:>3}" for x in row) + " ]")
        lines.append("invariant factors: " + " ".join(map(str, rep.extra["invariant_factors"])))
    if rep.presentation is not None:
        lines += _pres_text(rep.presentation, "Cox ring")
    if rep.contracted is not None:
        lines += _pres_text(rep.contracted, "contracted")
    if rep.canonical_class is not None:
        lines.append(f"canonical class: {rep.canonical_class}")
    if rep.moving_cone is not None:
        lines.append(f"moving cone: {rep.moving_cone}")
    for k, v in rep.checks.items():
        lines.append(f"check {k}: {'pass' if v else 'FAIL'}")
    lines += [f"note: {m}" for m in rep.messages]
    return "\n".join(lines) + "\n"


# -- catalog -------------------------------------------------------------------

def load_catalog() -> list[dict]:
    text = resources.files("tcox").joinpath("data/catalog.json").read_text(encoding="utf-8")
    return json.loads(text)["fixtures"]


def table_presentation(labels: Sequence[str], relations: Sequence[str], constants: Mapping) -> GradedPresentation:
    consts = {k: Fraction(v) for k, v in constants.items()}
    gens = tuple(Generator(l, None, "D-vertex") for l in labels)
    return GradedPresentation(gens, tuple(parse_polynomial(r, consts) for r in relations), None, "ungraded")


_STANDARD_REPS = {3: [(1, 0), (0, 1), (-1, -1)], 4: [(1, 0), (0, 1), (-1, -1), (1, -1)]}


def _arm_order(exps: Sequence[tuple[str, int]]):
    """An ordering of one arm's curves consistent with a closed chain, with its b's."""
    for perm in sorted(set(permutations(exps))):
        ls = [0] + [e for _, e in perm] + [0]
        if ls[1] != 1:
            continue
        bs = []
        ok = True
        for j in range(1, len(ls) - 1):
            num = ls[j + 1] + ls[j - 1]
            if num % ls[j]:
                ok = False
                break
            bs.append(num // ls[j])
        if ok and arm_closes(bs):
            return [l for l, _ in perm], tuple(bs)
    return None


def reconstruct_graph(P: GradedPresentation) -> tuple[OWGraph, dict] | None:
    """Read an Orlik-Wagreich graph off a listed resolution ring (two S's, disjoint arms)."""
    used = {l for r in P.relations for m in r.monomials for l in m.labels}
    free = [l for l in P.labels if l not in used]
    if len(free) != 2:
        return None
    fs = []
    for r in P.relations:
        for m in r.monomials:
            if m not in fs:
                fs.append(m)
    seen = set()
    for m in fs:
        if seen & set(m.labels):
            return None
        seen |= set(m.labels)
    reps = _STANDARD_REPS.get(len(fs))
    if reps is None:
        return None
    arms = []
    for m, rep in zip(fs, reps):
        found = _arm_order(m.exps)
        if found is None:
            return None
        arms.append(OWArm(P1Point(*rep), found[1]))
    return OWGraph(tuple(arms)), {"S": free}


def verify_table_row(fx: Mapping) -> list[str]:
    fails = []
    consts = fx.get("constants", {})
    X = table_presentation(fx["ring_generators"], fx["ring"], consts)
    Xt = table_presentation(fx["resolution_generators"], fx["resolution"], consts)
    exc = set(Xt.labels) - set(X.labels)
    C = substitute_one(Xt, exc)
    if sorted(C.labels) != sorted(X.labels) or not row_space_equal(C.relations, X.relations):
        fails.append("contracting the resolution ring does not give the singular ring")
    rec = reconstruct_graph(Xt)
    if fx.get("reconstructible"):
        if rec is None:
            fails.append("arm data could not be reconstructed")
            return fails
        R = resolution_cox(rec[0])
        ren = find_renaming(R, Xt, check_grading=False)
        if ren is None:
            fails.append("rebuilt resolution ring differs from the table")
            return fails
        inv_exc = {l for l, t in ren.items() if t in exc}
        Rc = contract(R, ContractionSpec(frozenset(inv_exc)))
        if find_renaming(Rc, X, check_grading=False) is None:
            fails.append("contracted rebuilt ring differs from the singular ring")
    elif rec is not None:
        fails.append("row marked output-only but its arm data are reconstructible")
    return fails


def _group_tuple(g: FGAbelianGroup):
    return {"free_rank": g.free_rank, "torsion": list(g.torsion_orders)}


def compare_presentation(P: GradedPresentation, exp: Mapping, where: str) -> list[str]:
    fails = []
    consts = {k: Fraction(v) for k, v in exp.get("constants", {}).items()}
    if "generators" in exp and list(P.labels) != list(exp["generators"]):
        fails.append(f"{where}: generators {list(P.labels)} != {exp['generators']}")
    if "num_generators" in exp and len(P.generators) != exp["num_generators"]:
        fails.append(f"{where}: {len(P.generators)} generators, expected {exp['num_generators']}")
    if "relations" in exp:
        want = [parse_polynomial(s, consts) for s in exp["relations"]]
        if len(P.relations) != len(want) or not row_space_equal(P.relations, want):
            fails.append(f"{where}: relations {[str(r) for r in P.relations]} do not span {exp['relations']}")
    if "exponent_patterns" in exp:
        pats = sorted({tuple(sorted(e for _, e in m.exps)) for r in P.relations for m in r.monomials})
        want = sorted(tuple(sorted(p)) for p in exp["exponent_patterns"])
        if pats != want:
            fails.append(f"{where}: exponent patterns {pats} != {want}")
    if "grading_status" in exp and P.grading_status != exp["grading_status"]:
        fails.append(f"{where}: grading status {P.grading_status} != {exp['grading_status']}")
    if "class_group" in exp:
        if P.grading is None or _group_tuple(P.grading) != exp["class_group"]:
            fails.append(f"{where}: class group {P.grading} != {exp['class_group']}")
    if "degrees" in exp and P.grading is not None:
        degs = P.degrees()
        for l, d in exp["degrees"].items():
            if l not in degs or list(degs[l].as_tuple()) != list(d):
                fails.append(f"{where}: degree of {l} is {degs.get(l)}, expected {d}")
    if "degree_classes" in exp and P.grading is not None:
        classes = {}
        for g in P.generators:
            classes.setdefault(g.degree, set()).add(g.label)
        got = sorted(sorted(c) for c in classes.values())
        want = sorted(sorted(c) for c in exp["degree_classes"])
        if got != want:
            fails.append(f"{where}: degree classes {got} != {want}")
    return fails


def verify_fixture(fx: Mapping, catalog: Sequence[Mapping] | None = None) -> list[str]:
    """Failure messages for one fixture (empty list means pass)."""
    kind = fx["kind"]
    try:
        if kind == "table-row":
            return verify_table_row(fx)
        if kind == "cross":
            byname = {f["name"]: f for f in (catalog or load_catalog())}
            reports = []
            for side in ("left", "right"):
                ref = byname[fx[side]]
                rep = run(parse_document(json.loads(json.dumps(ref["input"]))))
                if not rep.ok:
                    return [f"{side} fixture {ref['name']} failed to run: {rep.messages}"]
                part = fx.get(f"{side}_part", "presentation")
                reports.append(getattr(rep, part))
            if find_renaming(reports[0], reports[1], fx.get("check_grading", True)) is None:
                return [f"{fx['left']} and {fx['right']} do not agree up to renaming"]
            return []
        job = parse_document(json.loads(json.dumps(fx["input"])))
        rep = run(job, check=True)
        exp = fx["expected"]
        fails = []
        if rep.ok != exp.get("ok", True):
            fails.append(f"run status {rep.ok}, messages {rep.messages}")
        if not rep.ok:
            return fails
        fails += compare_presentation(rep.presentation, exp, "ring")
        if "contracted" in exp:
            fails += compare_presentation(rep.contracted, exp["contracted"], "contracted")
        for key in ("relation_matrix", "invariant_factors", "marked_points", "padded_points"):
            if key in exp and rep.extra.get(key) != exp[key]:
                fails.append(f"{key}: {rep.extra.get(key)} != {exp[key]}")
        if "canonical_class" in exp:
            got = list(rep.canonical_class.as_tuple()) if rep.canonical_class is not None else None
            if got != exp["canonical_class"]:
                fails.append(f"canonical class {got} != {exp['canonical_class']}")
        if "moving_cone" in exp:
            if _cone_json(rep.moving_cone) != exp["moving_cone"]:
                fails.append(f"moving cone {_cone_json(rep.moving_cone)} != {exp['moving_cone']}")
        if "valid" in exp and rep.validity is not None and rep.validity.valid != exp["valid"]:
            fails.append(f"validity {rep.validity.valid} != {exp['valid']}")
        return fails
    except TcoxError as e:
        return [f"{type(e).__name__}: {e}"]


@dataclass
class FixtureResult:
    name: str
    ok: bool
    failures: list
    seconds: float


def _verify_one(args) -> FixtureResult:
    fx, catalog = args
    t = time.perf_counter()
    try:
        fails = verify_fixture(fx, catalog)
    except Exception as e:  # a crash is a failed fixture, not a failed catalog run
        fails = [f"{type(e).__name__}: {e}"]
    return FixtureResult(fx["name"], not fails, fails, time.perf_counter() - t)


def verify_catalog(fixtures: Sequence[Mapping] | None = None, jobs: int = 1) -> list[FixtureResult]:
    """Recompute every fixture and compare with its stored expectations."""
    fixtures = list(fixtures) if fixtures is not None else load_catalog()
    args = [(fx, fixtures) for fx in fixtures]
    if jobs and jobs > 1:
        try:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                return list(ex.map(_verify_one, args))
        except (OSError, PermissionError):
            pass  # no process support in this environment; fall back to serial
    return [_verify_one(a) for a in args]
