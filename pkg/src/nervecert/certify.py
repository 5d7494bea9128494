"""The certification pipeline and the rule engine for vanishing conclusions.

Rules, for a degree ``k`` in the requested range:

* ``NerveHomologyZero``: the cover is valid and convex and ``H_k`` of the
  nerve vanishes.  Conclusion: both comparison maps vanish in degree ``k``
  and every real degree-``k`` class has zero l1-seminorm.
* ``MultiplicityBound``: the cover is valid and ``k >= multiplicity``.

Both conclusions also need amenable elements; an entry is ``conditional``
when some element has verdict ``Unknown``.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .corpus import CorpusInstance, corpus
from .cover import Cover, cover_violations, is_convex, multiplicity, nerve
from .covering import (
    EdgeLabeling,
    FiniteGroupTable,
    build_regular_cover,
    lift_cover,
    lifted_nerve_map,
    named_group,
    nerve_stabilizers,
    projection_nerve_map,
    verify_orbit_bijection,
)
from .errors import (
    Disconnected,
    GroupTableError,
    InternalCheckFailure,
    NotASimplex,
    RelatorNotKilled,
    UnknownVertex,
    ValidationError,
)
from .homology import betti_numbers
from .io import InputDocument
from .nerve_map import DEFAULT_MAX_ROUNDS, nerve_map_report
from .pi1 import abelianized_rank, amenability_verdict, edge_path_presentation, simplify_presentation
from .simplicial import Subcomplex, connected_components, is_connected, subcomplex

__all__ = [
    "Problem",
    "VanishingEntry",
    "CertificateReport",
    "vanishing_entries",
    "problem_from_input",
    "problem_from_corpus",
    "certify_problem",
    "exit_code",
    "self_test",
    "SelfTestResult",
]

NERVE_HOMOLOGY_ZERO = "NerveHomologyZero"
MULTIPLICITY_BOUND = "MultiplicityBound"
_PROVISO = " (holds provided all elements are amenable)"


@dataclass
class Problem:
    """Everything the pipeline needs, independent of where it came from."""

    space: object
    cover: dict  # name -> list of simplices or Subcomplex
    attestations: tuple = ()
    group: FiniteGroupTable | None = None
    labeling: EdgeLabeling | None = None
    options: dict = field(default_factory=dict)
    digest: str = ""
    source: str | None = None


def _parse_group(group_spec):
    if isinstance(group_spec, str):
        return named_group(group_spec)
    table = group_spec["table"]
    elements = group_spec.get("elements") or [str(i) for i in range(len(table))]
    return FiniteGroupTable(elements, table, group_spec.get("name"))


def problem_from_input(doc: InputDocument) -> Problem:
    """Turn a parsed input document into a :class:`Problem`.

    Group-table and labeling errors become :class:`ValidationError`.
    """
    group = labeling = None
    if doc.regular_cover is not None:
        try:
            group = _parse_group(doc.regular_cover["group"])
            labeling = EdgeLabeling.from_triples(doc.space, group, doc.regular_cover.get("edge_labels", []))
        except (GroupTableError, RelatorNotKilled, NotASimplex, UnknownVertex) as exc:
            raise ValidationError([f"regular_cover: {exc}"]) from None
    return Problem(doc.space, dict(doc.cover), doc.attestations, group, labeling, dict(doc.options), doc.digest, doc.source)


def problem_from_corpus(inst: CorpusInstance | str) -> Problem:
    if isinstance(inst, str):
        inst = corpus(inst)
    doc = inst.to_document()
    digest = hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
    return Problem(
        inst.space, dict(inst.elements), tuple(inst.attestations), inst.group, inst.labeling,
        dict(inst.options), digest, f"corpus:{inst.name}",
    )


@dataclass
class VanishingEntry:
    degree: int
    rule: str
    conclusion: str
    conditional: bool

    def to_dict(self):
        return {"degree": self.degree, "rule": self.rule, "conclusion": self.conclusion, "conditional": self.conditional}


def _nhz_conclusion(k):
    return (
        f"comparison maps c_X and c^{{ℓ¹}}_X in degree {k} are zero; "
        f"‖α‖₁ = 0 for all α ∈ H_{k}(X;ℝ)"
    )


def _mb_conclusion(k):
    return f"comparison map vanishes in degree {k} (c_X and c^{{ℓ¹}}_X)"


def vanishing_entries(cover_valid, convex, mult, nerve_betti, verdicts, degrees):
    """The rule engine.  ``verdicts`` is a list of verdict strings."""
    if not cover_valid:
        return []
    conditional = any(v == "Unknown" for v in verdicts)
    suffix = _PROVISO if conditional else ""
    out = []
    for k in sorted(set(degrees)):
        betti_k = nerve_betti[k] if k < len(nerve_betti) else 0
        if convex and betti_k == 0:
            out.append(VanishingEntry(k, NERVE_HOMOLOGY_ZERO, _nhz_conclusion(k) + suffix, conditional))
        if k >= mult:
            out.append(VanishingEntry(k, MULTIPLICITY_BOUND, _mb_conclusion(k) + suffix, conditional))
    return out


@dataclass
class CertificateReport:
    source: str | None
    input_digest: str
    space: dict
    cover_valid: bool
    violations: list
    multiplicity: int | None = None
    nerve: dict | None = None
    nerve_betti: list | None = None
    convexity: dict | None = None
    amenability: list | None = None
    nerve_map: dict | None = None
    equivariance: dict | None = None
    vanishing: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    tool_version: str = __version__

    @property
    def convex(self):
        return bool(self.convexity and self.convexity["convex"])

    def entries(self, rule=None, degree=None):
        return [
            e for e in self.vanishing
            if (rule is None or e.rule == rule) and (degree is None or e.degree == degree)
        ]

    def has_unconditional_entry(self):
        return any(not e.conditional for e in self.vanishing)

    def to_dict(self):
        return {
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "source": self.source,
            "space": self.space,
            "cover_valid": self.cover_valid,
            "violations": list(self.violations),
            "multiplicity": self.multiplicity,
            "nerve": self.nerve,
            "nerve_betti": self.nerve_betti,
            "convexity": self.convexity,
            "amenability": self.amenability,
            "nerve_map": self.nerve_map,
            "equivariance": self.equivariance,
            "vanishing": [e.to_dict() for e in self.vanishing],
            "checks": list(self.checks),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self):
        lines = [f"certificate for {self.source or '<input>'}  (nervecert {self.tool_version})"]
        lines.append(f"  input sha256    {self.input_digest}")
        sp = self.space
        lines.append(f"  space           dim {sp['dimension']}, f-vector {sp['f_vector']}, chi {sp['euler_characteristic']}")
        lines.append(f"  cover valid     {'yes' if self.cover_valid else 'no'}")
        for v in self.violations:
            lines.append(f"    violation     {v}")
        if not self.cover_valid:
            return "\n".join(lines) + "\n"
        lines.append(f"  multiplicity    {self.multiplicity}")
        lines.append(f"  nerve           dim {self.nerve['dimension']}, f-vector {self.nerve['f_vector']}")
        lines.append(f"  nerve Betti     {tuple(self.nerve_betti)}")
        cv = self.convexity
        if cv["convex"]:
            lines.append("  convex          yes")
        else:
            w = cv["witness"]
            lines.append(f"  convex          no ({' ∩ '.join(map(str, w['elements']))} has {w['components']} components)")
        lines.append("  amenability")
        width = max(len(str(a["element"])) for a in self.amenability)
        for a in self.amenability:
            reason = f" ({a['reason']})" if a["reason"] else ""
            lines.append(f"    {str(a['element']):<{width}}  {a['verdict']}{reason}, pi1 rank {a['presentation_rank']}")
        if self.nerve_map is not None:
            nm = self.nerve_map
            lines.append(f"  nerve map       {nm['method']} map, tie-break {nm['tie_break']}, H_n ranks {nm['ranks']}")
        if self.equivariance is not None:
            eq = self.equivariance
            holds = all(o["holds"] for o in eq["orbit_bijection"])
            lines.append(
                f"  regular cover   {eq['group']} (order {eq['order']}), total f-vector {eq['total_f_vector']}, "
                f"lifted nerve f-vector {eq['nerve_up_f_vector']}, orbit bijection {'holds' if holds else 'fails'}"
            )
        lines.append("  vanishing")
        if not self.vanishing:
            lines.append("    (none)")
        for e in self.vanishing:
            flag = "conditional" if e.conditional else "unconditional"
            lines.append(f"    degree {e.degree:<3} {e.rule:<18} {flag:<13} {e.conclusion}")
        return "\n".join(lines) + "\n"


def exit_code(report: CertificateReport) -> int:
    if not report.cover_valid:
        return 1
    return 0 if report.has_unconditional_entry() else 3


def _space_summary(X):
    return {
        "dimension": X.dimension,
        "f_vector": X.f_vector(),
        "euler_characteristic": X.euler_characteristic(),
    }


def _name(n):
    return list(n) if isinstance(n, tuple) else n


def _equivariance_section(problem, U, N, convex, nerve_map_obj, checks):
    X, G = problem.space, problem.group
    if not is_connected(X):
        raise ValidationError(["regular_cover: the space must be connected"])
    try:
        C = build_regular_cover(X, G, problem.labeling)
    except Disconnected as exc:
        raise ValidationError([f"regular_cover: {exc}"]) from None
    bad = C.invariant_failures()
    if bad:
        raise InternalCheckFailure("covering invariants fail: " + "; ".join(bad))
    checks.append("covering invariants")
    L = lift_cover(C, U)
    if not all(L.surjective.values()):
        raise InternalCheckFailure("a lifted component does not map onto its element")
    projection_nerve_map(L, N)
    checks.append("projection nerve map simplicial and invariant")
    Nu = L.nerve_up.complex
    if Nu.dimension != N.complex.dimension:
        raise InternalCheckFailure("lifted nerve and nerve differ in dimension")
    orbit = []
    for n in range(N.complex.dimension + 1):
        ob = verify_orbit_bijection(L, N, n)
        if convex and not ob.holds:
            raise InternalCheckFailure(f"orbit bijection fails in degree {n} for a convex cover: {ob.witness!r}")
        w = None
        if ob.witness is not None:
            kind, *rest = ob.witness
            w = {"kind": kind, "simplices": [[_name(x) for x in s] for s in rest]}
        orbit.append({"degree": n, "holds": ob.holds, "orbits": ob.n_orbits, "base_simplices": ob.n_base, "witness": w})
    st = nerve_stabilizers(L)
    if not st.ok:
        raise InternalCheckFailure(f"stabilizer checks fail: {st.failures[:3]!r}")
    checks.append("stabilizer checks")
    compatible = None
    if nerve_map_obj is not None and nerve_map_obj.source is X:
        lifted_nerve_map(L, nerve_map_obj)
        compatible = True
        checks.append("lifted nerve map compatible with projection")
    return {
        "group": G.name,
        "order": G.order,
        "total_f_vector": C.total.f_vector(),
        "total_components": len(connected_components(C.total)),
        "lifted_elements": {str(n): len(L.lifted_elements[n]) for n in U.names},
        "nerve_up_f_vector": Nu.f_vector(),
        "orbit_bijection": orbit,
        "vertex_stabilizer_orders": [
            {"element": _name(v[0]), "order": len(st.stabilizers[v])} for v in Nu.simplices(0)
        ],
        "lifted_nerve_map_compatible": compatible,
    }


def certify_problem(problem: Problem, *, compute_nerve_map=None, max_subdiv=None, tie_break=None,
                    check_equivariance=None) -> CertificateReport:
    """Run the full pipeline.  Keyword arguments override ``problem.options``."""
    opts = problem.options
    X = problem.space
    report = CertificateReport(problem.source, problem.digest, _space_summary(X), True, [])

    elements = {}
    violations = []
    for name, value in problem.cover.items():
        if isinstance(value, Subcomplex):
            elements[name] = value
            continue
        try:
            elements[name] = subcomplex(X, value)
        except NotASimplex as exc:
            violations.append(f"NotASubcomplex: element {name!r}: {exc}")
    violations += [str(v) for v in cover_violations(X, elements)]
    if violations:
        report.cover_valid = False
        report.violations = violations
        return report
    U = Cover(X, elements)
    checks = report.checks

    mult = multiplicity(U)
    N = nerve(U)
    if N.complex.dimension + 1 != mult:
        raise InternalCheckFailure(f"dim(nerve) + 1 = {N.complex.dimension + 1} but multiplicity is {mult}")
    checks.append("dim(nerve) + 1 = multiplicity")
    betti = betti_numbers(N.complex)
    top = max(N.complex.dimension, X.dimension)
    betti = betti + [0] * (top + 1 - len(betti))
    cv = is_convex(U)

    verdicts = amenability_verdict(U, problem.attestations)
    for c in verdicts:
        if c.reason == "TrivialGroup" and c.presentation_rank != 0:
            raise InternalCheckFailure(f"{c.element_name!r}: trivial verdict with generators")
        if c.reason == "CyclicGroup" and c.presentation_rank > 1:
            raise InternalCheckFailure(f"{c.element_name!r}: cyclic verdict with {c.presentation_rank} generators")
    checks.append("verdicts match presentation ranks")
    if is_connected(X):
        PX = simplify_presentation(edge_path_presentation(X))
        b1 = betti_numbers(X)[1] if X.dimension >= 1 else 0
        if abelianized_rank(PX) != b1:
            raise InternalCheckFailure("abelianised pi_1 rank differs from the first Betti number")
        checks.append("abelianised pi_1 rank = b_1(X)")

    report.multiplicity = mult
    report.nerve = {
        "vertices": [_name(v) for v in N.complex.vertices],
        "dimension": N.complex.dimension,
        "f_vector": N.complex.f_vector(),
        "maximal_simplices": [[_name(v) for v in s] for s in N.complex.maximal_simplices()],
    }
    report.nerve_betti = betti
    report.convexity = {
        "convex": cv.convex,
        "witness": None if cv.convex else {
            "elements": [_name(n) for n in cv.witness_names],
            "components": cv.witness_component_count,
        },
    }
    report.amenability = [
        {
            "element": _name(c.element_name),
            "verdict": c.verdict,
            "reason": c.reason,
            "presentation_rank": c.presentation_rank,
            "generator_words": [list(w) for w in c.generator_words],
        }
        for c in verdicts
    ]

    do_map = opts.get("compute_nerve_map", True) if compute_nerve_map is None else compute_nerve_map
    rounds = opts.get("max_subdiv", DEFAULT_MAX_ROUNDS) if max_subdiv is None else max_subdiv
    tb = tie_break or opts.get("tie_break", "least")
    nu = None
    if do_map:
        nm = nerve_map_report(X, U, rounds, tb, opts.get("nerve_map_method", "auto"))
        if not nm.simplicial:
            raise InternalCheckFailure("nerve map is not simplicial")
        nu = nm.nerve_map
        report.nerve_map = {
            "method": nm.method,
            "rounds": nm.rounds,
            "tie_break": tb,
            "ranks": [nm.ranks[n] for n in sorted(nm.ranks)],
        }
        checks.append("nerve map simplicial")

    do_eq = opts.get("check_equivariance", True) if check_equivariance is None else check_equivariance
    if problem.group is not None and do_eq:
        report.equivariance = _equivariance_section(problem, U, N, cv.convex, nu, checks)

    degrees = opts.get("degrees")
    if degrees is None:
        degrees = range(max(X.dimension, mult) + 1)
    report.vanishing = vanishing_entries(True, cv.convex, mult, betti, [c.verdict for c in verdicts], degrees)
    return report


# -- self-test ---------------------------------------------------------------

@dataclass
class SelfTestResult:
    name: str
    passed: bool
    detail: str


def _expect(results, name, cond, detail):
    results.append(SelfTestResult(name, bool(cond), detail))


def _selftest_example2():
    out = []
    r = certify_problem(problem_from_corpus("example2"), compute_nerve_map=False)
    _expect(out, "example2: nerve is the full 3-simplex", r.nerve["f_vector"] == [4, 6, 4, 1], str(r.nerve["f_vector"]))
    _expect(out, "example2: nerve Betti (1,0,0,0)", r.nerve_betti == [1, 0, 0, 0], str(r.nerve_betti))
    w = r.convexity["witness"]
    _expect(out, "example2: not convex, two-component witness", not r.convex and w and w["components"] == 2, str(w))
    _expect(out, "example2: multiplicity 4", r.multiplicity == 4, str(r.multiplicity))
    low = [e for e in r.entries(NERVE_HOMOLOGY_ZERO) if e.degree <= 2]
    _expect(out, "example2: no degree <= 2 nerve-homology entry", not low, str([e.degree for e in low]))
    mb = [e.degree for e in r.entries(MULTIPLICITY_BOUND)]
    _expect(out, "example2: multiplicity-bound entries from degree 4", mb and min(mb) == 4, str(mb))
    return out


def _selftest_example1():
    out = []
    p = problem_from_corpus("example1")
    r = certify_problem(p)
    _expect(out, "example1: nerve Betti (1,2,1)", r.nerve_betti == [1, 2, 1], str(r.nerve_betti))
    tris = {tuple(s) for s in r.nerve["maximal_simplices"] if len(s) == 3}
    ring = ["U1", "U2", "U3", "U4"]
    octa = {tuple(sorted((d, ring[i], ring[(i + 1) % 4]))) for d in ("D1", "D2") for i in range(4)}
    _expect(out, "example1: octahedron on D1, D2, U1..U4", octa <= tris, f"{len(octa & tris)}/8 triangles")
    _expect(out, "example1: convex", r.convex, str(r.convexity))
    low = [e.degree for e in r.vanishing if e.degree <= 2]
    _expect(out, "example1: no vanishing entry in degrees <= 2", not low, str(low))
    r2 = certify_problem(p, tie_break="greatest")
    ranks = (r.nerve_map["ranks"][2], r2.nerve_map["ranks"][2])
    _expect(out, "example1: nerve map has rank 1 on H_2 (both tie-breaks)", ranks == (1, 1), str(ranks))
    return out


def _selftest_derived(name, degree):
    out = []
    r = certify_problem(problem_from_corpus(name))
    hits = [e for e in r.entries(NERVE_HOMOLOGY_ZERO, degree) if not e.conditional]
    _expect(out, f"{name}: convex", r.convex, str(r.convexity))
    _expect(out, f"{name}: unconditional degree-{degree} nerve-homology entry", hits, str([e.to_dict() for e in hits]))
    return out


def _selftest_circle():
    out = []
    r = certify_problem(problem_from_corpus("circle_stars"))
    eq = r.equivariance
    _expect(out, "circle_stars: nerve is a 3-cycle", r.nerve["f_vector"] == [3, 3], str(r.nerve["f_vector"]))
    _expect(out, "circle_stars: lifted nerve is a 9-cycle", eq["nerve_up_f_vector"] == [9, 9], str(eq["nerve_up_f_vector"]))
    _expect(out, "circle_stars: orbit bijection in all degrees", all(o["holds"] for o in eq["orbit_bijection"]), "")
    return out


_SELF_TESTS = (
    _selftest_example2,
    _selftest_example1,
    lambda: _selftest_derived("torus_annuli", 2),
    lambda: _selftest_derived("sphere_two_discs", 2),
    _selftest_circle,
)


def self_test(workers: int = 4) -> list[SelfTestResult]:
    """Run the corpus assertions; the groups are independent and run concurrently."""

    def guarded(fn):
        try:
            return fn()
        except Exception as exc:  # report, do not hide
            return [SelfTestResult(getattr(fn, "__name__", "self-test"), False, f"{type(exc).__name__}: {exc}")]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        groups = list(pool.map(guarded, _SELF_TESTS))
    return [r for g in groups for r in g]

