"""Acceptance criteria, one test per criterion, each at its stated budget.

Every test records a single pass/fail line in ``conftest.ACCEPTANCE_LINES``;
the lines are printed in a dedicated section at the end of the pytest run.
"""

from __future__ import annotations

import dataclasses
import json
import random
import subprocess
import sys
import time

import conftest
from generators import (
    random_complex,
    random_connected_complex,
    random_equivariance_instance,
    random_valid_cover,
)
from oracles import betti_snf
from nervecert import certify as certify_mod
from nervecert.certify import (
    MULTIPLICITY_BOUND,
    NERVE_HOMOLOGY_ZERO,
    certify_problem,
    problem_from_corpus,
    vanishing_entries,
)
from nervecert.corpus import corpus, genus2_halves
from nervecert.cover import is_convex, multiplicity, nerve, subdivide_cover
from nervecert.covering import (
    build_regular_cover,
    lift_cover,
    lifted_nerve_map,
    nerve_stabilizers,
    projection_nerve_map,
    verify_orbit_bijection,
)
from nervecert.homology import betti_numbers, boundary_of, push_forward_chain
from nervecert.nerve_map import nerve_map_report
from nervecert.simplicial import build_complex

OK_CODES = {0}


class Criterion:
    """Collects named checks and records one summary line."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failures = []
        self.start = time.perf_counter()

    def check(self, cond, what):
        if not cond:
            self.failures.append(what)

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.check(elapsed < self.budget, f"runtime {elapsed:.2f}s exceeds {self.budget}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] {self.number}. {self.title} ({elapsed:.2f}s / {self.budget}s)"
        if self.failures:
            line += ": " + "; ".join(self.failures[:3])
        conftest.ACCEPTANCE_LINES[self.number] = line
        print(line)
        assert not self.failures, line


def _cli(*args):
    res = subprocess.run(
        [sys.executable, "-m", "nervecert", *args], capture_output=True, text=True
    )
    return res.returncode, res.stdout


def _boundary(chain):
    out = {}
    for s, x in chain.items():
        for f, sign in boundary_of(s).items():
            out[f] = out.get(f, 0) + sign * x
    return {f: x for f, x in out.items() if x}


def _is_chain_map(f):
    for s in f.source.simplices():
        if _boundary(push_forward_chain(f, {s: 1})) != push_forward_chain(f, _boundary({s: 1})):
            return False
    return True


def test_criterion_1_example2():
    c = Criterion(1, "example2: nerve = Δ³, Betti (1,0,0,0), non-convex, multiplicity 4", 5)
    code, out = _cli("--corpus", "example2")
    d = json.loads(out)
    nerve_ = d["nerve"]
    c.check(code in OK_CODES, f"exit code {code}")
    c.check(nerve_["f_vector"] == [4, 6, 4, 1], f"nerve f-vector {nerve_['f_vector']}")
    c.check(len(nerve_["maximal_simplices"]) == 1 and len(nerve_["maximal_simplices"][0]) == 4,
            "nerve is not a single 3-simplex")
    c.check(d["nerve_betti"] == [1, 0, 0, 0], f"nerve Betti {d['nerve_betti']}")
    c.check(d["convexity"]["convex"] is False, "cover reported convex")
    w = d["convexity"]["witness"]
    c.check(w is not None and w["components"] == 2, f"witness {w}")
    c.check(d["multiplicity"] == 4, f"multiplicity {d['multiplicity']}")
    deg2 = [e for e in d["vanishing"] if e["degree"] == 2]
    c.check(not deg2, f"degree-2 entries {deg2}")
    c.finish()


def test_criterion_2_example1():
    c = Criterion(2, "example1: nerve Betti (1,2,1), octahedron on D1,D2,U1..U4, convex", 10)
    code, out = _cli("--corpus", "example1")
    d = json.loads(out)
    c.check(code in (0, 3), f"exit code {code}")
    c.check(d["nerve_betti"] == [1, 2, 1], f"nerve Betti {d['nerve_betti']}")
    N = build_complex([tuple(s) for s in d["nerve"]["maximal_simplices"]])
    ring = ["U1", "U2", "U3", "U4"]
    octa = [(dd, ring[i], ring[(i + 1) % 4]) for dd in ("D1", "D2") for i in range(4)]
    c.check(all(N.has_simplex(t) for t in octa), "octahedron triangles missing")
    # the induced subcomplex on the six vertices is exactly the octahedron boundary
    six = set(ring) | {"D1", "D2"}
    induced = [s for s in N.simplices() if set(s) <= six]
    octahedron = build_complex(octa)
    c.check(set(induced) == set(octahedron.simplices()), "induced subcomplex is not the octahedron")
    c.check(betti_numbers(octahedron) == [1, 0, 1], "octahedron is not a 2-sphere")
    c.check(d["convexity"]["convex"] is True, "cover reported non-convex")
    c.finish()


def test_criterion_3_example1_nerve_map():
    c = Criterion(3, "example1: nerve map has rank 1 on H_2 with both tie-breaks", 30)
    p = problem_from_corpus("example1")
    ranks = {}
    for tb in ("least", "greatest"):
        r = certify_problem(p, tie_break=tb)
        ranks[tb] = r.nerve_map["ranks"][2]
    c.check(ranks == {"least": 1, "greatest": 1}, f"ranks {ranks}")
    c.finish()


def test_criterion_4_vanishing_certificates():
    c = Criterion(4, "torus_annuli and sphere_two_discs: unconditional degree-2 NerveHomologyZero", 10)
    for name in ("torus_annuli", "sphere_two_discs"):
        t0 = time.perf_counter()
        code, out = _cli("--corpus", name)
        elapsed = time.perf_counter() - t0
        d = json.loads(out)
        hits = [
            e for e in d["vanishing"]
            if e["degree"] == 2 and e["rule"] == NERVE_HOMOLOGY_ZERO and not e["conditional"]
        ]
        c.check(elapsed < 5, f"{name}: runtime {elapsed:.2f}s exceeds 5s")
        c.check(code == 0, f"{name}: exit code {code}")
        c.check(len(hits) == 1 and "‖α‖₁ = 0" in hits[0]["conclusion"], f"{name}: entries {d['vanishing']}")
        # the certificate concerns a nonzero class, so H_2 of the space must be nonzero
        c.check(betti_numbers(corpus(name).space)[2] == 1, f"{name}: H_2 has rank != 1")
    c.finish()


def test_criterion_5_homology_oracle():
    c = Criterion(5, "200 random complexes (<= 7 vertices): Betti numbers equal the SNF oracle", 60)
    rng = random.Random(20261016)
    for i in range(200):
        facets = random_complex(rng, max_vertices=7)
        K = build_complex(facets)
        ours, oracle = betti_numbers(K), betti_snf(facets)
        c.check(ours == oracle, f"complex {i} {facets}: {ours} != {oracle}")
    c.finish()


def test_criterion_6_7_equivariance_and_structure():
    c6 = Criterion(6, ">= 100 regular covers (|G| in 2,3,4,6): orbit bijection, fibres, equivariance, χ, stabilizers", 120)
    failures7 = []
    rng = random.Random(6)
    orders = set()
    n_instances = 120
    for i in range(n_instances):
        X, U, G, labels = random_equivariance_instance(rng)
        orders.add(G.order)
        c6.check(G.order in (2, 3, 4, 6), f"group order {G.order}")
        C = build_regular_cover(X, G, labels)
        inv = C.invariant_failures()
        c6.check(not inv, f"instance {i}: {inv}")
        L = lift_cover(C, U)
        N = nerve(U)
        projection_nerve_map(L, N)
        for n in range(N.complex.dimension + 1):
            res = verify_orbit_bijection(L, N, n)
            c6.check(res.holds, f"instance {i}: orbit bijection fails in degree {n}: {res.witness}")
        st = nerve_stabilizers(L)
        c6.check(st.fixes_vertices and st.ok, f"instance {i}: stabilizers {st.failures}")

        # criterion 7 on the base cover and the lifted cover
        for label, cover in (("base", U), ("lift", L.lifted_cover)):
            if nerve(cover).complex.dimension + 1 != multiplicity(cover):
                failures7.append(f"instance {i} {label}: dim + 1 != multiplicity")
            _, sd_cover = subdivide_cover(cover)
            if nerve(sd_cover).complex != nerve(cover).complex:
                failures7.append(f"instance {i} {label}: nerve changes under subdivision")
        nm = nerve_map_report(X, U, tie_break=rng.choice(["least", "greatest"]), method="auto")
        if not _is_chain_map(nm.nerve_map):
            failures7.append(f"instance {i}: nerve map is not a chain map")
        lift = lifted_nerve_map(L, nm.nerve_map) if nm.method == "star" else None
        if lift is not None and not _is_chain_map(lift):
            failures7.append(f"instance {i}: lifted nerve map is not a chain map")
    c6.check(orders == {2, 3, 4, 6}, f"orders covered {sorted(orders)}")
    c6.check(n_instances >= 100, "fewer than 100 instances")
    c7 = Criterion(7, "structural identities: dim + 1 = multiplicity, nerve invariant under sd, ∂ν# = ν#∂", 120)
    c7.start = c6.start
    for f in failures7:
        c7.check(False, f)
    try:
        c6.finish()
    finally:
        c7.finish()


def test_criterion_8_soundness_gates(monkeypatch):
    c = Criterion(8, "soundness gates: Unknown verdict makes NHZ conditional; non-convex covers get no NHZ", 5)

    # natural Unknown verdicts
    r = certify_problem(problem_from_corpus(genus2_halves()), compute_nerve_map=False)
    nhz = r.entries(NERVE_HOMOLOGY_ZERO)
    c.check(nhz and all(e.conditional for e in nhz), "genus-2 halves: unconditional NHZ entry")

    # forced Unknown on covers that would otherwise certify
    real = certify_mod.amenability_verdict

    def one_unknown(U, attestations=(), **kw):
        certs = real(U, attestations, **kw)
        certs[0] = dataclasses.replace(certs[0], verdict="Unknown", reason=None)
        return certs

    monkeypatch.setattr(certify_mod, "amenability_verdict", one_unknown)
    for name in ("torus_annuli", "sphere_two_discs", "circle_stars", "example1"):
        r = certify_problem(problem_from_corpus(name), compute_nerve_map=False)
        nhz = r.entries(NERVE_HOMOLOGY_ZERO)
        c.check(nhz, f"{name}: no NHZ entry to test")
        c.check(all(e.conditional for e in nhz), f"{name}: unconditional NHZ with an Unknown verdict")
    monkeypatch.undo()

    # rule engine directly, every Unknown position
    for pos in range(4):
        verdicts = ["CertifiedAmenable"] * 4
        verdicts[pos] = "Unknown"
        es = vanishing_entries(True, True, 4, [1, 0, 0, 0, 0], verdicts, range(6))
        c.check(all(e.conditional for e in es), f"engine: Unknown at {pos} left an entry unconditional")

    # non-convex covers: example2 and random ones, every degree below multiplicity
    r = certify_problem(problem_from_corpus("example2"), compute_nerve_map=False)
    c.check(not r.convex, "example2 reported convex")
    bad = [e for e in r.vanishing if e.rule == NERVE_HOMOLOGY_ZERO and e.degree < r.multiplicity]
    c.check(not bad, f"example2: NHZ entries {bad}")
    c.check(r.entries(MULTIPLICITY_BOUND, 4), "example2: multiplicity entry missing")
    rng = random.Random(8)
    tested = 0
    while tested < 40:
        X = random_connected_complex(rng)
        U = random_valid_cover(rng, X, tries=30, convex=False, min_elements=2)
        if U is None:
            continue
        tested += 1
        mult = multiplicity(U)
        betti = betti_numbers(nerve(U).complex)
        es = vanishing_entries(True, is_convex(U).convex, mult, betti,
                               ["CertifiedAmenable"] * len(U), range(mult))
        c.check(not [e for e in es if e.rule == NERVE_HOMOLOGY_ZERO], f"random non-convex cover {X.maximal_simplices()}")
    c.finish()
