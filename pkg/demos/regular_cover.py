"""Lift a cover to a finite regular covering and compare the two nerves.

A labelling of the edges of a connected complex by elements of a finite
group G defines a regular covering.  Each cover element lifts to the
components of its preimage, and G permutes those components.  For a
convex cover the orbits of lifted nerve simplices correspond one to one
with simplices of the original nerve.

Run with ``python3 demos/regular_cover.py [--seed N] [--group S3]``.
"""

from __future__ import annotations

import argparse
import random

from nervecert.corpus import corpus, torus_grid
from nervecert.cover import is_convex, nerve, star_cover_from_labels, validate_cover
from nervecert.covering import (
    build_regular_cover,
    lift_cover,
    named_group,
    nerve_stabilizers,
    random_edge_labeling,
    verify_orbit_bijection,
)
from nervecert.errors import CoverError
from nervecert.homology import betti_numbers


def show(title, X, U, G, labels):
    print(f"== {title}")
    C = build_regular_cover(X, G, labels)
    print(f"base f-vector {X.f_vector()}, chi {X.euler_characteristic()}")
    print(f"total f-vector {C.total.f_vector()}, chi {C.total.euler_characteristic()}, |G| = {G.order}")
    bad = C.invariant_failures()
    print("covering invariants hold" if not bad else f"covering invariants fail: {bad}")
    L = lift_cover(C, U)
    N = nerve(U)
    print(f"base nerve f-vector {N.complex.f_vector()}, Betti {betti_numbers(N.complex)}")
    up = L.nerve_up.complex
    print(f"lifted nerve f-vector {up.f_vector()}, Betti {betti_numbers(up)}")
    for name, comps in L.lifted_elements.items():
        print(f"  {name} lifts to {len(comps)} component(s)")
    convex = is_convex(U).convex
    for n in range(N.complex.dimension + 1):
        res = verify_orbit_bijection(L, N, n)
        state = "bijection" if res.holds else f"fails ({res.witness[0]})"
        print(f"  degree {n}: {res.n_orbits} orbits over {res.n_base} base simplices, {state}")
    st = nerve_stabilizers(L)
    sizes = sorted({len(h) for h in st.stabilizers.values()})
    print(f"stabilizer orders {sizes}, checks {'pass' if st.ok else st.failures}")
    print(f"cover convex: {convex}")
    print()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--group", default="S3", help="Z2, Z3, Z4, Z6, S3 or Z2xZ2")
    args = ap.parse_args(argv)

    for name in ("circle_stars", "torus_annuli"):
        inst = corpus(name)
        U = validate_cover(inst.space, inst.elements)
        show(name, inst.space, U, inst.group, inst.labeling)

    rng = random.Random(args.seed)
    G = named_group(args.group)
    X = torus_grid(4, 4)
    while True:
        labels = {v: f"E{rng.randrange(3)}" for v in X.vertices}
        try:
            U = validate_cover(X, star_cover_from_labels(X, labels))
        except CoverError:
            continue
        if len(U) >= 2:
            break
    show(f"4x4 torus, random star cover and labelling (seed {args.seed}), group {G.name}", X, U, G, random_edge_labeling(X, G, rng))


if __name__ == "__main__":
    main()
