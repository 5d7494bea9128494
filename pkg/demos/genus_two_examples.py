"""Walk through the two genus-2 covers of the corpus.

The first cover is convex; its nerve is a circle, a 2-sphere and another
circle glued at a point.  The second has a single 3-simplex as nerve, but
two of its elements meet in two pieces, so the nerve carries no
information about degree 2.

Run with ``python3 demos/genus_two_examples.py``.
"""

from __future__ import annotations

import argparse

from nervecert.certify import certify_problem, problem_from_corpus
from nervecert.cover import is_convex, nerve, validate_cover
from nervecert.corpus import corpus
from nervecert.homology import betti_numbers


def describe(name, tie_break):
    inst = corpus(name)
    X = inst.space
    U = validate_cover(X, inst.elements)
    print(f"== {name}: {inst.description}")
    print(f"space f-vector {X.f_vector()}, Betti {betti_numbers(X)}")
    for elem in U.names:
        sub = U[elem].as_complex()
        print(f"  {elem:<3} {len(sub.vertices):>5} vertices, Betti {betti_numbers(sub)}")
    N = nerve(U).complex
    print(f"nerve f-vector {N.f_vector()}, Betti {betti_numbers(N)}")
    cv = is_convex(U)
    if cv.convex:
        print("every nonempty intersection is connected")
    else:
        print(f"{' and '.join(cv.witness_names)} meet in {cv.witness_component_count} components")
    report = certify_problem(problem_from_corpus(inst), tie_break=tie_break)
    print()
    print(report.to_text())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tie-break", choices=["least", "greatest"], default="least")
    args = ap.parse_args(argv)
    for name in ("example1", "example2"):
        describe(name, args.tie_break)


if __name__ == "__main__":
    main()
