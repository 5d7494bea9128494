from __future__ import annotations

import random

import pytest
from hypothesis import given

from generators import random_connected_complex, random_valid_cover, seeds
from nervecert.cover import (
    cover_violations,
    is_convex,
    multiplicity,
    nerve,
    star_cover_from_labels,
    subdivide_cover,
    validate_cover,
)
from nervecert.errors import DisconnectedElement, DuplicateElement, EmptyElement, UncoveredSimplex
from nervecert.homology import betti_numbers
from nervecert.nerve_map import star_condition_failure
from nervecert.simplicial import build_complex, intersect_subcomplexes

HEXAGON = build_complex([(i, (i + 1) % 6) for i in range(6)])


def _arcs():
    return {"A": [[0, 1], [1, 2], [2, 3]], "B": [[3, 4], [4, 5], [5, 0]]}


def test_valid_cover_and_nerve():
    U = validate_cover(HEXAGON, _arcs())
    assert U.names == ("A", "B")
    assert multiplicity(U) == 2
    N = nerve(U)
    assert N.complex.simplices() == [("A",), ("B",), ("A", "B")]
    # least vertex of the intersection is the witness
    assert N.witness[("A", "B")] == (0,)


def test_two_arcs_are_not_convex():
    v = is_convex(validate_cover(HEXAGON, _arcs()))
    assert not v.convex
    assert v.witness_names == ("A", "B")
    assert v.witness_component_count == 2


@pytest.mark.parametrize(
    "elements, error",
    [
        ({"A": [[0, 1], [1, 2]]}, UncoveredSimplex),
        ({"A": [[0, 1], [3, 4]], "B": [[1, 2], [2, 3], [4, 5], [5, 0]]}, DisconnectedElement),
        ({"A": [], "B": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]]}, EmptyElement),
    ],
)
def test_cover_errors(elements, error):
    with pytest.raises(error) as info:
        validate_cover(HEXAGON, elements)
    assert info.value.violations


def test_duplicate_element_detected():
    whole = [[i, (i + 1) % 6] for i in range(6)]
    with pytest.raises(DuplicateElement):
        validate_cover(HEXAGON, {"A": whole, "B": list(reversed(whole))})


def test_non_subcomplex_reported_as_violation():
    v = cover_violations(HEXAGON, {"A": [[0, 3]]})
    assert v[0].kind == "NotASubcomplex"


def test_star_covers_satisfy_star_condition():
    X = build_complex([[0, 1, 2], [1, 2, 3], [2, 3, 4]])
    U = validate_cover(X, star_cover_from_labels(X, {0: "a", 1: "a", 2: "b", 3: "b", 4: "c"}))
    assert star_condition_failure(U) is None


@given(seeds)
def test_nerve_dimension_tracks_multiplicity(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng)
    U = random_valid_cover(rng, X)
    if U is None:
        return
    assert nerve(U).complex.dimension + 1 == multiplicity(U)


@given(seeds)
def test_nerve_is_invariant_under_subdivision(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng)
    U = random_valid_cover(rng, X)
    if U is None:
        return
    _, sdU = subdivide_cover(U)
    assert nerve(sdU).complex == nerve(U).complex
    assert is_convex(sdU).convex == is_convex(U).convex


@given(seeds)
def test_convexity_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng)
    U = random_valid_cover(rng, X)
    if U is None:
        return
    from itertools import combinations

    connected = True
    for k in range(1, len(U.names) + 1):
        for names in combinations(U.names, k):
            inter = intersect_subcomplexes(*(U[n] for n in names))
            if inter.simplex_set and betti_numbers(inter.as_complex())[0] != 1:
                connected = False
    assert is_convex(U).convex == connected
