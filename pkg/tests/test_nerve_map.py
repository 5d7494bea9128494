from __future__ import annotations

import random

import pytest
from hypothesis import given

from generators import random_connected_complex, random_valid_cover, seeds
from nervecert.corpus import corpus
from nervecert.cover import nerve, subdivide_cover, validate_cover
from nervecert.errors import StarConditionNotReached
from nervecert.homology import betti_numbers, boundary_of, push_forward_chain
from nervecert.simplicial import build_complex
from nervecert.nerve_map import (
    build_nerve_map,
    carrier_nerve_map,
    nerve_map_report,
    refine_for_star_condition,
    star_condition_failure,
)


def _boundary(chain):
    out = {}
    for s, x in chain.items():
        for f, sign in boundary_of(s).items():
            out[f] = out.get(f, 0) + sign * x
    return {f: x for f, x in out.items() if x}


def _assert_chain_map(f):
    for s in f.source.simplices():
        lhs = _boundary(push_forward_chain(f, {s: 1}))
        rhs = push_forward_chain(f, _boundary({s: 1}))
        assert lhs == rhs, s


def _cover(name):
    inst = corpus(name)
    return inst.space, validate_cover(inst.space, inst.elements)


def test_star_map_on_torus_annuli():
    X, U = _cover("torus_annuli")
    R = refine_for_star_condition(X, U)
    assert R.rounds == 0
    f = build_nerve_map(R)
    assert f.is_simplicial()
    report = nerve_map_report(X, U)
    assert report.method == "star"
    # the annulus core maps onto the nerve circle
    assert report.ranks == {0: 1, 1: 1, 2: 0}


def test_star_condition_failure_and_carrier_fallback():
    X, U = _cover("circle_stars")
    assert star_condition_failure(U) in (1, 3, 5)
    with pytest.raises(StarConditionNotReached) as info:
        refine_for_star_condition(X, U)
    assert info.value.rounds == 0
    with pytest.raises(StarConditionNotReached):
        nerve_map_report(X, U, method="star")
    report = nerve_map_report(X, U, method="auto")
    assert report.method == "carrier" and report.rounds is None
    # the hexagon wraps once around the 3-cycle nerve
    assert report.ranks == {0: 1, 1: 1}


def test_tie_breaks_choose_different_elements():
    X = build_complex([[0, 1, 2], [2, 3]])
    U = validate_cover(X, {"A": [[0, 1, 2], [2, 3]], "B": [[0, 1, 2]]})
    R = refine_for_star_condition(X, U)
    least, greatest = build_nerve_map(R, "least"), build_nerve_map(R, "greatest")
    assert least(0) == "A" and greatest(0) == "B"
    assert least(3) == greatest(3) == "A"
    with pytest.raises(ValueError):
        build_nerve_map(R, "median")


@given(seeds)
def test_star_condition_is_unchanged_by_subdivision(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng)
    U = random_valid_cover(rng, X)
    if U is None:
        return
    _, sdU = subdivide_cover(U)
    bad = star_condition_failure(U)
    bad_sd = star_condition_failure(sdU)
    assert (bad is None) == (bad_sd is None)
    if bad is not None:
        # the offending original vertex still fails after subdivision
        member = sdU.membership()[(bad,)]
        star = sdU.space.simplices_containing((bad,))
        assert not any(all(s in sdU[n].simplex_set for s in star) for n in member)


@given(seeds)
def test_nerve_maps_are_chain_maps(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng, max_vertices=6)
    U = random_valid_cover(rng, X)
    if U is None:
        return
    f = carrier_nerve_map(U, rng.choice(["least", "greatest"]))
    assert f.is_simplicial()
    _assert_chain_map(f)
    if star_condition_failure(U) is None:
        g = build_nerve_map(refine_for_star_condition(X, U))
        _assert_chain_map(g)


@given(seeds)
def test_star_and_carrier_maps_agree_on_homology(seed):
    rng = random.Random(seed)
    X = random_connected_complex(rng, max_vertices=6)
    U = random_valid_cover(rng, X)
    if U is None or star_condition_failure(U) is not None:
        return
    a = nerve_map_report(X, U, method="star")
    b = nerve_map_report(X, U, method="carrier")
    assert a.ranks == b.ranks
    N = nerve(U).complex
    for n, r in a.ranks.items():
        bn = betti_numbers(N)
        assert r <= (bn[n] if n < len(bn) else 0)


@pytest.mark.parametrize("max_rounds", [0, 1, 8])
def test_single_edge_element_on_a_long_circle(max_rounds):
    # Vertex 0 lies on the edge element and on the long arc, but its closed
    # star lies in neither.  Subdividing keeps that vertex and the same two
    # half-edges around it, so no number of rounds can repair it.
    n = 10
    X = build_complex([(i, (i + 1) % n) for i in range(n)])
    U = validate_cover(X, {"E": [[0, 1]], "R": [(i, (i + 1) % n) for i in range(1, n)]})
    with pytest.raises(StarConditionNotReached) as info:
        refine_for_star_condition(X, U, max_rounds)
    assert info.value.offending_vertex in (0, 1)
    _, sdU = subdivide_cover(U)
    assert star_condition_failure(sdU) in ((0,), (1,))
    report = nerve_map_report(X, U, max_rounds, method="auto")
    assert report.method == "carrier" and report.ranks == {0: 1, 1: 0}
