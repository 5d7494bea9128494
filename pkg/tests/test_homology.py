from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from generators import facet_lists
from nervecert.homology import (
    betti_numbers,
    boundary_matrix,
    boundary_of,
    chain_complex,
    homology_basis,
    homology_coordinates,
    induced_map_homology,
    is_boundary,
    push_forward_chain,
)
from nervecert.simplicial import SimplicialMap, barycentric_subdivision, build_complex, vertex_key
from nervecert.corpus import torus_grid
from oracles import betti_snf

SPHERE = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4), (1, 3, 5), (2, 4, 5)]
TORUS7 = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]


@pytest.mark.parametrize(
    "facets, expected",
    [
        ([[0]], [1]),
        ([[0, 1], [1, 2], [0, 2]], [1, 1]),
        ([[0, 1, 2]], [1, 0, 0]),
        (SPHERE, [1, 0, 1]),
        (TORUS7, [1, 2, 1]),
        (RP2, [1, 0, 0]),
        ([[0], [1], [2, 3]], [3, 0]),
    ],
)
def test_known_betti_numbers(facets, expected):
    assert betti_numbers(build_complex(facets)) == expected


def test_boundary_matrix_entries():
    K = build_complex([[0, 1, 2]])
    d2 = boundary_matrix(K, 2)
    dense = d2.to_dense()
    # rows (0,1), (0,2), (1,2); boundary of (0,1,2) = (1,2) - (0,2) + (0,1)
    assert [r[0] for r in dense] == [1, -1, 1]
    with pytest.raises(ValueError):
        boundary_matrix(K, 0)


def test_boundary_of_single_simplex():
    assert boundary_of((0, 1)) == {(1,): 1, (0,): -1}
    assert boundary_of((5,)) == {}


@given(facet_lists)
def test_betti_numbers_match_smith_normal_form(facets):
    assert betti_numbers(build_complex(facets)) == betti_snf(facets)


@given(facet_lists)
def test_boundary_squares_to_zero(facets):
    assert chain_complex(build_complex(facets)).check_d_squared()


@given(facet_lists)
def test_basis_cycles_are_independent_cycles(facets):
    K = build_complex(facets)
    for n, b in enumerate(betti_numbers(K)):
        basis = homology_basis(K, n)
        assert len(basis) == b
        for j, z in enumerate(basis):
            coords = homology_coordinates(K, n, z)
            assert coords is not None
            assert coords == [Fraction(int(i == j)) for i in range(b)]


def test_boundaries_have_zero_class():
    K = build_complex(TORUS7)
    tri = K.simplices(2)[0]
    assert is_boundary(K, 1, boundary_of(tri))
    assert homology_coordinates(K, 1, {K.simplices(1)[0]: 1}) is None


def _last_vertex_map(K):
    sd, _ = barycentric_subdivision(K)
    return SimplicialMap(sd, K, {b: max(b, key=vertex_key) for b in sd.vertices})


@pytest.mark.parametrize("facets", [SPHERE, TORUS7, RP2, [[0, 1], [1, 2], [0, 2], [2, 3]]])
def test_subdivision_map_is_a_homology_isomorphism(facets):
    K = build_complex(facets)
    f = _last_vertex_map(K)
    for n, b in enumerate(betti_numbers(K)):
        assert induced_map_homology(f, n).rank == b


def test_constant_map_kills_positive_degrees():
    K = torus_grid(3, 3)
    P = build_complex([["*"]])
    f = SimplicialMap(K, P, {v: "*" for v in K.vertices})
    assert induced_map_homology(f, 0).rank == 1
    assert induced_map_homology(f, 1).rank == 0


def test_push_forward_orientation_and_degeneracy():
    K = build_complex([[0, 1, 2]])
    L = build_complex([["a", "b", "c"]])
    swap = SimplicialMap(K, L, {0: "b", 1: "a", 2: "c"})
    assert push_forward_chain(swap, {(0, 1): 1}) == {("a", "b"): -1}
    squash = SimplicialMap(K, L, {0: "a", 1: "a", 2: "b"})
    assert push_forward_chain(squash, {(0, 1): 1}) == {}
