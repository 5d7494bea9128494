"""Simplicial models of the nerve map ``X -> |N|``.

Two constructions are provided.

*Star map* (:func:`build_nerve_map`): each vertex goes to an element that
contains its whole closed star.  Needs the star condition.

*Carrier map* (:func:`carrier_nerve_map`): defined on the barycentric
subdivision; the barycentre of a simplex goes to an element containing that
simplex.  Any simplexwise cover admits it, because every element chosen
along a flag contains the flag's smallest simplex.

For a cover by closed subcomplexes the star condition at an original vertex
does not change under subdivision, so refinement either succeeds with zero
rounds or never.  :func:`refine_for_star_condition` reports this instead of
subdividing in vain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cover import Cover, nerve
from .errors import InternalCheckFailure, StarConditionNotReached
from .homology import induced_map_homology
from .simplicial import SimplicialComplex, SimplicialMap, barycentric_subdivision, vertex_key

__all__ = [
    "SimplicialMap",
    "StarRefinement",
    "star_condition_failure",
    "refine_for_star_condition",
    "build_nerve_map",
    "carrier_nerve_map",
    "NerveMapReport",
    "nerve_map_report",
]

DEFAULT_MAX_ROUNDS = 8


@dataclass
class StarRefinement:
    refined_space: SimplicialComplex
    refined_cover: Cover
    rounds: int


def _star_hosts(U: Cover, v):
    star = U.space.simplices_containing(v)
    return [n for n in U.names if all(s in U.elements[n].simplex_set for s in star)]


def star_condition_failure(U: Cover):
    """First vertex whose closed star lies in no element, or None."""
    member = U.membership()
    for v in U.space.vertices:
        star = U.space.simplices_containing(v)
        if not any(all(s in U.elements[n].simplex_set for s in star) for n in member[v]):
            return v
    return None


def refine_for_star_condition(X: SimplicialComplex, U: Cover, max_rounds: int = DEFAULT_MAX_ROUNDS):
    """Return a :class:`StarRefinement` of ``(X, U)`` satisfying the star condition.

    Raises :class:`StarConditionNotReached` when the condition fails.  Since
    a failing vertex of ``X`` keeps failing after any number of barycentric
    subdivisions, no subdivision is attempted; ``max_rounds`` only bounds
    the budget the caller is willing to spend.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    if U.space is not X and U.space != X:
        raise ValueError("cover does not live on X")
    bad = star_condition_failure(U)
    if bad is not None:
        raise StarConditionNotReached(0, bad)
    return StarRefinement(X, U, 0)


def _pick(names, tie_break):
    if tie_break == "least":
        return min(names, key=vertex_key)
    if tie_break == "greatest":
        return max(names, key=vertex_key)
    raise ValueError(f"unknown tie_break {tie_break!r}")


def build_nerve_map(R: StarRefinement, tie_break: str = "least") -> SimplicialMap:
    """Star map ``refined_space -> nerve`` (least/greatest host element)."""
    U = R.refined_cover
    N = nerve(U).complex
    assign = {}
    for v in R.refined_space.vertices:
        hosts = _star_hosts(U, v)
        if not hosts:
            raise StarConditionNotReached(R.rounds, v)
        assign[v] = _pick(hosts, tie_break)
    f = SimplicialMap(R.refined_space, N, assign)
    bad = f.non_simplicial_witness()
    if bad is not None:
        raise InternalCheckFailure(f"star nerve map not simplicial at {bad!r}")
    f._checked = True
    return f


def carrier_nerve_map(U: Cover, tie_break: str = "least") -> SimplicialMap:
    """Carrier map ``sd X -> nerve``: barycentre of ``s`` goes to an element containing ``s``."""
    sd, _ = barycentric_subdivision(U.space)
    N = nerve(U).complex
    assign = {}
    for b in sd.vertices:
        hosts = [n for n in U.names if b in U.elements[n].simplex_set]
        assign[b] = _pick(hosts, tie_break)
    f = SimplicialMap(sd, N, assign)
    bad = f.non_simplicial_witness()
    if bad is not None:
        raise InternalCheckFailure(f"carrier nerve map not simplicial at {bad!r}")
    f._checked = True
    return f


@dataclass
class NerveMapReport:
    method: str  # "star" or "carrier"
    rounds: int | None
    simplicial: bool
    ranks: dict = field(default_factory=dict)
    nerve_map: SimplicialMap | None = field(default=None, repr=False)


def nerve_map_report(
    X: SimplicialComplex,
    U: Cover,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    tie_break: str = "least",
    method: str = "star",
) -> NerveMapReport:
    """Build a nerve map and the ranks of ``H_n(nu)`` for ``n <= dim X``.

    ``method`` is ``"star"`` (raises :class:`StarConditionNotReached` when
    unavailable), ``"carrier"``, or ``"auto"`` (star, else carrier).
    """
    if method not in ("star", "carrier", "auto"):
        raise ValueError(f"unknown method {method!r}")
    rounds = None
    if method in ("star", "auto"):
        try:
            R = refine_for_star_condition(X, U, max_rounds)
        except StarConditionNotReached:
            if method == "star":
                raise
            method = "carrier"
        else:
            f = build_nerve_map(R, tie_break)
            method, rounds = "star", R.rounds
    if method == "carrier":
        f = carrier_nerve_map(U, tie_break)
    ranks = {n: induced_map_homology(f, n).rank for n in range(X.dimension + 1)}
    return NerveMapReport(method, rounds, f.is_simplicial(), ranks, f)
