"""Covers by subcomplexes, multiplicity, convexity and the nerve."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    CoverError,
    DisconnectedElement,
    DuplicateElement,
    EmptyElement,
    NotASimplex,
    UncoveredSimplex,
)
from .simplicial import (
    SimplicialComplex,
    Subcomplex,
    barycentric_subdivision,
    build_complex,
    closed_star,
    connected_components,
    intersect_subcomplexes,
    is_connected,
    subcomplex,
    subdivide_subcomplex,
    vertex_key,
)

__all__ = [
    "Violation",
    "Cover",
    "NerveComplex",
    "ConvexityVerdict",
    "cover_violations",
    "validate_cover",
    "multiplicity",
    "nerve",
    "is_convex",
    "subdivide_cover",
    "star_cover_from_labels",
]


@dataclass(frozen=True)
class Violation:
    kind: str  # UncoveredSimplex | EmptyElement | DisconnectedElement | DuplicateElement | NotASubcomplex
    element: object = None
    detail: object = None

    def __str__(self):
        bits = [self.kind]
        if self.element is not None:
            bits.append(f"element {self.element!r}")
        if self.detail is not None:
            bits.append(str(self.detail))
        return ": ".join(bits)


_ERROR_FOR_KIND = {
    "UncoveredSimplex": UncoveredSimplex,
    "EmptyElement": EmptyElement,
    "DisconnectedElement": DisconnectedElement,
    "DuplicateElement": DuplicateElement,
}


class Cover:
    """A validated cover of ``space`` by named, connected subcomplexes.

    Build one with :func:`validate_cover`.  ``names`` is the canonical
    (sorted) order of element names; nerve vertices use the same names.
    """

    def __init__(self, space: SimplicialComplex, elements: dict):
        self.space = space
        self.names = tuple(sorted(elements, key=vertex_key))
        self.elements = {n: elements[n] for n in self.names}
        self._nerve = None
        self._membership = None

    def __getitem__(self, name) -> Subcomplex:
        return self.elements[name]

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def membership(self):
        """Map each vertex of the space to the tuple of names containing it."""
        if self._membership is None:
            out = {v: [] for v in self.space.vertices}
            for name in self.names:
                for s in self.elements[name].simplex_set:
                    if len(s) == 1:
                        out[s[0]].append(name)
            self._membership = {v: tuple(ns) for v, ns in out.items()}
        return self._membership

    def __repr__(self):
        return f"Cover({len(self.names)} elements over {self.space!r})"


def _as_subcomplex(X, value):
    if isinstance(value, Subcomplex):
        if value.parent is not X and value.parent != X:
            raise NotASimplex("element subcomplex lives in a different complex")
        return value
    return subcomplex(X, value)


def cover_violations(X: SimplicialComplex, elements: dict):
    """All problems with ``elements`` as a cover of ``X`` (empty list if valid)."""
    out = []
    subs = {}
    for name in sorted(elements, key=vertex_key):
        try:
            subs[name] = _as_subcomplex(X, elements[name])
        except NotASimplex as exc:
            out.append(Violation("NotASubcomplex", name, str(exc)))
    seen = {}
    for name, sub in subs.items():
        if sub.is_empty():
            out.append(Violation("EmptyElement", name))
            continue
        if not is_connected(sub):
            n = len(connected_components(sub))
            out.append(Violation("DisconnectedElement", name, f"{n} components"))
        prev = seen.get(sub.simplex_set)
        if prev is not None:
            out.append(Violation("DuplicateElement", name, f"same simplices as {prev!r}"))
        else:
            seen[sub.simplex_set] = name
    covered = set()
    for sub in subs.values():
        covered |= sub.simplex_set
    for s in X.simplices():
        if s not in covered:
            out.append(Violation("UncoveredSimplex", None, list(s)))
    return out


def validate_cover(X: SimplicialComplex, elements: dict) -> Cover:
    """Check the cover conditions and return a :class:`Cover`.

    ``elements`` maps names to :class:`Subcomplex` objects or to lists of
    generating simplices.  Raises a :class:`CoverError` subclass chosen by
    the first violation; ``exc.violations`` lists all of them.
    """
    violations = cover_violations(X, elements)
    if violations:
        cls = _ERROR_FOR_KIND.get(violations[0].kind, CoverError)
        raise cls(violations)
    return Cover(X, {n: _as_subcomplex(X, e) for n, e in elements.items()})


def multiplicity(U: Cover) -> int:
    """Largest number of elements sharing a simplex of the space."""
    counts: dict = {}
    for name in U.names:
        for s in U.elements[name].simplex_set:
            counts[s] = counts.get(s, 0) + 1
    return max(counts.values(), default=0)


@dataclass
class NerveComplex:
    """Nerve of a cover; ``witness`` maps each nerve simplex to a simplex of
    the space lying in the corresponding intersection."""

    complex: SimplicialComplex
    witness: dict = field(repr=False)

    @property
    def dimension(self):
        return self.complex.dimension


def nerve(U: Cover) -> NerveComplex:
    """Nerve of ``U`` with lexicographically least witnesses.

    Subcomplexes meet iff they share a vertex, so the nerve is generated by
    the name sets of the vertices of the space, and the least simplex in an
    intersection is always a vertex.
    """
    if U._nerve is not None:
        return U._nerve
    member = U.membership()
    witness = {}
    tops = set()
    for v in U.space.vertices:  # canonical order, so first hit is least
        names = member[v]
        tops.add(names)
        for k in range(1, len(names) + 1):
            for sub in combinations(names, k):
                if sub not in witness:
                    witness[sub] = (v,)
    N = build_complex(tops) if tops else SimplicialComplex(())
    # names were sorted by vertex_key in Cover, so tuples are canonical
    U._nerve = NerveComplex(N, witness)
    return U._nerve


@dataclass
class ConvexityVerdict:
    convex: bool
    witness_failure: tuple | None = None  # (names, component subcomplexes)

    @property
    def witness_names(self):
        return None if self.witness_failure is None else self.witness_failure[0]

    @property
    def witness_component_count(self):
        return 0 if self.witness_failure is None else len(self.witness_failure[1])


def is_convex(U: Cover) -> ConvexityVerdict:
    """Connectedness of every nonempty intersection of elements.

    Only nerve simplices need checking: any other subfamily has empty
    intersection.  The first failure in (dimension, lexicographic) order is
    returned as witness.
    """
    N = nerve(U).complex
    for s in N.simplices():
        inter = intersect_subcomplexes(*(U.elements[n] for n in s))
        comps = connected_components(inter)
        if len(comps) != 1:
            return ConvexityVerdict(False, (s, comps))
    return ConvexityVerdict(True, None)


def subdivide_cover(U: Cover):
    """Barycentric subdivision of the space and every element at once.

    Returns ``(sd_space, sd_cover)``.
    """
    sd, _ = barycentric_subdivision(U.space)
    elements = {n: subdivide_subcomplex(U.elements[n], sd) for n in U.names}
    return sd, Cover(sd, elements)


def star_cover_from_labels(X: SimplicialComplex, labels: dict) -> dict:
    """Elements ``name -> union of closed stars of the vertices labelled name``.

    Every vertex's closed star lies in the element of its own label, so such
    covers satisfy the star condition used by the nerve map.
    """
    buckets: dict = {}
    for v in X.vertices:
        buckets.setdefault(labels[v], set()).update(closed_star(X, v).simplex_set)
    return {name: Subcomplex(X, simplices) for name, simplices in buckets.items()}
