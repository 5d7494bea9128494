"""Finite abstract simplicial complexes.

Vertices are integers, strings, or (nested) tuples of those.  A simplex is a
tuple of distinct vertices in canonical ascending order.  Complexes and
subcomplexes are immutable once built.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .errors import (
    DuplicateVertexInSimplex,
    EmptySimplex,
    NotASimplex,
    NotSimplicial,
    ParentMismatch,
    UnknownVertex,
)

__all__ = [
    "vertex_key",
    "simplex_key",
    "make_simplex",
    "SimplicialComplex",
    "Subcomplex",
    "build_complex",
    "subcomplex",
    "closed_star",
    "connected_components",
    "intersect_subcomplexes",
    "barycentric_subdivision",
    "subdivide_subcomplex",
    "SimplicialMap",
]


def vertex_key(v):
    """Total order on vertex ids: integers < strings < tuples."""
    if isinstance(v, bool):
        raise TypeError("booleans are not valid vertex ids")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    raise TypeError(f"unsupported vertex id {v!r}")


def simplex_key(s):
    return tuple(vertex_key(v) for v in s)


def make_simplex(vertices):
    """Canonical tuple for a vertex collection, validating it."""
    vs = tuple(vertices)
    if not vs:
        raise EmptySimplex("simplex must have at least one vertex")
    if len(set(vs)) != len(vs):
        raise DuplicateVertexInSimplex(f"repeated vertex in {list(vs)!r}")
    return tuple(sorted(vs, key=vertex_key))


def _faces(s):
    n = len(s)
    for k in range(1, n + 1):
        yield from combinations(s, k)


class SimplicialComplex:
    """A face-closed finite set of simplices.

    Use :func:`build_complex` to construct one from maximal simplices.  The
    constructor trusts its input to be face closed and canonical.
    """

    __slots__ = ("_simplices", "_by_dim", "_vertices", "_hash", "_cache", "__weakref__")

    def __init__(self, simplices):
        simplices = frozenset(simplices)
        by_dim: dict[int, list] = {}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._simplices = simplices
        self._by_dim = {d: tuple(sorted(v, key=simplex_key)) for d, v in by_dim.items()}
        self._vertices = tuple(s[0] for s in self._by_dim.get(0, ()))
        self._hash = None
        self._cache = {}

    @property
    def vertices(self):
        return self._vertices

    @property
    def dimension(self):
        """Dimension; -1 for the empty complex."""
        return max(self._by_dim, default=-1)

    def simplices(self, n=None):
        """Simplices of dimension ``n`` in canonical order, or all of them."""
        if n is None:
            return [s for d in sorted(self._by_dim) for s in self._by_dim[d]]
        return list(self._by_dim.get(n, ()))

    def n_simplices(self, n):
        return len(self._by_dim.get(n, ()))

    @property
    def simplex_set(self):
        return self._simplices

    def f_vector(self):
        return [self.n_simplices(d) for d in range(self.dimension + 1)]

    def euler_characteristic(self):
        return sum((-1) ** d * len(v) for d, v in self._by_dim.items())

    def maximal_simplices(self):
        out = []
        for s in self.simplices():
            n = len(s)
            if not any(len(t) > n and set(s) <= set(t) for t in self._cofaces_of(s)):
                out.append(s)
        return out

    def _cofaces_of(self, s):
        star = self._cache.get("vertex_star")
        if star is None:
            star = {}
            for t in self._simplices:
                for v in t:
                    star.setdefault(v, []).append(t)
            self._cache["vertex_star"] = star
        return star.get(s[0], ())

    def simplices_containing(self, v):
        """All simplices having ``v`` as a vertex."""
        if not self.has_vertex(v):
            raise UnknownVertex(v)
        self._cofaces_of((v,))
        return list(self._cache["vertex_star"][v])

    def has_vertex(self, v):
        return (v,) in self._simplices

    def __contains__(self, simplex):
        # canonical simplex tuples only; vertices may themselves be tuples
        return simplex in self._simplices

    def has_simplex(self, vertices):
        try:
            return make_simplex(vertices) in self._simplices
        except (TypeError, ValueError):
            return False

    def __len__(self):
        return len(self._simplices)

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._simplices)
        return self._hash

    def __repr__(self):
        return f"SimplicialComplex(f_vector={self.f_vector()})"

    def full_subcomplex(self):
        return Subcomplex(self, self._simplices)


class Subcomplex:
    """A face-closed subset of the simplices of a parent complex."""

    __slots__ = ("parent", "simplex_set", "_complex")

    def __init__(self, parent: SimplicialComplex, simplices, check=False):
        self.parent = parent
        self.simplex_set = frozenset(simplices)
        self._complex = None
        if check:
            for s in self.simplex_set:
                if s not in parent.simplex_set:
                    raise NotASimplex(f"{list(s)!r} is not a simplex of the parent complex")
                for f in _faces(s):
                    if f not in self.simplex_set:
                        raise NotASimplex(f"subcomplex is not face closed at {list(s)!r}")

    def as_complex(self) -> SimplicialComplex:
        if self._complex is None:
            self._complex = SimplicialComplex(self.simplex_set)
        return self._complex

    @property
    def vertices(self):
        return self.as_complex().vertices

    def is_empty(self):
        return not self.simplex_set

    @property
    def dimension(self):
        return self.as_complex().dimension

    def __contains__(self, simplex):
        return simplex in self.simplex_set

    def has_vertex(self, v):
        return (v,) in self.simplex_set

    def __len__(self):
        return len(self.simplex_set)

    def __le__(self, other):
        return self.simplex_set <= other.simplex_set

    def __eq__(self, other):
        if not isinstance(other, Subcomplex):
            return NotImplemented
        return self.simplex_set == other.simplex_set and self.parent == other.parent

    def __hash__(self):
        return hash(self.simplex_set)

    def __repr__(self):
        return f"Subcomplex(f_vector={self.as_complex().f_vector()})"


def build_complex(maximal_simplices) -> SimplicialComplex:
    """Face closure of a collection of vertex lists."""
    out = set()
    for raw in maximal_simplices:
        s = make_simplex(raw)
        if s in out:
            continue
        out.update(_faces(s))
    return SimplicialComplex(out)


def subcomplex(K: SimplicialComplex, maximal_simplices) -> Subcomplex:
    """The subcomplex of ``K`` generated by the given simplices."""
    out = set()
    for raw in maximal_simplices:
        s = make_simplex(raw)
        if s not in K.simplex_set:
            raise NotASimplex(f"{list(s)!r} is not a simplex of the complex")
        if s not in out:
            out.update(_faces(s))
    return Subcomplex(K, out)


def closed_star(K, v) -> Subcomplex:
    """Face closure of all simplices of ``K`` containing ``v``.

    ``K`` may be a complex or a subcomplex; the result lives in the
    ambient complex either way.
    """
    if isinstance(K, Subcomplex):
        parent = K.parent
        complex_ = K.as_complex()
    else:
        parent = complex_ = K
    out = set()
    for s in complex_.simplices_containing(v):
        if s not in out:
            out.update(_faces(s))
    return Subcomplex(parent, out)


def _vertex_components(complex_: SimplicialComplex):
    parent = {v: v for v in complex_.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in complex_.simplices(1):
        ru, rw = find(u), find(w)
        if ru != rw:
            if vertex_key(ru) < vertex_key(rw):
                parent[rw] = ru
            else:
                parent[ru] = rw
    groups: dict = {}
    for v in complex_.vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: vertex_key(g[0]))


def connected_components(K) -> list[Subcomplex]:
    """Components of a complex or subcomplex, ordered by least vertex."""
    if isinstance(K, Subcomplex):
        parent, complex_ = K.parent, K.as_complex()
    else:
        parent, complex_ = K, K
    groups = _vertex_components(complex_)
    label = {}
    for i, g in enumerate(groups):
        for v in g:
            label[v] = i
    buckets = [set() for _ in groups]
    for s in complex_.simplex_set:
        buckets[label[s[0]]].add(s)
    return [Subcomplex(parent, b) for b in buckets]


def is_connected(K) -> bool:
    complex_ = K.as_complex() if isinstance(K, Subcomplex) else K
    return len(_vertex_components(complex_)) == 1


def intersect_subcomplexes(*subs: Subcomplex) -> Subcomplex:
    if not subs:
        raise ValueError("need at least one subcomplex")
    parent = subs[0].parent
    for s in subs[1:]:
        if s.parent is not parent and s.parent != parent:
            raise ParentMismatch("subcomplexes live in different complexes")
    # smallest first keeps the intersection cheap
    ordered = sorted(subs, key=len)
    common = set(ordered[0].simplex_set)
    for s in ordered[1:]:
        common &= s.simplex_set
        if not common:
            break
    return Subcomplex(parent, common)


def _chains(complex_: SimplicialComplex):
    """Maximal flags of faces inside each maximal simplex."""
    seen = set()
    for top in complex_.maximal_simplices():
        for perm in permutations(top):
            chain = tuple(
                tuple(sorted(perm[: i + 1], key=vertex_key)) for i in range(len(perm))
            )
            if chain not in seen:
                seen.add(chain)
                yield chain


def barycentric_subdivision(K: SimplicialComplex):
    """Return ``(sd K, carrier)``.

    Vertices of ``sd K`` are the simplices of ``K`` (as tuples); simplices are
    chains under inclusion.  ``carrier`` maps each new vertex to the simplex
    of ``K`` it is the barycentre of.
    """
    out = set()
    for chain in _chains(K):
        s = tuple(sorted(chain, key=vertex_key))
        if s not in out:
            out.update(_faces(s))
    sd = SimplicialComplex(out)
    carrier = {v: v for v in sd.vertices}
    return sd, carrier


def subdivide_subcomplex(A: Subcomplex, sd_parent: SimplicialComplex) -> Subcomplex:
    """Image of ``A`` inside the subdivision of its parent."""
    out = set()
    for chain in _chains(A.as_complex()):
        s = tuple(sorted(chain, key=vertex_key))
        if s not in out:
            out.update(_faces(s))
    return Subcomplex(sd_parent, out)


class SimplicialMap:
    """Vertex assignment between complexes that sends simplices to simplices.

    Construction does not validate; call :meth:`check` (cached) before
    relying on the invariant.
    """

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_assignment):
        self.source = source
        self.target = target
        self.vertex_assignment = dict(vertex_assignment)
        self._checked = False

    def __call__(self, v):
        return self.vertex_assignment[v]

    def image_simplex(self, s):
        img = {self.vertex_assignment[v] for v in s}
        return tuple(sorted(img, key=vertex_key))

    def non_simplicial_witness(self):
        """First source simplex whose image is not a target simplex, or None."""
        a = self.vertex_assignment
        for v in self.source.vertices:
            if v not in a:
                return (v,)
            if not self.target.has_vertex(a[v]):
                return (v,)
        for s in self.source.simplices():
            if self.image_simplex(s) not in self.target.simplex_set:
                return s
        return None

    def is_simplicial(self):
        return self.non_simplicial_witness() is None

    def check(self):
        if not self._checked:
            bad = self.non_simplicial_witness()
            if bad is not None:
                raise NotSimplicial(f"image of {list(bad)!r} is not a simplex of the target")
            self._checked = True
        return self

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """``self o inner``."""
        a = self.vertex_assignment
        return SimplicialMap(
            inner.source, self.target, {v: a[w] for v, w in inner.vertex_assignment.items()}
        )

    def __repr__(self):
        return f"SimplicialMap({self.source!r} -> {self.target!r})"
