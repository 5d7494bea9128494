"""Finite regular coverings, lifted covers and their nerves with a deck action.

A homomorphism from the edge-path group of ``X`` onto a finite group ``G`` is
given by labels on edges.  The total space has vertices ``(v, g)`` and ``G``
acts by left multiplication on the second coordinate.  Group elements are
handled by their index in the multiplication table throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product

from .cover import Cover, NerveComplex, nerve
from .errors import (
    Disconnected,
    GroupTableError,
    InternalCheckFailure,
    NotASimplex,
    NotSimplicial,
    RelatorNotKilled,
    UnknownVertex,
)
from .simplicial import (
    SimplicialComplex,
    SimplicialMap,
    Subcomplex,
    connected_components,
    is_connected,
    vertex_key,
)

__all__ = [
    "FiniteGroupTable",
    "cyclic_group",
    "named_group",
    "EdgeLabeling",
    "random_edge_labeling",
    "CoveringComplex",
    "build_regular_cover",
    "LiftedCoverData",
    "lift_cover",
    "projection_nerve_map",
    "OrbitBijection",
    "verify_orbit_bijection",
    "StabilizerReport",
    "nerve_stabilizers",
    "lifted_nerve_map",
]


class FiniteGroupTable:
    """A finite group given by its multiplication table.

    ``table[i][j]`` is the index of ``elements[i] * elements[j]``.  The group
    axioms are checked on construction (associativity exhaustively).
    """

    def __init__(self, elements, table, name=None):
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        self.name = name
        n = len(self.elements)
        if n == 0:
            raise GroupTableError("a group has at least one element")
        if len(set(map(repr, self.elements))) != n:
            raise GroupTableError("element names must be distinct")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise GroupTableError(f"multiplication table must be {n}x{n}")
        for row in self.table:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                    raise GroupTableError(f"table entry {x!r} is not an element index")
        t = self.table
        ids = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
        if not ids:
            raise GroupTableError("no identity element")
        self.identity = ids[0]
        self.inverse = []
        for x in range(n):
            inv = [y for y in range(n) if t[x][y] == self.identity and t[y][x] == self.identity]
            if not inv:
                raise GroupTableError(f"element {self.elements[x]!r} has no inverse")
            self.inverse.append(inv[0])
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupTableError(
                    f"associativity fails for {self.elements[a]!r}, {self.elements[b]!r}, {self.elements[c]!r}"
                )

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    def subgroup_closure(self, gens):
        out = {self.identity}
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return frozenset(out)

    def __repr__(self):
        return f"FiniteGroupTable({self.name or '?'}, order={self.order})"


def cyclic_group(n: int) -> FiniteGroupTable:
    return FiniteGroupTable(list(range(n)), [[(i + j) % n for j in range(n)] for i in range(n)], f"Z{n}")


def _permutation_group(perms, name):
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(len(q)))] for q in perms] for p in perms]
    return FiniteGroupTable(["".join(map(str, p)) for p in perms], table, name)


def named_group(name: str) -> FiniteGroupTable:
    """Builtin groups: ``Z<n>`` (cyclic), ``S3`` and ``Z2xZ2``."""
    if name == "S3":
        return _permutation_group(sorted(permutations(range(3))), "S3")
    if name in ("Z2xZ2", "V4"):
        elems = [(a, b) for a in range(2) for b in range(2)]
        idx = {e: i for i, e in enumerate(elems)}
        table = [[idx[((a + c) % 2, (b + d) % 2)] for (c, d) in elems] for (a, b) in elems]
        return FiniteGroupTable([f"{a}{b}" for a, b in elems], table, "Z2xZ2")
    if name.startswith("Z") and name[1:].isdigit() and int(name[1:]) >= 1:
        return cyclic_group(int(name[1:]))
    raise GroupTableError(f"unknown group name {name!r}")


def _edge(u, v):
    return (u, v) if vertex_key(u) < vertex_key(v) else (v, u)


class EdgeLabeling:
    """Group labels on the edges of ``X`` with ``label(v, u) = label(u, v)^-1``.

    ``labels`` maps ordered pairs to element indices; edges not mentioned are
    labelled with the identity.  The cocycle condition is checked on every
    2-simplex (:class:`RelatorNotKilled` otherwise).
    """

    def __init__(self, X: SimplicialComplex, G: FiniteGroupTable, labels=None):
        self.space = X
        self.group = G
        self._labels = {}
        for (u, v), g in (labels or {}).items():
            if not isinstance(g, int) or isinstance(g, bool) or not 0 <= g < G.order:
                raise GroupTableError(f"label {g!r} on edge {(u, v)!r} is not an element index")
            if u == v:
                raise NotASimplex(f"edge {[u, v]!r} is degenerate")
            for w in (u, v):
                if not X.has_vertex(w):
                    raise UnknownVertex(w)
            e = _edge(u, v)
            if e not in X.simplex_set:
                raise NotASimplex(f"{list(e)!r} is not an edge of the complex")
            val = g if e == (u, v) else G.inv(g)
            if e in self._labels and self._labels[e] != val:
                raise GroupTableError(f"edge {list(e)!r} labelled inconsistently")
            self._labels[e] = val
        for a, b, c in X.simplices(2):
            p = G.prod(self.label(a, b), self.label(b, c), self.label(c, a))
            if p != G.identity:
                raise RelatorNotKilled((a, b, c), G.elements[p])

    @classmethod
    def from_triples(cls, X, G, triples):
        """Build from ``[u, v, g]`` triples as found in input files."""
        labels = {}
        for t in triples:
            u, v, g = t
            if (u, v) in labels and labels[(u, v)] != g:
                raise GroupTableError(f"edge {[u, v]!r} labelled twice")
            labels[(u, v)] = g
        return cls(X, G, labels)

    def label(self, u, v):
        e = _edge(u, v)
        g = self._labels.get(e, self.group.identity)
        return g if e == (u, v) else self.group.inv(g)

    def is_trivial(self):
        return all(g == self.group.identity for g in self._labels.values())

    def as_triples(self):
        return [[u, v, g] for (u, v), g in sorted(self._labels.items(), key=lambda kv: (vertex_key(kv[0][0]), vertex_key(kv[0][1])))]


def random_edge_labeling(X: SimplicialComplex, G: FiniteGroupTable, rng=None, tree_identity=True) -> EdgeLabeling:
    """A uniformly-guessed valid labeling found by backtracking.

    Spanning-tree edges get the identity (when ``tree_identity``); the other
    edges receive random values, and labels forced by a triangle with two
    labelled sides are propagated.  The all-identity labeling always
    succeeds, so the search terminates.
    """
    rng = rng or random.Random()
    ident = G.identity
    edges = list(X.simplices(1))
    tris_of = {e: [] for e in edges}
    for t in X.simplices(2):
        a, b, c = t
        for e in ((a, b), (b, c), (a, c)):
            tris_of[e].append(t)
    fixed = {}
    if tree_identity and X.vertices:
        seen = {X.vertices[0]}
        stack = [X.vertices[0]]
        adj = {v: [] for v in X.vertices}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    fixed[_edge(u, w)] = ident
                    stack.append(w)

    def lab(assign, u, v):
        e = _edge(u, v)
        if e not in assign:
            return None
        return assign[e] if e == (u, v) else G.inv(assign[e])

    def propagate(assign, queue):
        while queue:
            e = queue.pop()
            for a, b, c in tris_of[e]:
                ab, bc, ac = lab(assign, a, b), lab(assign, b, c), lab(assign, a, c)
                known = sum(x is not None for x in (ab, bc, ac))
                if known == 3:
                    if G.mul(ab, bc) != ac:
                        return False
                elif known == 2:
                    if ac is None:
                        assign[(a, c)] = G.mul(ab, bc)
                        queue.append((a, c))
                    elif bc is None:
                        assign[(b, c)] = G.mul(G.inv(ab), ac)
                        queue.append((b, c))
                    else:
                        assign[(a, b)] = G.mul(ac, G.inv(bc))
                        queue.append((a, b))
        return True

    assign = dict(fixed)
    if not propagate(assign, list(fixed)):
        raise InternalCheckFailure("tree labels alone violate a triangle")

    def search(assign):
        free = [e for e in edges if e not in assign]
        if not free:
            return assign
        e = free[0]
        vals = list(range(G.order))
        rng.shuffle(vals)
        for g in vals:
            trial = dict(assign)
            trial[e] = g
            if propagate(trial, [e]):
                out = search(trial)
                if out is not None:
                    return out
        return None

    result = search(assign)
    if result is None:
        raise InternalCheckFailure("no labeling found, not even the trivial one")
    return EdgeLabeling(X, G, result)


@dataclass
class CoveringComplex:
    base: SimplicialComplex
    group: FiniteGroupTable
    labeling: EdgeLabeling
    total: SimplicialComplex
    projection: SimplicialMap = field(repr=False)

    def act(self, h, vertex):
        v, g = vertex
        return (v, self.group.mul(h, g))

    def act_simplex(self, h, s):
        return tuple(sorted((self.act(h, x) for x in s), key=vertex_key))

    def action_map(self, h) -> SimplicialMap:
        return SimplicialMap(self.total, self.total, {x: self.act(h, x) for x in self.total.vertices})

    def fiber(self, v):
        return [(v, g) for g in range(self.group.order)]

    def invariant_failures(self):
        """Names of violated covering invariants (empty when all hold)."""
        out = []
        X, T, G = self.base, self.total, self.group
        p = self.projection
        if not p.is_simplicial():
            out.append("projection not simplicial")
        counts = {}
        for s in T.simplices():
            img = p.image_simplex(s)
            if len(img) != len(s):
                out.append(f"projection collapses {s!r}")
                break
            counts[img] = counts.get(img, 0) + 1
        if set(counts) != X.simplex_set:
            out.append("projection not surjective on simplices")
        if any(c != G.order for c in counts.values()):
            out.append("projection not |G|-to-1")
        for h in range(G.order):
            if h != G.identity and any(self.act(h, x) == x for x in T.vertices):
                out.append(f"action of {G.elements[h]!r} not free")
            if any(self.act_simplex(h, s) not in T.simplex_set for s in T.simplices()):
                out.append(f"action of {G.elements[h]!r} not simplicial")
            if any(self.act(h, x)[0] != p(x) for x in T.vertices):
                out.append(f"projection not invariant under {G.elements[h]!r}")
        if T.euler_characteristic() != G.order * X.euler_characteristic():
            out.append("Euler characteristic not multiplied by |G|")
        return out


def build_regular_cover(X: SimplicialComplex, G: FiniteGroupTable, labels: EdgeLabeling) -> CoveringComplex:
    """Total space of the regular covering defined by ``labels``.

    The simplex ``(v0, ..., vn)`` lifts, for each ``g``, to
    ``((v0, g), (v1, g*label(v0, v1)), ..., (vn, g*label(v0, vn)))``.
    """
    if not X.vertices or not is_connected(X):
        raise Disconnected("regular covers are built over connected complexes")
    if labels.space is not X and labels.space != X:
        raise ValueError("labeling lives on a different complex")
    if labels.group is not G:
        raise ValueError("labeling uses a different group")
    lifted = []
    for s in X.simplices():
        v0 = s[0]
        offs = [G.identity] + [labels.label(v0, v) for v in s[1:]]
        for g in range(G.order):
            lifted.append(tuple((v, G.mul(g, o)) for v, o in zip(s, offs)))
    total = SimplicialComplex(lifted)
    proj = SimplicialMap(total, X, {x: x[0] for x in total.vertices})
    return CoveringComplex(X, G, labels, total, proj)


@dataclass
class LiftedCoverData:
    covering: CoveringComplex
    base_cover: Cover
    lifted_elements: dict  # base name -> list of component Subcomplex
    lifted_cover: Cover = field(repr=False)
    nerve_up: NerveComplex = field(repr=False)
    nerve_action: dict = field(repr=False)  # h -> {lifted name: lifted name}
    surjective: dict = field(default_factory=dict)  # base name -> bool

    def base_name(self, lifted_name):
        return lifted_name[0]


def lift_cover(C: CoveringComplex, U: Cover) -> LiftedCoverData:
    """Components of the preimages of the elements, their nerve and ``G``-action.

    Lifted elements are named ``(W, k)`` with components of the preimage of
    ``W`` numbered by least vertex.
    """
    if U.space is not C.base and U.space != C.base:
        raise ValueError("cover and covering live on different complexes")
    T, G = C.total, C.group
    lifted, elements, surjective = {}, {}, {}
    proj_simplices = {}
    for s in T.simplex_set:
        proj_simplices.setdefault(C.projection.image_simplex(s), []).append(s)
    for name in U.names:
        pre = set()
        for s in U.elements[name].simplex_set:
            pre.update(proj_simplices[s])
        comps = connected_components(Subcomplex(T, pre))
        lifted[name] = comps
        surjective[name] = all(
            {C.projection.image_simplex(s) for s in comp.simplex_set} == U.elements[name].simplex_set
            for comp in comps
        )
        for k, comp in enumerate(comps):
            elements[(name, k)] = comp
    up = Cover(T, elements)
    N_up = nerve(up)
    where = {}
    for lname, comp in elements.items():
        for s in comp.simplex_set:
            if len(s) == 1:
                where.setdefault(s[0], []).append(lname)
    action = {}
    for h in range(G.order):
        perm = {}
        for lname, comp in elements.items():
            rep = comp.vertices[0]
            img = C.act(h, rep)
            targets = [t for t in where[img] if t[0] == lname[0]]
            if len(targets) != 1:
                raise InternalCheckFailure(f"lift of {lname!r} has no unique image under {G.elements[h]!r}")
            perm[lname] = targets[0]
        action[h] = perm
    return LiftedCoverData(C, U, lifted, up, N_up, action, surjective)


def _act_nerve_simplex(L: LiftedCoverData, h, s):
    perm = L.nerve_action[h]
    return tuple(sorted((perm[x] for x in s), key=vertex_key))


def projection_nerve_map(L: LiftedCoverData, N: NerveComplex) -> SimplicialMap:
    """The map ``(W, k) -> W`` from the lifted nerve to the base nerve.

    Raises :class:`NotSimplicial` or :class:`InternalCheckFailure` if it is
    not simplicial or not ``G``-invariant.
    """
    Nu = L.nerve_up.complex
    p = SimplicialMap(Nu, N.complex, {x: x[0] for x in Nu.vertices})
    p.check()
    for h, perm in L.nerve_action.items():
        for x in Nu.vertices:
            if perm[x][0] != x[0]:
                raise InternalCheckFailure(f"nerve projection not invariant at {x!r}")
    return p


@dataclass
class OrbitBijection:
    holds: bool
    degree: int
    n_orbits: int
    n_base: int
    witness: tuple | None = None  # ("collision", rep_a, rep_b, image) | ("unhit", base simplex)


def _orbits(L: LiftedCoverData, simplices):
    seen, orbits = set(), []
    for s in simplices:
        if s in seen:
            continue
        orb = {_act_nerve_simplex(L, h, s) for h in L.nerve_action}
        seen |= orb
        orbits.append(sorted(orb, key=lambda t: tuple(vertex_key(x) for x in t)))
    return orbits


def verify_orbit_bijection(L: LiftedCoverData, N: NerveComplex, n: int) -> OrbitBijection:
    """Compare ``G``-orbits of lifted ``n``-simplices with base ``n``-simplices."""
    Nu = L.nerve_up.complex
    ups = list(Nu.simplices(n)) if n <= Nu.dimension else []
    base = list(N.complex.simplices(n)) if n <= N.complex.dimension else []
    orbits = _orbits(L, ups)
    hit = {}
    for orb in orbits:
        rep = orb[0]
        img = tuple(x[0] for x in rep)
        if img in hit:
            return OrbitBijection(False, n, len(orbits), len(base), ("collision", hit[img], rep, img))
        hit[img] = rep
    for b in base:
        if b not in hit:
            return OrbitBijection(False, n, len(orbits), len(base), ("unhit", b))
    if len(hit) != len(base):
        raise InternalCheckFailure("lifted nerve simplex projects outside the base nerve")
    return OrbitBijection(True, n, len(orbits), len(base))


@dataclass
class StabilizerReport:
    stabilizers: dict  # lifted nerve simplex -> frozenset of element indices
    fixes_vertices: bool  # (a) setwise stabilizers fix vertices for n > 0
    is_intersection: bool  # (b) simplex stabilizer = intersection of vertex stabilizers
    matches_components: bool  # (c) vertex stabilizer = setwise stabilizer of the component
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.fixes_vertices and self.is_intersection and self.matches_components


def nerve_stabilizers(L: LiftedCoverData) -> StabilizerReport:
    """Setwise stabilizers of all lifted nerve simplices, with three checks."""
    C, G = L.covering, L.covering.group
    Nu = L.nerve_up.complex
    stabs = {}
    for s in Nu.simplices():
        stabs[s] = frozenset(h for h in L.nerve_action if _act_nerve_simplex(L, h, s) == s)
    failures = []
    for s, st in stabs.items():
        if len(s) > 1:
            for h in st:
                if any(L.nerve_action[h][x] != x for x in s):
                    failures.append(("a", s, h))
        inter = frozenset(range(G.order))
        for x in s:
            inter &= stabs[(x,)]
        if inter != st:
            failures.append(("b", s))
    for x in Nu.vertices:
        comp = L.lifted_cover.elements[x].simplex_set
        direct = frozenset(
            h for h in range(G.order) if all(C.act_simplex(h, t) in comp for t in comp)
        )
        if direct != stabs[(x,)]:
            failures.append(("c", x))
    kinds = {f[0] for f in failures}
    return StabilizerReport(stabs, "a" not in kinds, "b" not in kinds, "c" not in kinds, failures)


def lifted_nerve_map(L: LiftedCoverData, nu: SimplicialMap) -> SimplicialMap:
    """Lift of a star nerve map ``nu: X -> N`` to the total space.

    ``(v, g)`` goes to the component of the preimage of ``nu(v)`` containing
    it.  Checks that the lift is simplicial and that projecting it agrees
    with ``nu`` composed with the covering projection.
    """
    C = L.covering
    if nu.source is not C.base and nu.source != C.base:
        raise ValueError("nerve map must be defined on the base of the covering")
    where = {}
    for lname, comp in L.lifted_cover.elements.items():
        for s in comp.simplex_set:
            if len(s) == 1:
                where[(s[0], lname[0])] = lname
    assign = {x: where[(x, nu(x[0]))] for x in C.total.vertices}
    lift = SimplicialMap(C.total, L.nerve_up.complex, assign)
    bad = lift.non_simplicial_witness()
    if bad is not None:
        raise NotSimplicial(f"lifted nerve map not simplicial at {list(bad)!r}")
    lift._checked = True
    for x in C.total.vertices:
        if assign[x][0] != nu(C.projection(x)):
            raise InternalCheckFailure(f"lifted nerve map incompatible at {x!r}")
    return lift
