"""Edge-path presentations of fundamental groups and amenability verdicts.

Words are tuples of nonzero integers: letter ``k`` stands for generator
``k - 1`` and ``-k`` for its inverse.  Generators are non-tree edges
``(u, v)`` with ``u < v``; the letter for the edge traversed from ``v`` to
``u`` is the inverse.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .cover import Cover
from .errors import Disconnected, UnknownVertex
from .homology import matrix_rank
from .simplicial import SimplicialComplex, Subcomplex, connected_components, vertex_key

__all__ = [
    "GroupPresentation",
    "SubgroupImageCertificate",
    "free_reduce",
    "cyclic_reduce",
    "edge_path_presentation",
    "simplify_presentation",
    "abelianized_rank",
    "amenability_verdict",
    "pi1_image_words",
    "loop_chain",
    "generator_loop",
]


@dataclass
class GroupPresentation:
    generators: tuple  # edge symbols, in letter order
    relators: list
    basepoint: object
    spanning_tree: frozenset = field(repr=False)
    complex: SimplicialComplex | None = field(default=None, repr=False, compare=False)
    parent_tree: dict | None = field(default=None, repr=False, compare=False)
    _letters: dict | None = field(default=None, repr=False, compare=False)

    @property
    def rank(self):
        return len(self.generators)

    def letter(self, edge):
        if self._letters is None:
            self._letters = {e: i + 1 for i, e in enumerate(self.generators)}
        return self._letters[edge]


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i: j + 1])


def invert(word):
    return tuple(-x for x in reversed(word))


def _bfs_tree(K: SimplicialComplex, basepoint):
    adj = {v: [] for v in K.vertices}
    for u, v in K.simplices(1):
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort(key=vertex_key)
    parent = {basepoint: None}
    queue = deque([basepoint])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return parent


def _edge(u, v):
    return (u, v) if vertex_key(u) < vertex_key(v) else (v, u)


def edge_path_presentation(K, basepoint=None) -> GroupPresentation:
    """Edge-path presentation of ``pi_1(K, basepoint)``.

    Breadth-first spanning tree (neighbours visited in vertex order); one
    generator per non-tree edge; one relator per 2-simplex.  ``K`` may be a
    complex or a subcomplex.
    """
    if isinstance(K, Subcomplex):
        K = K.as_complex()
    if not K.vertices:
        raise Disconnected("empty complex has no fundamental group")
    if basepoint is None:
        basepoint = K.vertices[0]
    if not K.has_vertex(basepoint):
        raise UnknownVertex(basepoint)
    parent = _bfs_tree(K, basepoint)
    if len(parent) != len(K.vertices):
        raise Disconnected(f"complex has vertices unreachable from {basepoint!r}")
    tree = frozenset(_edge(v, p) for v, p in parent.items() if p is not None)
    gens = tuple(e for e in K.simplices(1) if e not in tree)
    letter = {e: i + 1 for i, e in enumerate(gens)}
    relators = []
    for a, b, c in K.simplices(2):
        w = []
        for e, sign in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
            if e in letter:
                w.append(sign * letter[e])
        relators.append(tuple(w))
    return GroupPresentation(gens, relators, basepoint, tree, K, parent)


def edge_letter(P: GroupPresentation, u, v):
    """Word (possibly empty) for traversing the edge from ``u`` to ``v``."""
    e = _edge(u, v)
    if e in P.spanning_tree:
        return ()
    k = P.letter(e)
    return (k,) if e == (u, v) else (-k,)


def simplify_presentation(P: GroupPresentation, effort: int | None = None) -> GroupPresentation:
    """Sound Tietze reductions.

    Relators are freely and cyclically reduced; a generator occurring
    exactly once in some relator is solved for and substituted everywhere
    (shortest relator first, so length-1 relators kill their generator
    outright).  Eliminated generators are dropped.  ``effort`` caps the
    number of eliminations (unbounded by default).  The generator count
    never increases; generators not involved in any relator are kept since
    they are free factors.
    """
    n = len(P.generators)
    rels: dict = {}
    uses: dict = {g: set() for g in range(1, n + 1)}
    heap = []

    def add(word):
        w = cyclic_reduce(word)
        if not w:
            return
        rid = len(rels) + len(dead_ids)
        rels[rid] = w
        for x in set(abs(y) for y in w):
            uses[x].add(rid)
        heapq.heappush(heap, (len(w), rid))

    dead_ids: set = set()
    for r in P.relators:
        add(r)
    alive = set(range(1, n + 1))
    budget = effort if effort is not None else float("inf")

    def drop(rid):
        w = rels.pop(rid)
        dead_ids.add(rid)
        for x in set(abs(y) for y in w):
            uses[x].discard(rid)

    while heap and budget > 0:
        length, rid = heapq.heappop(heap)
        w = rels.get(rid)
        if w is None or len(w) != length:
            continue
        counts: dict = {}
        for y in w:
            counts[abs(y)] = counts.get(abs(y), 0) + 1
        once = [g for g, c in counts.items() if c == 1]
        if not once:
            continue
        g = min(once)
        i = next(k for k, y in enumerate(w) if abs(y) == g)
        rotated = w[i:] + w[:i]  # g^e * rest = 1
        rest = rotated[1:]
        value = invert(rest) if rotated[0] > 0 else rest
        drop(rid)
        alive.discard(g)
        for other in list(uses[g]):
            ow = rels[other]
            new = []
            for y in ow:
                if abs(y) == g:
                    new.extend(value if y > 0 else invert(value))
                else:
                    new.append(y)
            drop(other)
            add(new)
        budget -= 1

    keep = sorted(alive)
    renum = {g: i + 1 for i, g in enumerate(keep)}
    relators = []
    seen = set()
    for rid in sorted(rels):
        w = tuple((renum[abs(y)] if y > 0 else -renum[abs(y)]) for y in rels[rid])
        if w not in seen:
            seen.add(w)
            relators.append(w)
    return GroupPresentation(
        tuple(P.generators[g - 1] for g in keep),
        relators,
        P.basepoint,
        P.spanning_tree,
        P.complex,
        P.parent_tree,
    )


def abelianized_rank(P: GroupPresentation) -> int:
    """Free rank of the abelianisation of ``P``."""
    n = len(P.generators)
    rows = []
    for w in P.relators:
        row = [0] * n
        for y in w:
            row[abs(y) - 1] += 1 if y > 0 else -1
        if any(row):
            rows.append(row)
    return n - (matrix_rank(rows) if rows else 0)


def _tree_path(parent, v):
    """Vertices from ``v`` up to the root of the BFS tree."""
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def generator_loop(P: GroupPresentation, edge):
    """Closed vertex path at the basepoint for a generator edge ``(u, v)``."""
    u, v = edge
    up = _tree_path(P.parent_tree, u)  # u ... root
    vp = _tree_path(P.parent_tree, v)  # v ... root
    return list(reversed(up)) + vp


def loop_chain(path):
    """1-chain of a closed vertex path (``simplex -> coefficient``)."""
    chain: dict = {}
    for a, b in zip(path, path[1:]):
        if a == b:
            continue
        e = _edge(a, b)
        w = chain.get(e, 0) + (1 if e == (a, b) else -1)
        if w:
            chain[e] = w
        else:
            chain.pop(e, None)
    return chain


def pi1_image_words(V, X, presentation_X=None, simplify=True):
    """Words in the generators of ``pi_1(X, x0)`` for the generators of ``pi_1(V)``.

    ``V``'s basepoint is its least vertex, ``x0`` the least vertex of ``X``.
    The conjugating path from ``x0`` runs in ``X``'s spanning tree, so it
    contributes no letters.  With ``simplify`` only generators surviving
    :func:`simplify_presentation` of ``V`` are reported.
    """
    PX = presentation_X or edge_path_presentation(X)
    PV = edge_path_presentation(V)
    if simplify:
        PV = simplify_presentation(PV)
    words = []
    for e in PV.generators:
        path = generator_loop(PV, e)
        w = []
        for a, b in zip(path, path[1:]):
            w.extend(edge_letter(PX, a, b))
        words.append(free_reduce(w))
    return words


@dataclass
class SubgroupImageCertificate:
    element_name: object
    generator_words: list
    verdict: str  # "CertifiedAmenable" | "Unknown"
    reason: str | None  # "TrivialGroup" | "CyclicGroup" | "Attested" | None
    presentation_rank: int

    @property
    def certified(self):
        return self.verdict == "CertifiedAmenable"


def amenability_verdict(U: Cover, attestations=(), with_words=True) -> list[SubgroupImageCertificate]:
    """One certificate per element, in canonical name order.

    Trivial or cyclic ``pi_1(V)`` forces an amenable image; otherwise an
    attestation is required, else the verdict is ``Unknown``.
    """
    attestations = set(attestations)
    component_of, presentations = {}, []
    if with_words:
        # words are taken in pi_1 of the component of X containing V
        for comp in connected_components(U.space):
            presentations.append(edge_path_presentation(comp))
            for v in comp.vertices:
                component_of[v] = len(presentations) - 1
    out = []
    for name in U.names:
        V = U.elements[name]
        P = simplify_presentation(edge_path_presentation(V))
        if P.rank == 0:
            verdict, reason = "CertifiedAmenable", "TrivialGroup"
        elif P.rank == 1:
            verdict, reason = "CertifiedAmenable", "CyclicGroup"
        elif name in attestations:
            verdict, reason = "CertifiedAmenable", "Attested"
        else:
            verdict, reason = "Unknown", None
        words = []
        if with_words:
            PX = presentations[component_of[V.vertices[0]]]
            for e in P.generators:
                path = generator_loop(P, e)
                w = []
                for a, b in zip(path, path[1:]):
                    w.extend(edge_letter(PX, a, b))
                words.append(free_reduce(w))
        out.append(SubgroupImageCertificate(name, words, verdict, reason, P.rank))
    return out
