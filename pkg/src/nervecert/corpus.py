"""Built-in instances.

The two genus-2 instances use a triangulated regular octagon with the usual
side pairing ``a b a^-1 b^-1 c d c^-1 d^-1``: sides 0/2, 1/3, 4/6 and 5/7
are glued, all corners become one vertex.  Covers are drawn in the plane by
labelling each vertex and taking, for each label, the union of the closed
stars of its vertices (see :func:`star_cover_from_labels`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cover import star_cover_from_labels
from .covering import EdgeLabeling, named_group
from .errors import UnknownCorpusName
from .simplicial import SimplicialComplex, Subcomplex, build_complex, closed_star, vertex_key

__all__ = [
    "CorpusInstance",
    "CORPUS_NAMES",
    "corpus",
    "octagon_surface",
    "torus_grid",
    "uv_sphere",
    "genus2_halves",
]

CORPUS_NAMES = ("example1", "example2", "torus_annuli", "circle_stars", "sphere_two_discs")


@dataclass
class CorpusInstance:
    name: str
    space: SimplicialComplex
    elements: dict  # name -> Subcomplex
    attestations: tuple = ()
    group: object = None  # FiniteGroupTable for the optional regular cover
    labeling: EdgeLabeling | None = None
    options: dict = field(default_factory=dict)
    positions: dict | None = field(default=None, repr=False)
    description: str = ""

    def to_document(self) -> dict:
        """The instance as an input document (see :mod:`nervecert.io`)."""
        doc = {
            "complex": [list(s) for s in self.space.maximal_simplices()],
            "cover": {
                str(n): [list(s) for s in self.elements[n].as_complex().maximal_simplices()]
                for n in sorted(self.elements, key=vertex_key)
            },
            "attest_amenable": list(self.attestations),
        }
        if self.group is not None:
            doc["regular_cover"] = {
                "group": self.group.name,
                "edge_labels": self.labeling.as_triples() if self.labeling else [],
            }
        if self.options:
            doc["options"] = dict(self.options)
        return doc


# -- genus-2 surface -------------------------------------------------------

_SIDE_PAIRS = {0: (0, 2), 2: (0, 2), 1: (1, 3), 3: (1, 3), 4: (4, 6), 6: (4, 6), 5: (5, 7), 7: (5, 7)}


def octagon_surface(m: int = 16, rings: int = 20):
    """Genus-2 surface from a polar grid on the octagon.

    ``m`` points per side, ``rings`` concentric rings.  Returns ``(X, pos)``
    where ``pos`` gives each vertex a position in the octagon (glued
    boundary vertices keep the position where they were first met).
    """
    n = 8 * m
    corners = [(math.cos(math.radians(45 * k)), math.sin(math.radians(45 * k))) for k in range(9)]

    def boundary_point(j):
        e, i = divmod(j, m)
        t = i / m
        (x0, y0), (x1, y1) = corners[e], corners[e + 1]
        return (x0 + (x1 - x0) * t, y0 + (y1 - y0) * t)

    def boundary_id(j):
        e, i = divmod(j % n, m)
        if i == 0:
            return ("corner",)
        a, _ = _SIDE_PAIRS[e]
        # the second side of each pair runs backwards
        return ("side", a, i if e == a else m - i)

    ids, pos = {}, {}

    def vid(key, p):
        if key not in ids:
            ids[key] = len(ids)
            pos[ids[key]] = p
        return ids[key]

    centre = vid(("centre",), (0.0, 0.0))
    ring = {}
    for k in range(1, rings + 1):
        for j in range(n):
            bx, by = boundary_point(j)
            p = (bx * k / rings, by * k / rings)
            ring[k, j] = vid(boundary_id(j) if k == rings else ("ring", k, j), p)
    tris = [(centre, ring[1, j], ring[1, (j + 1) % n]) for j in range(n)]
    for k in range(1, rings):
        for j in range(n):
            a, b = ring[k, j], ring[k, (j + 1) % n]
            c, d = ring[k + 1, j], ring[k + 1, (j + 1) % n]
            tris.append((a, c, d))
            tris.append((a, b, d))
    return build_complex(tris), pos


def _example1_label(p, r_d1=0.2, r_d2=0.1, width=0.06, dist=2.0, rho=1.5):
    x, y = p
    corners = [(math.cos(math.radians(45 * k)), math.sin(math.radians(45 * k))) for k in range(8)]
    if min(math.hypot(x - a, y - b) for a, b in corners) < r_d2:
        return "D2"
    if math.hypot(x, y) < r_d1:
        return "D1"
    c1 = (dist * math.cos(math.radians(67.5)), dist * math.sin(math.radians(67.5)))
    d1 = math.hypot(x - c1[0], y - c1[1])
    d2 = math.hypot(x + c1[0], y + c1[1])
    # thin bands along two circles centred outside the octagon cut out
    # the handles H1 (around sides 1/3) and H2 (around sides 5/7)
    if abs(d1 - rho) < width:
        return "H1"
    if abs(d2 - rho) < width:
        return "H2"
    if d1 < rho:
        return "U2"
    if d2 < rho:
        return "U4"
    theta = math.degrees(math.atan2(y, x)) % 360
    if theta < 135:
        return "U1"
    if theta < 180:
        return "U2"
    if theta < 315:
        return "U3"
    return "U4"


def _example2_upper(p, dist=2.0, rho=1.5, shift=0.2, a1=55.0, a2=170.0):
    x, y = p
    c = (dist * math.cos(math.radians(112.5)), dist * math.sin(math.radians(112.5)))
    if math.hypot(x - c[0], y - c[1]) < rho:
        return "B"
    phi0 = math.atan2(math.sin(math.radians(a1)), math.cos(math.radians(a1)) - shift)
    if math.atan2(y, x - shift) <= phi0 + 1e-12:
        return "B"
    phi1 = math.atan2(math.sin(math.radians(a2)), math.cos(math.radians(a2)) + shift)
    if math.atan2(y, x + shift) >= phi1 - 1e-12:
        return "B"
    return "A"


def _example2_label(p):
    x, y = p
    if y >= -1e-12:
        return _example2_upper(p)
    return {"A": "C", "B": "D"}[_example2_upper((-x, -y))]


def _labelled_instance(name, X, pos, label, **kw):
    labels = {v: label(pos[v]) for v in X.vertices}
    return CorpusInstance(name, X, star_cover_from_labels(X, labels), positions=pos, **kw)


def _example1():
    X, pos = octagon_surface(16, 20)
    return _labelled_instance(
        "example1", X, pos, _example1_label,
        description="genus-2 surface, 8-element convex cover with nerve ~ S1 v S2 v S1",
    )


def _example2():
    X, pos = octagon_surface(16, 20)
    inst = _labelled_instance(
        "example2", X, pos, _example2_label,
        description="genus-2 surface, 4-element cover with nerve the full 3-simplex; A and B meet in two pieces",
    )
    inst.attestations = tuple(sorted(inst.elements))
    return inst


def genus2_halves():
    """Genus-2 surface cut along a separating curve into two one-holed tori.

    Neither half has a cyclic fundamental group, so both verdicts are
    ``Unknown`` unless attested.  Not part of the named corpus.
    """
    X, pos = octagon_surface(8, 10)
    return _labelled_instance(
        "genus2_halves", X, pos, lambda p: "upper" if p[1] >= -1e-12 else "lower",
        description="genus-2 surface split into two one-holed tori",
    )


# -- small instances --------------------------------------------------------

def torus_grid(a: int, b: int) -> SimplicialComplex:
    """Torus from an ``a x b`` grid; vertex ``i*b + j`` sits at column i, row j."""

    def v(i, j):
        return (i % a) * b + (j % b)

    tris = []
    for i in range(a):
        for j in range(b):
            tris.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            tris.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return build_complex(tris)


def _torus_annuli():
    a, b = 12, 4
    X = torus_grid(a, b)
    labels = {v: f"A{(v // b) // 3}" for v in X.vertices}
    G = named_group("Z2")
    # Z/2 nontrivial on the row direction, i.e. on the core of every annulus
    cut = {}
    for u, w in X.simplices(1):
        if {u % b, w % b} == {0, b - 1}:
            cut[(u, w)] = 1
    return CorpusInstance(
        "torus_annuli", X, star_cover_from_labels(X, labels),
        group=G, labeling=EdgeLabeling(X, G, cut),
        description="torus covered by 4 annuli; nerve is a 4-cycle",
    )


def _circle_stars():
    X = build_complex([(i, (i + 1) % 6) for i in range(6)])
    elements = {f"S{v}": closed_star(X, v) for v in (0, 2, 4)}
    G = named_group("Z3")
    return CorpusInstance(
        "circle_stars", X, elements,
        group=G, labeling=EdgeLabeling(X, G, {(5, 0): 1}),
        description="hexagon covered by the closed stars of vertices 0, 2, 4; nerve is a 3-cycle",
    )


def uv_sphere(n: int = 8, rings: int = 5) -> SimplicialComplex:
    """Sphere with poles ``'N'``/``'S'`` and ``rings`` latitude circles of ``n`` vertices."""

    def v(r, j):
        return r * n + (j % n)

    tris = [("N", v(0, j), v(0, j + 1)) for j in range(n)]
    tris += [("S", v(rings - 1, j), v(rings - 1, j + 1)) for j in range(n)]
    for r in range(rings - 1):
        for j in range(n):
            tris.append((v(r, j), v(r + 1, j), v(r + 1, j + 1)))
            tris.append((v(r, j), v(r, j + 1), v(r + 1, j + 1)))
    return build_complex(tris)


def _sphere_two_discs():
    n, rings = 8, 5
    X = uv_sphere(n, rings)

    def label(v):
        if v in ("N", "S"):
            return v
        return "N" if v // n < rings // 2 else "S"

    return CorpusInstance(
        "sphere_two_discs", X, star_cover_from_labels(X, {v: label(v) for v in X.vertices}),
        description="sphere covered by two discs meeting in an annulus",
    )


_BUILDERS = {
    "example1": _example1,
    "example2": _example2,
    "torus_annuli": _torus_annuli,
    "circle_stars": _circle_stars,
    "sphere_two_discs": _sphere_two_discs,
}


def corpus(name: str) -> CorpusInstance:
    """Build the named instance (fresh objects on every call)."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownCorpusName(f"unknown corpus instance {name!r}; choose from {', '.join(CORPUS_NAMES)}") from None
