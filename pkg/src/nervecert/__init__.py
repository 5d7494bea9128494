"""Certificates for amenable covers of finite simplicial complexes.

Checks the hypotheses of the amenable-cover vanishing theorems on a cover
by subcomplexes (connected elements, convexity, amenable fundamental-group
images, multiplicity), builds nerves, nerve maps and lifts along finite
regular coverings, and reports which comparison maps provably vanish.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cover import Cover, is_convex, multiplicity, nerve, validate_cover  # noqa: E402
from .homology import betti_numbers, induced_map_homology  # noqa: E402
from .simplicial import (  # noqa: E402
    SimplicialComplex,
    SimplicialMap,
    Subcomplex,
    barycentric_subdivision,
    build_complex,
    subcomplex,
)

__all__ = [
    "__version__",
    "SimplicialComplex",
    "Subcomplex",
    "SimplicialMap",
    "build_complex",
    "subcomplex",
    "barycentric_subdivision",
    "Cover",
    "validate_cover",
    "multiplicity",
    "nerve",
    "is_convex",
    "betti_numbers",
    "induced_map_homology",
]
