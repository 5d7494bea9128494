"""Exact simplicial homology over the rationals.

Chains are sparse mappings ``simplex -> coefficient``.  Ranks and cycle
bases come from an integer, fraction-free column reduction; coordinates of
a cycle in a homology basis are computed with :class:`fractions.Fraction`.

Pivoting convention: every reduced column is keyed by its *last* nonzero
row (largest simplex index in canonical order).  With this convention the
cycles left over after reducing ``d_n``, minus those paired with a pivot of
``d_{n+1}``, are a basis of homology (the usual persistence argument), and
the whole computation is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import InternalCheckFailure
from .simplicial import SimplicialComplex, vertex_key

__all__ = [
    "SparseMatrix",
    "ChainComplexData",
    "HomologySummary",
    "InducedMapMatrix",
    "boundary_matrix",
    "boundary_of",
    "chain_complex",
    "betti_numbers",
    "homology_basis",
    "homology_summary",
    "homology_coordinates",
    "is_boundary",
    "induced_map_homology",
    "matrix_rank",
    "matmul",
]


class SparseMatrix:
    """Sparse rational matrix stored column-wise."""

    def __init__(self, n_rows, n_cols, columns=None, row_labels=None, col_labels=None):
        self.shape = (n_rows, n_cols)
        self.columns = columns if columns is not None else [dict() for _ in range(n_cols)]
        self.row_labels = row_labels
        self.col_labels = col_labels

    def __getitem__(self, ij):
        i, j = ij
        return Fraction(self.columns[j].get(i, 0))

    def to_dense(self):
        n, m = self.shape
        rows = [[Fraction(0)] * m for _ in range(n)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                rows[i][j] = Fraction(x)
        return rows

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for col in other.columns:
            acc: dict = {}
            for k, y in col.items():
                for i, x in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + x * y
            cols.append({i: v for i, v in acc.items() if v != 0})
        return SparseMatrix(self.shape[0], other.shape[1], cols, self.row_labels, other.col_labels)

    def is_zero(self):
        return all(not c for c in self.columns)

    def __repr__(self):
        nnz = sum(len(c) for c in self.columns)
        return f"SparseMatrix(shape={self.shape}, nnz={nnz})"


def _boundary_columns(K: SimplicialComplex, n: int, row_index=None):
    if row_index is None:
        row_index = {s: i for i, s in enumerate(K.simplices(n - 1))}
    cols = []
    for s in K.simplices(n):
        col = {}
        for i in range(len(s)):
            col[row_index[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
        cols.append(col)
    return cols


def boundary_of(simplex):
    """Boundary of a single oriented simplex as a chain."""
    return {simplex[:i] + simplex[i + 1:]: (-1 if i % 2 else 1) for i in range(len(simplex))} if len(simplex) > 1 else {}


def boundary_matrix(K: SimplicialComplex, n: int) -> SparseMatrix:
    """Matrix of ``d_n : C_n -> C_{n-1}`` in the canonical simplex bases."""
    if n < 1:
        raise ValueError("boundary_matrix needs n >= 1")
    rows = K.simplices(n - 1)
    cols = K.simplices(n)
    return SparseMatrix(len(rows), len(cols), _boundary_columns(K, n), rows, cols)


@dataclass
class ChainComplexData:
    """Simplex bases and boundary matrices of ``K`` in every degree."""

    bases: list
    boundaries: dict

    def check_d_squared(self):
        for n in range(2, len(self.bases)):
            if not (self.boundaries[n - 1] @ self.boundaries[n]).is_zero():
                return False
        return True


def chain_complex(K: SimplicialComplex) -> ChainComplexData:
    bases = [K.simplices(n) for n in range(K.dimension + 1)]
    return ChainComplexData(bases, {n: boundary_matrix(K, n) for n in range(1, K.dimension + 1)})


# -- integer column reduction ------------------------------------------------


def _content(vals):
    g = 0
    for x in vals:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def _axpy(a, x, b, y):
    """Return ``a*x - b*y`` for sparse integer vectors."""
    out = {i: a * v for i, v in x.items()} if a != 1 else dict(x)
    for i, v in y.items():
        w = out.get(i, 0) - b * v
        if w:
            out[i] = w
        else:
            out.pop(i, None)
    return out


class _Reduction:
    """Column reduction of one boundary matrix, optionally tracking ``V``.

    ``pivots`` maps a pivot row to (reduced column, V column).  Columns
    that reduce to zero yield integer cycles.
    """

    def __init__(self, columns, track=True, skip=()):
        self.pivots: dict = {}
        self.pivot_of_col: dict = {}
        self.zero_cols: dict = {}
        skip = set(skip)
        for j, col in enumerate(columns):
            if j in skip:
                continue
            r = dict(col)
            v = {j: 1} if track else None
            while r:
                low = max(r)
                hit = self.pivots.get(low)
                if hit is None:
                    break
                pr, pv, _ = hit
                a, b = pr[low], r[low]
                g = gcd(a, b)
                a, b = a // g, b // g
                if a < 0:
                    a, b = -a, -b
                r = _axpy(a, r, b, pr)
                if track:
                    v = _axpy(a, v, b, pv)
                    c = _content(list(r.values()) + list(v.values()))
                else:
                    c = _content(r.values())
                if c > 1:
                    r = {i: x // c for i, x in r.items()}
                    if track:
                        v = {i: x // c for i, x in v.items()}
            if r:
                self.pivots[max(r)] = (r, v, j)
                self.pivot_of_col[j] = max(r)
            else:
                self.zero_cols[j] = v

    @property
    def rank(self):
        return len(self.pivots)


class _DegreeData:
    """Homology of one degree: basis cycles and an echelon for coordinates."""

    def __init__(self, simplices, cycles, pivot_cols):
        self.simplices = simplices
        self.index = {s: i for i, s in enumerate(simplices)}
        self.cycles = cycles  # list of integer sparse vectors over self.simplices
        # last nonzero index -> (vector, basis position or None)
        self.table = {}
        for vec in pivot_cols:
            self.table[max(vec)] = (vec, None)
        for k, z in enumerate(cycles):
            self.table[max(z)] = (z, k)

    def coordinates(self, chain):
        """Coordinates of a cycle (indexed sparse vector) in the basis, or None."""
        c = {i: Fraction(x) for i, x in chain.items() if x}
        out = [Fraction(0)] * len(self.cycles)
        while c:
            low = max(c)
            hit = self.table.get(low)
            if hit is None:
                return None
            vec, pos = hit
            f = c[low] / vec[low]
            for i, x in vec.items():
                w = c.get(i, 0) - f * x
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
            if pos is not None:
                out[pos] += f
        return out


class _Homology:
    def __init__(self, K: SimplicialComplex):
        self.K = K
        self._ranks: dict = {}
        self._reductions: dict = {}
        self._degrees: dict = {}

    def _reduce(self, n, track):
        """Reduction of ``d_n`` (n >= 1), reusing clearing from ``d_{n+1}``."""
        cached = self._reductions.get(n)
        if cached is not None and (cached[1] or not track):
            return cached[0]
        K = self.K
        cols = _boundary_columns(K, n)
        skip = ()
        if n + 1 <= K.dimension:
            # clearing: n-simplices that are pivots of d_{n+1} bound, so
            # their columns in d_n reduce to zero and carry no new cycle
            skip = self._reduce(n + 1, track=False).pivots.keys()
        red = _Reduction(cols, track=track, skip=skip)
        self._reductions[n] = (red, track)
        return red

    def rank(self, n):
        if n < 1 or n > self.K.dimension:
            return 0
        if n not in self._ranks:
            red = self._reduce(n, track=False)
            # cleared columns were skipped; they would have been zero
            self._ranks[n] = red.rank
        return self._ranks[n]

    def betti(self):
        K = self.K
        return [
            K.n_simplices(n) - self.rank(n) - self.rank(n + 1) for n in range(K.dimension + 1)
        ]

    def degree(self, n) -> _DegreeData:
        if n in self._degrees:
            return self._degrees[n]
        K = self.K
        simplices = K.simplices(n)
        if n > K.dimension or n < 0:
            data = _DegreeData([], [], [])
            self._degrees[n] = data
            return data
        if n + 1 <= K.dimension:
            above = self._reduce(n + 1, track=False)
            bounds = [r for (r, _, _) in above.pivots.values()]
            paired = set(above.pivots)
        else:
            bounds, paired = [], set()
        if n == 0:
            candidates = [(j, {j: 1}) for j in range(len(simplices))]
        else:
            red = self._reduce(n, track=True)
            candidates = sorted(red.zero_cols.items())
        cycles = [v for j, v in candidates if j not in paired]
        data = _DegreeData(simplices, cycles, bounds)
        self._degrees[n] = data
        return data


def _homology(K: SimplicialComplex) -> _Homology:
    h = K._cache.get("homology")
    if h is None:
        h = _Homology(K)
        K._cache["homology"] = h
    return h


def betti_numbers(K: SimplicialComplex) -> list[int]:
    """Rational Betti numbers, one per degree ``0..dim K``."""
    return _homology(K).betti()


def _to_chain(data: _DegreeData, vec):
    return {data.simplices[i]: Fraction(x) for i, x in sorted(vec.items())}


def homology_basis(K: SimplicialComplex, n: int) -> list[dict]:
    """Cycles representing a basis of ``H_n(K; Q)``, as ``simplex -> Fraction`` maps."""
    data = _homology(K).degree(n)
    return [_to_chain(data, z) for z in data.cycles]


@dataclass
class HomologySummary:
    betti: list
    cycle_basis: list = field(repr=False)


def homology_summary(K: SimplicialComplex) -> HomologySummary:
    return HomologySummary(
        betti_numbers(K), [homology_basis(K, n) for n in range(K.dimension + 1)]
    )


def _index_chain(data: _DegreeData, chain):
    out = {}
    for s, x in chain.items():
        if x:
            out[data.index[s]] = x
    return out


def homology_coordinates(K: SimplicialComplex, n: int, chain):
    """Coordinates of the class of ``chain`` in :func:`homology_basis`.

    Returns ``None`` when ``chain`` is not a cycle.
    """
    data = _homology(K).degree(n)
    if n > 0:
        bd: dict = {}
        for s, x in chain.items():
            for f, sign in boundary_of(s).items():
                w = bd.get(f, 0) + sign * x
                if w:
                    bd[f] = w
                else:
                    bd.pop(f, None)
        if bd:
            return None
    return data.coordinates(_index_chain(data, chain))


def is_boundary(K: SimplicialComplex, n: int, chain) -> bool:
    coords = homology_coordinates(K, n, chain)
    return coords is not None and not any(coords)


# -- small dense helpers -----------------------------------------------------


def matrix_rank(rows) -> int:
    """Exact rank of a dense matrix given as a list of rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    n_cols = len(m[0])
    rank = 0
    for c in range(n_cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / p
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def matmul(a, b):
    if not a or not b:
        inner = len(b)
        cols = len(b[0]) if b else 0
        return [[Fraction(0)] * cols for _ in range(len(a))] if inner == 0 else []
    return [
        [sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


@dataclass
class InducedMapMatrix:
    """Matrix of ``H_n(f)`` in the bases of :func:`homology_basis`.

    Column ``j`` holds the coordinates of the image of source basis cycle
    ``j``.
    """

    degree: int
    matrix: list
    rank: int


def push_forward_chain(f, chain):
    """Chain-level image under a simplicial map; degenerate simplices vanish."""
    out: dict = {}
    assign = f.vertex_assignment
    for s, x in chain.items():
        img = [assign[v] for v in s]
        if len(set(img)) < len(img):
            continue
        order = sorted(range(len(img)), key=lambda i: vertex_key(img[i]))
        sign = _perm_sign(order)
        t = tuple(img[i] for i in order)
        w = out.get(t, 0) + sign * x
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def _perm_sign(order):
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def induced_map_homology(f, n: int) -> InducedMapMatrix:
    """Matrix and rank of ``H_n(f; Q)`` for a simplicial map ``f``."""
    f.check()
    src = homology_basis(f.source, n)
    n_target = len(homology_basis(f.target, n))
    cols = []
    for z in src:
        coords = homology_coordinates(f.target, n, push_forward_chain(f, z))
        if coords is None:
            raise InternalCheckFailure("image of a cycle is not a cycle")
        cols.append(coords)
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(n_target)]
    return InducedMapMatrix(n, matrix, matrix_rank(matrix) if matrix and src else 0)
