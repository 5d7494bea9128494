"""Independent reference computations used by the tests.

Nothing here imports the package's homology code: Betti numbers come from an
integer Smith normal form of dense boundary matrices built from scratch.
"""

from __future__ import annotations

from itertools import combinations


def face_closure(facets):
    out = set()
    for f in facets:
        f = tuple(sorted(set(f), key=repr))
        for k in range(1, len(f) + 1):
            out.update(combinations(f, k))
    return out


def dense_boundary(simplices, n):
    """Integer matrix of d_n with rows (n-1)-simplices and columns n-simplices."""
    rows = sorted((s for s in simplices if len(s) == n), key=repr)
    cols = sorted((s for s in simplices if len(s) == n + 1), key=repr)
    index = {s: i for i, s in enumerate(rows)}
    m = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            m[index[s[:i] + s[i + 1:]]][j] = (-1) ** i
    return m


def smith_normal_form_diagonal(matrix):
    """Nonzero diagonal entries of the Smith normal form of an integer matrix."""
    a = [list(r) for r in matrix]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    diag = []
    t = 0
    while t < min(n_rows, n_cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            for i in range(t + 1, n_rows):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n_cols):
                q = a[t][j] // a[t][t]
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility of the rest by the pivot
                bad = next(
                    ((i, j) for i in range(t + 1, n_rows) for j in range(t + 1, n_cols) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry in row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, n_rows) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n_cols) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def betti_snf(facets):
    """Rational Betti numbers via Smith normal form ranks."""
    simplices = face_closure(facets)
    if not simplices:
        return []
    dim = max(len(s) for s in simplices) - 1
    counts = [sum(1 for s in simplices if len(s) == n + 1) for n in range(dim + 1)]
    ranks = [0] * (dim + 2)
    for n in range(1, dim + 1):
        ranks[n] = len(smith_normal_form_diagonal(dense_boundary(simplices, n)))
    return [counts[n] - ranks[n] - ranks[n + 1] for n in range(dim + 1)]


def torsion_snf(facets, n):
    """Torsion coefficients of H_{n-1} read from the diagonal of d_n."""
    simplices = face_closure(facets)
    return [d for d in smith_normal_form_diagonal(dense_boundary(simplices, n)) if d > 1]
