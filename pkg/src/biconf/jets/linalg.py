"""Small dense linear algebra over jet entries.

Matrices are plain nested lists of :class:`~biconf.jets.jet.Jet`.  Sizes
are the chart dimensions (at most 8), so cubic algorithms are fine; the
cost lives inside the jet products, not the loop structure.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularMetricError
from .jet import Jet

#: pivot values smaller than this are treated as a singular matrix
_PIVOT_FLOOR = 1e-12


def values(mat) -> np.ndarray:
    """Value part of a jet matrix / vector as a float array."""
    if isinstance(mat[0], Jet):
        return np.array([e.value for e in mat])
    return np.array([[e.value for e in row] for row in mat])


def mat_vec(mat, vec) -> list[Jet]:
    n = len(mat)
    return [sum_jets([mat[i][j] * vec[j] for j in range(len(vec))])
            for i in range(n)]


def sum_jets(jets):
    out = jets[0]
    for j in jets[1:]:
        out = out + j
    return out


def mat_inv(mat) -> list[list[Jet]]:
    """Gauss-Jordan inverse with partial pivoting on jet values."""
    n = len(mat)
    jspace = mat[0][0].space
    a = [list(row) for row in mat]
    inv = [[Jet.constant(jspace, 1.0 if i == j else 0.0) for j in range(n)]
           for i in range(n)]
    scale = max(abs(e.value) for row in mat for e in row) or 1.0
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(a[r][col].value))
        if abs(a[pivot_row][col].value) < _PIVOT_FLOOR * scale:
            raise SingularMetricError(
                f"matrix numerically singular at column {col}")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        pivot_recip = a[col][col].recip()
        a[col] = [e * pivot_recip for e in a[col]]
        inv[col] = [e * pivot_recip for e in inv[col]]
        for row in range(n):
            if row == col:
                continue
            factor = a[row][col]
            if np.all(factor.coeffs == 0.0):
                continue
            a[row] = [a[row][j] - factor * a[col][j] for j in range(n)]
            inv[row] = [inv[row][j] - factor * inv[col][j] for j in range(n)]
    return inv


def maximal_minors(mat) -> list[Jet]:
    """All m x m minors of an (m+1) x m jet matrix.

    Returns ``[det(mat with row a removed) for a in range(m+1)]`` via a
    division-free subset dynamic program (expansion along columns), so
    zero-valued pivots cannot break it.
    """
    rows = len(mat)
    cols = len(mat[0])
    if rows != cols + 1:
        raise ValueError("maximal_minors expects an (m+1) x m matrix")
    jspace = mat[0][0].space
    # level[S] (bitmask over rows, popcount k) = det of the submatrix of the
    # first k columns with rows in S, in increasing row order.
    level: dict[int, Jet] = {0: Jet.constant(jspace, 1.0)}
    for col in range(cols):
        nxt: dict[int, Jet] = {}
        for mask, det in level.items():
            rank = 0  # position of the new row among those already in the mask
            for r in range(rows):
                bit = 1 << r
                if mask & bit:
                    rank += 1
                    continue
                sign = 1.0 if ((col + rank) % 2 == 0) else -1.0
                term = det * mat[r][col] * sign
                cur = nxt.get(mask | bit)
                nxt[mask | bit] = term if cur is None else cur + term
        level = nxt
    full = (1 << rows) - 1
    return [level[full ^ (1 << a)] for a in range(rows)]
