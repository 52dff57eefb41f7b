"""Truncated multivariate Taylor (jet) spaces.

A :class:`JetSpace` fixes a dimension ``dim`` and a truncation order
``order`` (at most 4) and owns the combinatorial tables that jet
arithmetic runs on:

* the graded multi-index basis (all alpha with |alpha| <= order, listed
  grade by grade, so truncating a jet to a lower order is a prefix slice);
* the truncated Leibniz convolution table used by jet multiplication;
* per-axis formal-derivative maps into the space of one order less.

Coefficients are stored one-per-multi-index in Taylor normalization,
``c_alpha = d^alpha f / alpha!``, which makes mixed-partial symmetry
structural and multiplication a plain convolution.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

#: Hard cap on the jet order.  The residual systems need fourth derivatives
#: of the immersion components and the conformal factor and nothing deeper,
#: so higher orders are rejected rather than supported.
MAX_ORDER = 4


class JetSpaceError(ValueError):
    pass


class JetSpace:
    """Basis and arithmetic tables for jets of a fixed (dim, order)."""

    def __init__(self, dim: int, order: int):
        if dim < 1:
            raise JetSpaceError(f"jet dimension must be >= 1, got {dim}")
        if not 0 <= order <= MAX_ORDER:
            raise JetSpaceError(
                f"jet order must be between 0 and {MAX_ORDER}, got {order}")
        self.dim = dim
        self.order = order

        indices: list[tuple[int, ...]] = []
        counts: list[int] = []
        for total in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(dim), total):
                alpha = [0] * dim
                for axis in combo:
                    alpha[axis] += 1
                indices.append(tuple(alpha))
            counts.append(len(indices))
        self.indices: tuple[tuple[int, ...], ...] = tuple(indices)
        #: counts[k] = number of slots with |alpha| <= k; prefix boundaries
        #: used for truncation.
        self.counts: tuple[int, ...] = tuple(counts)
        self.size = len(indices)
        self.index_of = {alpha: s for s, alpha in enumerate(indices)}
        self.factorials = np.array(
            [math.prod(math.factorial(a) for a in alpha) for alpha in indices],
            dtype=np.float64,
        )
        self._mul_table: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
        self._diff_tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"JetSpace(dim={self.dim}, order={self.order})"

    # ------------------------------------------------------------------
    # tables
    # ------------------------------------------------------------------
    @property
    def mul_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ii, jj, kk) index triples with alpha_ii + alpha_jj = alpha_kk.

        Sorted by (kk, ii, jj) so both kernel backends accumulate partial
        products in the same deterministic order.
        """
        if self._mul_table is None:
            ii, jj, kk = [], [], []
            grades = [sum(a) for a in self.indices]
            for i, alpha in enumerate(self.indices):
                gi = grades[i]
                for j, beta in enumerate(self.indices):
                    if gi + grades[j] > self.order:
                        continue
                    gamma = tuple(a + b for a, b in zip(alpha, beta))
                    ii.append(i)
                    jj.append(j)
                    kk.append(self.index_of[gamma])
            ii = np.asarray(ii, dtype=np.int32)
            jj = np.asarray(jj, dtype=np.int32)
            kk = np.asarray(kk, dtype=np.int32)
            perm = np.lexsort((jj, ii, kk))
            self._mul_table = (
                np.ascontiguousarray(ii[perm]),
                np.ascontiguousarray(jj[perm]),
                np.ascontiguousarray(kk[perm]),
            )
        return self._mul_table

    def diff_table(self, axis: int) -> tuple[np.ndarray, np.ndarray]:
        """(src, fac) arrays mapping this space onto space(dim, order-1).

        Entry t of the derivative along ``axis`` is ``fac[t] * coeffs[src[t]]``
        where t runs over the slots of the smaller space.
        """
        if self.order < 1:
            raise JetSpaceError("cannot differentiate an order-0 jet")
        if not 0 <= axis < self.dim:
            raise JetSpaceError(f"axis {axis} out of range for dim {self.dim}")
        if axis not in self._diff_tables:
            target = space(self.dim, self.order - 1)
            src = np.empty(target.size, dtype=np.int64)
            fac = np.empty(target.size, dtype=np.float64)
            for t, beta in enumerate(target.indices):
                shifted = tuple(b + 1 if a == axis else b
                                for a, b in enumerate(beta))
                src[t] = self.index_of[shifted]
                fac[t] = beta[axis] + 1
            self._diff_tables[axis] = (src, fac)
        return self._diff_tables[axis]


_SPACES: dict[tuple[int, int], JetSpace] = {}


def space(dim: int, order: int) -> JetSpace:
    """Return the cached jet space for (dim, order)."""
    key = (dim, order)
    got = _SPACES.get(key)
    if got is None:
        got = JetSpace(dim, order)
        _SPACES[key] = got
    return got
