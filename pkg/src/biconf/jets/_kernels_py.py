"""Pure-numpy fallback for the jet multiplication kernel.

Same contract as the compiled version in ``_kernels.pyx``: accumulate
``a[ii[t]] * b[jj[t]]`` into ``out[kk[t]]`` over the whole table.  The
table is sorted by ``kk`` and ``np.bincount`` sums each bucket in input
order, so the accumulation order matches the compiled loop.
"""

import numpy as np


def mul_into(ii, jj, kk, a, b, out):
    out += np.bincount(kk, weights=a[ii] * b[jj], minlength=out.shape[0])
