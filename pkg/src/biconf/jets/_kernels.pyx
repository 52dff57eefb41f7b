# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled jet multiplication kernel (truncated Leibniz convolution)."""


def mul_into(const int[::1] ii, const int[::1] jj, const int[::1] kk,
             const double[::1] a, const double[::1] b, double[::1] out):
    cdef Py_ssize_t t
    cdef Py_ssize_t n = ii.shape[0]
    for t in range(n):
        out[kk[t]] += a[ii[t]] * b[jj[t]]
