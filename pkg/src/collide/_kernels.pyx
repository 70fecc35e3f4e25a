# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: alias-table construction/draws and two-qubit gates.

Semantics mirror ``collide._kernels_py`` exactly (same arithmetic, same
order) so that either backend produces identical results from the same
random stream.
"""

import numpy as np


def build_alias(probs):
    """Walker/Vose alias table; returns (prob_row, alias_row)."""
    cdef double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t k = p.shape[0]
    cdef double total = 0.0
    cdef Py_ssize_t j
    for j in range(k):
        total += p[j]

    scaled_arr = np.empty(k, dtype=np.float64)
    prob_arr = np.ones(k, dtype=np.float64)
    alias_arr = np.arange(k, dtype=np.int64)
    cdef double[::1] scaled = scaled_arr
    cdef double[::1] prob_row = prob_arr
    cdef long long[::1] alias_row = alias_arr

    cdef double factor = k / total
    for j in range(k):
        scaled[j] = p[j] * factor

    # LIFO stacks, pushed in ascending j, matching the fallback.
    small_arr = np.empty(k, dtype=np.int64)
    large_arr = np.empty(k, dtype=np.int64)
    cdef long long[::1] small = small_arr
    cdef long long[::1] large = large_arr
    cdef Py_ssize_t n_small = 0, n_large = 0
    for j in range(k):
        if scaled[j] < 1.0:
            small[n_small] = j
            n_small += 1
        else:
            large[n_large] = j
            n_large += 1

    cdef Py_ssize_t l, g
    while n_small > 0 and n_large > 0:
        n_small -= 1
        l = small[n_small]
        n_large -= 1
        g = large[n_large]
        prob_row[l] = scaled[l]
        alias_row[l] = g
        scaled[g] = (scaled[g] + scaled[l]) - 1.0
        if scaled[g] < 1.0:
            small[n_small] = g
            n_small += 1
        else:
            large[n_large] = g
            n_large += 1
    return prob_arr, alias_arr


def alias_pick(prob_row, alias_row, cells, accepts):
    """Map (cell, accept) uniform variates to outcomes."""
    cdef double[::1] prob = prob_row
    cdef long long[::1] alias = alias_row
    cdef unsigned long long[::1] c = cells
    cdef double[::1] u = accepts
    cdef Py_ssize_t n = c.shape[0]
    out_arr = np.empty(n, dtype=np.uint64)
    cdef unsigned long long[::1] out = out_arr
    cdef Py_ssize_t i, cell
    for i in range(n):
        cell = <Py_ssize_t> c[i]
        if u[i] < prob[cell]:
            out[i] = cell
        else:
            out[i] = <unsigned long long> alias[cell]
    return out_arr


def alias_pick_count(prob_row, alias_row, cells, accepts, counts):
    """Fused pick + histogram into the counts accumulator."""
    cdef double[::1] prob = prob_row
    cdef long long[::1] alias = alias_row
    cdef unsigned long long[::1] c = cells
    cdef double[::1] u = accepts
    cdef long long[::1] acc = counts
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t i, cell
    for i in range(n):
        cell = <Py_ssize_t> c[i]
        if u[i] < prob[cell]:
            acc[cell] += 1
        else:
            acc[<Py_ssize_t> alias[cell]] += 1


def apply_gate(psi, gate, qa, qb):
    """Apply a 4x4 unitary to qubits (qa, qb) of a statevector, in place.

    Gate basis index is 2*bit(qa) + bit(qb).
    """
    cdef double complex[::1] s = psi
    cdef double complex[:, ::1] u = gate
    cdef Py_ssize_t a = qa, b = qb
    cdef Py_ssize_t lo = a if a < b else b
    cdef Py_ssize_t hi = b if a < b else a
    cdef Py_ssize_t n_groups = s.shape[0] >> 2
    cdef Py_ssize_t mask_lo = (<Py_ssize_t> 1 << lo) - 1
    cdef Py_ssize_t mask_mid = ((<Py_ssize_t> 1 << (hi - 1)) - 1) >> lo
    cdef Py_ssize_t bit_a = <Py_ssize_t> 1 << a
    cdef Py_ssize_t bit_b = <Py_ssize_t> 1 << b

    cdef double complex u00 = u[0, 0], u01 = u[0, 1], u02 = u[0, 2], u03 = u[0, 3]
    cdef double complex u10 = u[1, 0], u11 = u[1, 1], u12 = u[1, 2], u13 = u[1, 3]
    cdef double complex u20 = u[2, 0], u21 = u[2, 1], u22 = u[2, 2], u23 = u[2, 3]
    cdef double complex u30 = u[3, 0], u31 = u[3, 1], u32 = u[3, 2], u33 = u[3, 3]

    cdef Py_ssize_t k, base, i00, i01, i10, i11
    cdef double complex a0, a1, a2, a3
    for k in range(n_groups):
        base = ((k >> (hi - 1)) << (hi + 1)) | (((k >> lo) & mask_mid) << (lo + 1)) | (k & mask_lo)
        i00 = base
        i01 = base | bit_b
        i10 = base | bit_a
        i11 = i10 | bit_b
        a0 = s[i00]
        a1 = s[i01]
        a2 = s[i10]
        a3 = s[i11]
        s[i00] = u00 * a0 + u01 * a1 + u02 * a2 + u03 * a3
        s[i01] = u10 * a0 + u11 * a1 + u12 * a2 + u13 * a3
        s[i10] = u20 * a0 + u21 * a1 + u22 * a2 + u23 * a3
        s[i11] = u30 * a0 + u31 * a1 + u32 * a2 + u33 * a3
