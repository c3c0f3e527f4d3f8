# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank kernel over a prime field with p < 2**31.

Entries are stored as uint32. Row updates use Shoup multiplication: for a
fixed multiplier g the quotient floor(g * 2**32 / p) is computed once per
row, after which every entry needs only 32x32->64 multiplies, which the
compiler turns into SIMD code.
"""
from libc.stdint cimport uint32_t, int64_t
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    #include <stddef.h>

    static inline uint32_t _shoup_pre(uint32_t g, uint32_t p) {
        return (uint32_t)((((uint64_t)g) << 32) / p);
    }

    /* row[j] = g * row[j] mod p for j in [start, stop) */
    static void _scale_row(uint32_t *restrict row, ptrdiff_t start, ptrdiff_t stop,
                           uint32_t g, uint32_t p) {
        const uint32_t gq = _shoup_pre(g, p);
        for (ptrdiff_t j = start; j < stop; ++j) {
            uint32_t b = row[j];
            uint32_t q = (uint32_t)(((uint64_t)gq * b) >> 32);
            uint32_t t = g * b - q * p;
            t = t >= p ? t - p : t;
            row[j] = t;
        }
    }

    /* dst[j] = dst[j] + g * src[j] mod p for j in [start, stop) */
    static void _axpy_row(uint32_t *restrict dst, const uint32_t *restrict src,
                          ptrdiff_t start, ptrdiff_t stop, uint32_t g, uint32_t p) {
        const uint32_t gq = _shoup_pre(g, p);
        for (ptrdiff_t j = start; j < stop; ++j) {
            uint32_t b = src[j];
            uint32_t q = (uint32_t)(((uint64_t)gq * b) >> 32);
            uint32_t t = g * b - q * p;
            t = t >= p ? t - p : t;
            t += dst[j];
            t = t >= p ? t - p : t;
            dst[j] = t;
        }
    }
    """
    void _scale_row(uint32_t* row, Py_ssize_t start, Py_ssize_t stop,
                    uint32_t g, uint32_t p) nogil
    void _axpy_row(uint32_t* dst, const uint32_t* src, Py_ssize_t start,
                   Py_ssize_t stop, uint32_t g, uint32_t p) nogil


cdef inline uint32_t _inv_mod(uint32_t a, uint32_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, q, tmp
    cdef int64_t r = p, newr = a
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return <uint32_t>t


cdef inline Py_ssize_t _first_nonzero(const uint32_t* row, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(n):
        if row[j] != 0:
            return j
    return -1


def rank_inplace(cnp.ndarray[cnp.uint32_t, ndim=2, mode="c"] a, uint32_t p,
                 Py_ssize_t stop_at=-1, Py_ssize_t block=0):
    """Rank of ``a`` over GF(p); ``a`` is overwritten.

    Entries must already lie in [0, p) and p must be below 2**31.
    Elimination stops once ``stop_at`` pivots are found (if >= 0).

    Rows are reduced in blocks against the pivot rows found so far, each
    pivot row being applied to the whole block before the next one. A block
    stays in cache while pivot rows stream past it once, instead of the full
    trailing matrix being swept once per pivot. ``block`` overrides the
    block height (default: about 1 MiB of rows).
    """
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    if m == 0 or n == 0 or stop_at == 0:
        return 0
    if block <= 0:
        block = max(4, min(64, (1 << 20) // (4 * n)))
    cdef uint32_t** piv_rows = <uint32_t**>malloc(m * sizeof(uint32_t*))
    cdef Py_ssize_t* piv_cols = <Py_ssize_t*>malloc(m * sizeof(Py_ssize_t))
    if piv_rows == NULL or piv_cols == NULL:
        free(piv_rows)
        free(piv_cols)
        raise MemoryError()
    cdef uint32_t* base = <uint32_t*>a.data
    cdef Py_ssize_t r = 0, lo, hi, i, j, c, old
    cdef uint32_t* row
    cdef uint32_t f
    with nogil:
        lo = 0
        while lo < m and r != stop_at:
            hi = min(lo + block, m)
            old = r
            # existing pivots, each applied to every row of the block
            for j in range(old):
                c = piv_cols[j]
                for i in range(lo, hi):
                    row = base + i * n
                    f = row[c]
                    if f != 0:
                        _axpy_row(row, piv_rows[j], c + 1, n, p - f, p)
                        row[c] = 0
            # rows of the block in turn, against pivots found inside the block
            for i in range(lo, hi):
                row = base + i * n
                for j in range(old, r):
                    c = piv_cols[j]
                    f = row[c]
                    if f != 0:
                        _axpy_row(row, piv_rows[j], c + 1, n, p - f, p)
                        row[c] = 0
                c = _first_nonzero(row, n)
                if c < 0:
                    continue
                _scale_row(row, c + 1, n, _inv_mod(row[c], p), p)
                row[c] = 1
                piv_rows[r] = row
                piv_cols[r] = c
                r += 1
                if r == stop_at:
                    break
            lo = hi
    free(piv_rows)
    free(piv_cols)
    return r
