# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot-loop kernels (serial and per-worker parallel phases).

All parallel-phase kernels release the GIL so Python threads can
overlap. Index conventions match the pure-Python fallback in
``_kernels_py``: row/column arrays are 1-based, counter arrays are
indexed directly by row/column number with slot 0 unused.
"""

from libc.math cimport ceil

import numpy as np

BACKEND = "c"

ctypedef int idx_t


def count_rows(int[::1] ii, int[::1] jr):
    """Part 1: histogram rows into jr[1..M], then prefix sum."""
    cdef Py_ssize_t i, L = ii.shape[0]
    cdef Py_ssize_t r, M = jr.shape[0] - 1
    with nogil:
        for i in range(L):
            jr[ii[i]] += 1
        for r in range(2, M + 1):
            jr[r] += jr[r - 1]


def build_rank(int[::1] ii, int[::1] jr, int[::1] rank):
    """Part 2: stable counting-sort scatter; advances jr in place.

    On entry jr[r] is the accumulated count of rows <= r; on exit the
    slot at r-1 holds the end offset of row r (the paper's unit-offset
    shift).
    """
    cdef Py_ssize_t i, L = ii.shape[0]
    cdef idx_t r
    with nogil:
        for i in range(L):
            r = ii[i]
            rank[jr[r - 1]] = <idx_t>i
            jr[r - 1] += 1


def compress(int[::1] ii, int[::1] jj, int[::1] rank, int[::1] jr_adv,
             int[::1] hcol, int[::1] jc, int[::1] irank):
    """Part 3: per-column uniqueness via the hcol row cache.

    jr_adv is the advanced counter from build_rank (end of row r at
    slot r-1). jc receives per-column unique-pair counts at jc[1..N];
    irank receives within-column local slots, indexed by original
    input position.
    """
    cdef Py_ssize_t M = jr_adv.shape[0] - 1
    cdef Py_ssize_t i = 0
    cdef idx_t row, ix, col
    with nogil:
        for row in range(1, M + 1):
            while i < jr_adv[row - 1]:
                ix = rank[i]
                col = jj[ix]
                if hcol[col] < row:
                    hcol[col] = row
                    jc[col] += 1
                irank[ix] = jc[col] - 1
                i += 1


def accumulate(int[::1] jj, int[::1] jc, int[::1] irank):
    """Part 4: prefix-sum jc and add each column's start to irank."""
    cdef Py_ssize_t i, L = irank.shape[0]
    cdef Py_ssize_t c, N = jc.shape[0] - 1
    with nogil:
        for c in range(2, N + 1):
            jc[c] += jc[c - 1]
        for i in range(L):
            irank[i] += jc[jj[i] - 1]


def scatter(int[::1] ii, double[::1] sr, int[::1] irank,
            int[::1] ir, double[::1] pr):
    """Final scatter, ascending input order (the summation contract)."""
    cdef Py_ssize_t i, L = ii.shape[0]
    with nogil:
        for i in range(L):
            ir[irank[i]] = ii[i] - 1
            pr[irank[i]] += sr[i]


def validate_chunk(double[::1] raw, int[::1] out, Py_ssize_t lo, Py_ssize_t hi):
    """Validate and convert raw[lo:hi] to int32 in out.

    Returns (first_bad, local_max); first_bad is -1 when the whole
    chunk is valid.
    """
    cdef Py_ssize_t i, bad = -1
    cdef double v
    cdef idx_t mx = 0
    with nogil:
        for i in range(lo, hi):
            v = raw[i]
            if not (v >= 1.0) or v != ceil(v) or v > 2147483647.0:
                bad = i
                break
            out[i] = <idx_t>v
            if out[i] > mx:
                mx = out[i]
    return bad, mx


def par_hist(int[::1] ii, int[::1] cnt, Py_ssize_t lo, Py_ssize_t hi):
    """Parallel Part 1a: worker-local row histogram over [lo, hi)."""
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            cnt[ii[i]] += 1


def par_rank(int[::1] ii, int[::1] jrk, int[::1] rank,
             Py_ssize_t lo, Py_ssize_t hi):
    """Parallel Part 2: scatter through the worker-private row pointer."""
    cdef Py_ssize_t i
    cdef idx_t r
    with nogil:
        for i in range(lo, hi):
            r = ii[i]
            rank[jrk[r]] = <idx_t>i
            jrk[r] += 1


def par_compress(int[::1] ii, int[::1] jj, int[::1] rank, int[::1] jr_end,
                 int[::1] hcol, int[::1] jck, int[::1] irankP,
                 Py_ssize_t rstart, Py_ssize_t rend):
    """Parallel Part 3 over rows [rstart, rend], writing irankP
    positionally (indexed by rank position, not original index)."""
    cdef Py_ssize_t i = jr_end[rstart - 1]
    cdef Py_ssize_t row
    cdef idx_t col
    with nogil:
        for row in range(rstart, rend + 1):
            while i < jr_end[row]:
                col = jj[rank[i]]
                if hcol[col] < row:
                    hcol[col] = <idx_t>row
                    jck[col] += 1
                irankP[i] = jck[col] - 1
                i += 1


def par_fixup(int[::1] jj, int[::1] rank, int[::1] irankP,
              int[::1] jcoff, Py_ssize_t lo, Py_ssize_t hi):
    """Parallel Part 4 fix-up: add worker-private column offsets."""
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            irankP[i] += jcoff[jj[rank[i]]]


def par_scatter(int[::1] ii, double[::1] sr, int[::1] rank, int[::1] irankP,
                int[::1] ir, double[::1] pr, Py_ssize_t lo, Py_ssize_t hi):
    """Parallel final scatter over the worker's rank-position range."""
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            ir[irankP[i]] = ii[rank[i]] - 1
            pr[irankP[i]] += sr[rank[i]]


def copy_range(double[::1] dst, double[::1] src, Py_ssize_t lo, Py_ssize_t hi):
    """Plain element copy; the bandwidth-benchmark kernel."""
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            dst[i] = src[i]
