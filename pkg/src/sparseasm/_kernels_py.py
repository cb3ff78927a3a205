"""Pure-Python (numpy) fallback kernels.

Drop-in replacements for the compiled kernels in ``_kernels``. They
reproduce the compiled results exactly, bit for bit, but lean on numpy
sorting primitives instead of element-at-a-time counting loops, so the
parallel phases gain nothing from threading under the GIL. Selected
automatically when the extension module is unavailable.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

_INDEX_MAX_F = 2147483647.0


def count_rows(ii, jr):
    """Part 1: jr[r] = number of elements with row <= r."""
    m = len(jr) - 1
    cnt = np.bincount(ii, minlength=m + 1)
    jr[:] = np.cumsum(cnt[: m + 1])


def build_rank(ii, jr, rank):
    """Part 2: stable row-sort permutation; advances jr in place."""
    rank[:] = np.argsort(ii, kind="stable")
    # shift to the advanced (unit-offset) form: slot r-1 = end of row r
    jr[:-1] = jr[1:].copy()


def _unique_pair_slots(rows, cols, ncols):
    """Column-major unique-(row, col) ids and per-column pair counts.

    Returns (slot, counts) where slot[k] is the 0-based index of
    element k's pair among the unique pairs of its column ordered by
    row, and counts[c] is the number of unique pairs in column c
    (indexed by 1-based column, slot 0 unused).
    """
    order = np.lexsort((rows, cols))
    rr, cc = rows[order], cols[order]
    new = np.empty(len(rr), dtype=bool)
    new[0] = True
    new[1:] = (rr[1:] != rr[:-1]) | (cc[1:] != cc[:-1])
    uid = np.empty(len(rr), dtype=np.int64)
    uid[order] = np.cumsum(new) - 1
    counts = np.bincount(cc[new], minlength=ncols + 1)[: ncols + 1]
    colstart = np.cumsum(counts) - counts
    return uid - colstart[cols], counts


def compress(ii, jj, rank, jr_adv, hcol, jc, irank):
    """Part 3: within-column local slots and per-column pair counts."""
    if len(ii) == 0:
        return
    slot, counts = _unique_pair_slots(ii, jj, len(jc) - 1)
    jc[1:] = counts[1:]
    irank[:] = slot


def accumulate(jj, jc, irank):
    """Part 4: prefix-sum jc; shift irank by each column's start."""
    np.cumsum(jc, out=jc)
    irank += jc[jj - 1]


def scatter(ii, sr, irank, ir, pr):
    """Final scatter; np.add.at applies in ascending input order."""
    ir[irank] = ii - 1
    np.add.at(pr, irank, sr)


def validate_chunk(raw, out, lo, hi):
    seg = raw[lo:hi]
    with np.errstate(invalid="ignore"):
        ok = (seg >= 1.0) & (seg == np.ceil(seg)) & (seg <= _INDEX_MAX_F)
    if not ok.all():
        return lo + int(np.argmin(ok)), 0
    out[lo:hi] = seg.astype(np.int32)
    return -1, int(out[lo:hi].max(initial=0))


def par_hist(ii, cnt, lo, hi):
    c = np.bincount(ii[lo:hi], minlength=len(cnt))
    cnt += c[: len(cnt)].astype(cnt.dtype)


def par_rank(ii, jrk, rank, lo, hi):
    rows = ii[lo:hi]
    if rows.size == 0:
        return
    order = np.argsort(rows, kind="stable")
    rs = rows[order]
    idx = np.arange(len(rs))
    newrun = np.empty(len(rs), dtype=bool)
    newrun[0] = True
    newrun[1:] = rs[1:] != rs[:-1]
    offs = idx - np.maximum.accumulate(np.where(newrun, idx, 0))
    rank[jrk[rs] + offs] = (lo + order).astype(rank.dtype)
    cnts = np.bincount(rows, minlength=len(jrk))
    jrk += cnts[: len(jrk)].astype(jrk.dtype)


def par_compress(ii, jj, rank, jr_end, hcol, jck, irankP, rstart, rend):
    lo, hi = int(jr_end[rstart - 1]), int(jr_end[rend])
    sub = rank[lo:hi]
    if sub.size == 0:
        return
    slot, counts = _unique_pair_slots(ii[sub], jj[sub], len(jck) - 1)
    jck += counts.astype(jck.dtype)
    irankP[lo:hi] = slot.astype(irankP.dtype)


def par_fixup(jj, rank, irankP, jcoff, lo, hi):
    irankP[lo:hi] += jcoff[jj[rank[lo:hi]]]


def par_scatter(ii, sr, rank, irankP, ir, pr, lo, hi):
    sub = rank[lo:hi]
    dest = irankP[lo:hi]
    ir[dest] = ii[sub] - 1
    np.add.at(pr, dest, sr[sub])


def copy_range(dst, src, lo, hi):
    dst[lo:hi] = src[lo:hi]
