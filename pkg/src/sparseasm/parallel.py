"""Barrier-phased shared-memory parallel assembly.

Workers own contiguous element ranges for counting/ranking and
contiguous row ranges for the uniqueness and scatter phases. All
per-element loops are lock-free: counters are worker-private and
merged between barriers; the only mutual exclusion is the max-merge
during input validation. The output is bit-identical to the serial
path for every worker count, because no two workers ever write the
same slot and duplicate groups are summed in ascending input order.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import BadIndex
from .serial import RankArray, _PhaseClock, assemble_serial
from .types import INDEX_DTYPE, AssemblyRequest, CscMatrix, Dimensions, TripletList

DEFAULT_SERIAL_THRESHOLD = 10000


def element_range(length: int, p: int, k: int) -> tuple[int, int]:
    """Worker k's half-open slice of [0, length); Python ints, no overflow."""
    return (length * k) // p, (length * (k + 1)) // p


def row_range(m: int, p: int, k: int) -> tuple[int, int]:
    """Worker k's inclusive 1-based row range; empty when start > end."""
    return 1 + (m * k) // p, (m * (k + 1)) // p


@dataclass
class WorkerPartition:
    """Element and row ranges for p workers."""

    length: int
    m: int
    p: int

    @property
    def element_ranges(self):
        return [element_range(self.length, self.p, k) for k in range(self.p)]

    @property
    def row_ranges(self):
        return [row_range(self.m, self.p, k) for k in range(self.p)]


@dataclass
class ParallelPlan:
    """Intermediate parallel output per the permuted-inverse-rank scheme.

    irankP is indexed by rank position; composing it with rank
    reproduces the serial irank. jr_end[r] is the end offset of row r
    (equal to the serial accumulated row counter); jc is the final
    column pointer; jc_private holds the per-worker column offsets
    used by the fix-up phase.
    """

    rank: np.ndarray
    irankP: np.ndarray
    jc: np.ndarray
    jr_end: np.ndarray
    jc_private: np.ndarray
    p: int

    def serial_irank(self) -> np.ndarray:
        """Undo the rank permutation: irank[rank[pos]] = irankP[pos]."""
        irank = np.empty_like(self.irankP)
        irank[self.rank] = self.irankP
        return irank


def default_workers() -> int:
    env = os.environ.get("SPARSE_ASM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def find_max_parallel(raw, p: int, *, kernels=None):
    """Validate/convert an index array in p chunks with a locked max-merge.

    Returns (int32 array, max); raises BadIndex exactly as the serial
    validation would, reporting the earliest offending position.
    """
    K = kernels or backend.get()
    raw = np.ascontiguousarray(np.atleast_1d(np.asarray(raw, dtype=np.float64)))
    out = np.empty(len(raw), dtype=INDEX_DTYPE)
    p = max(1, min(p, max(1, len(raw))))
    bads = [-1] * p
    shared = {"max": 0}
    lock = threading.Lock()

    def work(k):
        lo, hi = element_range(len(raw), p, k)
        bad, mx = K.validate_chunk(raw, out, lo, hi)
        bads[k] = bad
        if shared["max"] < mx:
            with lock:
                if shared["max"] < mx:
                    shared["max"] = mx

    if p == 1:
        work(0)
    else:
        threads = [threading.Thread(target=work, args=(k,)) for k in range(p)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
    bad_positions = [b for b in bads if b >= 0]
    if bad_positions:
        k = min(bad_positions)
        raise BadIndex(k, float(raw[k]))
    return out, shared["max"]


def _merge_row_counters(jrP: np.ndarray, p: int, m: int) -> None:
    """Three-phase merge: per-worker sums, global row prefix, offsets.

    On entry rows 1..p of jrP hold worker histograms (indexed by row
    number). On exit jrP[k] is worker k's private start pointer per
    row and jrP[p] the global end pointer per row (jr_end).
    """
    np.cumsum(jrP[1 : p + 1], axis=0, out=jrP[1 : p + 1])
    if m:
        tot = jrP[p, 1 : m + 1]
        ends = np.cumsum(tot, dtype=np.int64).astype(jrP.dtype)
        starts = ends - tot
        jrP[0, 1 : m + 1] = starts
        if p > 1:
            jrP[1:p, 1 : m + 1] += starts
        jrP[p, 1 : m + 1] = ends
    jrP[p, 0] = 0


def _merge_col_counters(jcP: np.ndarray, p: int, n: int) -> np.ndarray:
    """Same scheme over columns; returns the final column pointer."""
    np.cumsum(jcP[1 : p + 1], axis=0, out=jcP[1 : p + 1])
    jc = np.zeros(n + 1, dtype=INDEX_DTYPE)
    if n:
        tot = jcP[p, 1:]
        ends = np.cumsum(tot, dtype=np.int64).astype(jcP.dtype)
        starts = ends - tot
        jcP[0, 1:] = starts
        if p > 1:
            jcP[1:p, 1:] += starts
        jc[1:] = ends
    return jc


def count_rows_parallel(
    t: TripletList, dims: Dimensions, p: int, *, kernels=None, tracker=None
) -> np.ndarray:
    """Parallel Part 1: returns the merged (p+1) x (M+2) row counters."""
    K = kernels or backend.get()
    jrP = np.zeros((p + 1, dims.m + 2), dtype=INDEX_DTYPE)
    if tracker:
        tracker.alloc(jrP)
    for k in range(p):
        lo, hi = element_range(len(t), p, k)
        K.par_hist(t.ii, jrP[k + 1], lo, hi)
    _merge_row_counters(jrP, p, dims.m)
    return jrP


def build_rank_parallel(t: TripletList, jrP: np.ndarray, p: int, *, kernels=None) -> RankArray:
    """Parallel Part 2; advances the worker-private pointers in jrP."""
    K = kernels or backend.get()
    rank = np.empty(len(t), dtype=INDEX_DTYPE)
    for k in range(p):
        lo, hi = element_range(len(t), p, k)
        K.par_rank(t.ii, jrP[k], rank, lo, hi)
    return RankArray(rank)


def compress_and_accumulate_parallel(
    t: TripletList,
    rank: RankArray,
    jrP: np.ndarray,
    dims: Dimensions,
    p: int,
    *,
    kernels=None,
    tracker=None,
) -> ParallelPlan:
    """Parallel Parts 3+4: positional irankP plus merged column pointer."""
    K = kernels or backend.get()
    m, n = dims.m, dims.n
    irankP = np.empty(len(t), dtype=INDEX_DTYPE)
    jcP = np.zeros((p + 1, n + 1), dtype=INDEX_DTYPE)
    if tracker:
        tracker.alloc(irankP)
        tracker.alloc(jcP)
    jr_end = jrP[p]
    for k in range(p):
        rstart, rend = row_range(m, p, k)
        if rend < rstart:
            continue
        hcol = np.zeros(n + 1, dtype=INDEX_DTYPE)
        if tracker:
            tracker.alloc(hcol)
        K.par_compress(t.ii, t.jj, rank.rank, jr_end, hcol, jcP[k + 1], irankP, rstart, rend)
        if tracker:
            tracker.free(hcol)
    jc = _merge_col_counters(jcP, p, n)
    if tracker:
        tracker.alloc(jc)
    for k in range(p):
        rstart, rend = row_range(m, p, k)
        if rend < rstart:
            continue
        lo, hi = int(jr_end[rstart - 1]), int(jr_end[rend])
        K.par_fixup(t.jj, rank.rank, irankP, jcP[k], lo, hi)
    return ParallelPlan(rank.rank, irankP, jc, jr_end, jcP, p)


def scatter_parallel(
    plan: ParallelPlan, t: TripletList, dims: Dimensions, *, kernels=None, tracker=None
) -> CscMatrix:
    """Parallel final scatter over disjoint row ranges."""
    K = kernels or backend.get()
    nnz = int(plan.jc[-1])
    if tracker:
        tracker.free(plan.jc_private)
    ir = np.empty(nnz, dtype=INDEX_DTYPE)
    pr = np.zeros(nnz, dtype=np.float64)
    if tracker:
        tracker.alloc(ir)
        tracker.alloc(pr)
    for k in range(plan.p):
        rstart, rend = row_range(dims.m, plan.p, k)
        if rend < rstart:
            continue
        lo, hi = int(plan.jr_end[rstart - 1]), int(plan.jr_end[rend])
        K.par_scatter(t.ii, t.sr, plan.rank, plan.irankP, ir, pr, lo, hi)
    return CscMatrix(plan.jc, ir, pr, dims.m, dims.n)


def _assemble_phased_sequential(t, dims, p, K, tracker, phase_times):
    clock = _PhaseClock(phase_times)
    clock.lap("pre")
    jrP = count_rows_parallel(t, dims, p, kernels=K, tracker=tracker)
    clock.lap("part1")
    rank = build_rank_parallel(t, jrP, p, kernels=K)
    clock.lap("part2")
    plan = compress_and_accumulate_parallel(
        t, rank, jrP, dims, p, kernels=K, tracker=tracker
    )
    clock.lap("part34")
    out = scatter_parallel(plan, t, dims, kernels=K, tracker=tracker)
    if tracker:
        tracker.free(jrP)
        tracker.free(plan.rank)
        tracker.free(plan.irankP)
    clock.lap("post")
    return out


def _assemble_threaded(t, dims, p, K, tracker, phase_times):
    ii, jj, sr = t.ii, t.jj, t.sr
    L, M, N = len(t), dims.m, dims.n
    jrP = np.zeros((p + 1, M + 2), dtype=INDEX_DTYPE)
    rank = np.empty(L, dtype=INDEX_DTYPE)
    irankP = np.empty(L, dtype=INDEX_DTYPE)
    jcP = np.zeros((p + 1, N + 1), dtype=INDEX_DTYPE)
    if tracker:
        for arr in (jrP, rank, irankP, jcP):
            tracker.alloc(arr)
    barrier = threading.Barrier(p)
    shared = {}
    failures = []
    tracker_lock = threading.Lock()

    def work(k):
        try:
            clock = _PhaseClock(phase_times) if k == 0 else None
            lo, hi = element_range(L, p, k)
            rstart, rend = row_range(M, p, k)
            if k == 0:
                clock.lap("pre")

            K.par_hist(ii, jrP[k + 1], lo, hi)
            barrier.wait()
            if k == 0:
                _merge_row_counters(jrP, p, M)
                clock.lap("part1")
            barrier.wait()

            K.par_rank(ii, jrP[k], rank, lo, hi)
            barrier.wait()
            if k == 0:
                clock.lap("part2")

            hcol = np.zeros(N + 1, dtype=INDEX_DTYPE)
            if tracker:
                with tracker_lock:
                    tracker.alloc(hcol)
            if rend >= rstart:
                K.par_compress(ii, jj, rank, jrP[p], hcol, jcP[k + 1], irankP, rstart, rend)
            if tracker:
                with tracker_lock:
                    tracker.free(hcol)
            del hcol
            barrier.wait()
            if k == 0:
                shared["jc"] = _merge_col_counters(jcP, p, N)
                if tracker:
                    tracker.alloc(shared["jc"])
            barrier.wait()

            if rend >= rstart:
                i0, i1 = int(jrP[p][rstart - 1]), int(jrP[p][rend])
                K.par_fixup(jj, rank, irankP, jcP[k], i0, i1)
            barrier.wait()
            if k == 0:
                if tracker:
                    tracker.free(jcP)
                nnz = int(shared["jc"][-1])
                shared["ir"] = np.empty(nnz, dtype=INDEX_DTYPE)
                shared["pr"] = np.zeros(nnz, dtype=np.float64)
                if tracker:
                    tracker.alloc(shared["ir"])
                    tracker.alloc(shared["pr"])
                clock.lap("part34")
            barrier.wait()

            if rend >= rstart:
                i0, i1 = int(jrP[p][rstart - 1]), int(jrP[p][rend])
                K.par_scatter(ii, sr, rank, irankP, shared["ir"], shared["pr"], i0, i1)
            barrier.wait()
            if k == 0:
                clock.lap("post")
        except threading.BrokenBarrierError:
            pass
        except Exception as exc:  # propagate to the caller
            failures.append(exc)
            barrier.abort()

    threads = [threading.Thread(target=work, args=(k,)) for k in range(p)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    if failures:
        raise failures[0]
    if tracker:
        tracker.free(jrP)
        tracker.free(rank)
        tracker.free(irankP)
    return CscMatrix(shared["jc"], shared["ir"], shared["pr"], M, N)


def assemble_parallel(
    req: AssemblyRequest,
    p: int | None = None,
    *,
    threshold: int = DEFAULT_SERIAL_THRESHOLD,
    kernels=None,
    tracker=None,
    phase_times=None,
) -> CscMatrix:
    """Parallel assembly; bit-identical to assemble_serial for every p.

    With p=None the worker count is taken from SPARSE_ASM_THREADS or
    the hardware, and inputs below ``threshold`` elements fall back to
    the serial path (parallel overhead dominates tiny inputs). An
    explicit p always runs the phased path with that worker count.
    """
    K = kernels or backend.get()
    dims = req.effective_dims()
    t = req.triplets
    if p is None:
        if len(t) < threshold:
            return assemble_serial(
                req, kernels=K, tracker=tracker, phase_times=phase_times
            )
        p = default_workers()
    p = max(1, int(p))
    if p == 1:
        return _assemble_phased_sequential(t, dims, p, K, tracker, phase_times)
    return _assemble_threaded(t, dims, p, K, tracker, phase_times)
