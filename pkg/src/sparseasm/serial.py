"""Serial index-based assembly: four counting-sort parts plus scatter.

Part 1 builds an accumulated row counter, Part 2 a stable row-sort
permutation (rank), Part 3 detects unique (row, col) pairs per column
with a small column cache, Part 4 prefix-sums the column pointer and
rebases irank. The final scatter writes ir/pr in ascending input
order; that order is the floating-point summation contract shared
with the parallel path and the oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import backend
from .types import INDEX_DTYPE, AssemblyRequest, CscMatrix, Dimensions, TripletList


@dataclass
class RowCounter:
    """Accumulated row counter; jr[r] = number of elements with row <= r.

    build_rank advances it in place into the shifted form where slot
    r-1 holds the end offset of row r.
    """

    jr: np.ndarray


@dataclass
class RankArray:
    """Stable row-sort permutation of the input positions."""

    rank: np.ndarray


@dataclass
class SerialPlan:
    """Intermediate output: destination slots plus column pointer.

    Before accumulate_columns, irank holds within-column local slots
    and jc per-column unique-pair counts; afterwards irank holds final
    destinations and jc the final column pointer (nnz is then set).
    """

    irank: np.ndarray
    jc: np.ndarray
    nnz: int | None = None


def count_rows(t: TripletList, dims: Dimensions, *, kernels=None) -> RowCounter:
    K = kernels or backend.get()
    jr = np.zeros(dims.m + 1, dtype=INDEX_DTYPE)
    K.count_rows(t.ii, jr)
    return RowCounter(jr)


def build_rank(t: TripletList, rc: RowCounter, *, kernels=None) -> RankArray:
    K = kernels or backend.get()
    rank = np.empty(len(t), dtype=INDEX_DTYPE)
    K.build_rank(t.ii, rc.jr, rank)
    return RankArray(rank)


def compress_columns(
    t: TripletList, rc: RowCounter, rank: RankArray, dims: Dimensions, *, kernels=None
) -> SerialPlan:
    """Part 3; rc must be the advanced counter left by build_rank."""
    K = kernels or backend.get()
    jc = np.zeros(dims.n + 1, dtype=INDEX_DTYPE)
    hcol = np.zeros(dims.n + 1, dtype=INDEX_DTYPE)
    irank = np.empty(len(t), dtype=INDEX_DTYPE)
    K.compress(t.ii, t.jj, rank.rank, rc.jr, hcol, jc, irank)
    return SerialPlan(irank, jc)


def accumulate_columns(plan: SerialPlan, t: TripletList, *, kernels=None) -> SerialPlan:
    K = kernels or backend.get()
    K.accumulate(t.jj, plan.jc, plan.irank)
    plan.nnz = int(plan.jc[-1])
    return plan


def scatter_serial(
    plan: SerialPlan, t: TripletList, dims: Dimensions, *, kernels=None
) -> CscMatrix:
    K = kernels or backend.get()
    nnz = plan.nnz if plan.nnz is not None else int(plan.jc[-1])
    ir = np.empty(nnz, dtype=INDEX_DTYPE)
    pr = np.zeros(nnz, dtype=np.float64)
    K.scatter(t.ii, t.sr, plan.irank, ir, pr)
    return CscMatrix(plan.jc, ir, pr, dims.m, dims.n)


class _PhaseClock:
    def __init__(self, sink):
        self.sink = sink
        self.t0 = time.perf_counter()

    def lap(self, name):
        if self.sink is None:
            return
        t1 = time.perf_counter()
        self.sink[name] = self.sink.get(name, 0.0) + (t1 - self.t0)
        self.t0 = t1


def assemble_serial(
    req: AssemblyRequest, *, kernels=None, tracker=None, phase_times=None
) -> CscMatrix:
    """Full serial assembly of a validated request.

    tracker, when given, receives alloc/free notifications for every
    working buffer so peak auxiliary memory can be audited;
    phase_times, when given, collects per-phase wall-clock seconds.
    """
    K = kernels or backend.get()
    clock = _PhaseClock(phase_times)
    dims = req.effective_dims()
    t = req.triplets
    L, M, N = len(t), dims.m, dims.n
    clock.lap("pre")

    jr = np.zeros(M + 1, dtype=INDEX_DTYPE)
    if tracker:
        tracker.alloc(jr)
    K.count_rows(t.ii, jr)
    clock.lap("part1")

    rank = np.empty(L, dtype=INDEX_DTYPE)
    if tracker:
        tracker.alloc(rank)
    K.build_rank(t.ii, jr, rank)
    clock.lap("part2")

    jc = np.zeros(N + 1, dtype=INDEX_DTYPE)
    hcol = np.zeros(N + 1, dtype=INDEX_DTYPE)
    irank = np.empty(L, dtype=INDEX_DTYPE)
    if tracker:
        tracker.alloc(jc)
        tracker.alloc(hcol)
        tracker.alloc(irank)
    K.compress(t.ii, t.jj, rank, jr, hcol, jc, irank)
    if tracker:
        tracker.free(hcol)
        tracker.free(rank)
        tracker.free(jr)
    del hcol, rank, jr
    clock.lap("part3")

    K.accumulate(t.jj, jc, irank)
    nnz = int(jc[-1])
    clock.lap("part4")

    ir = np.empty(nnz, dtype=INDEX_DTYPE)
    pr = np.zeros(nnz, dtype=np.float64)
    if tracker:
        tracker.alloc(ir)
        tracker.alloc(pr)
    K.scatter(t.ii, t.sr, irank, ir, pr)
    if tracker:
        tracker.free(irank)
    del irank
    clock.lap("post")
    return CscMatrix(jc, ir, pr, M, N)
