"""Access counting and peak-allocation accounting.

Counting convention: every distinct array element touched in a loop
iteration is one access; an access is *indirect* when its subscript is
data-dependent rather than (affine in) the loop induction variable.
Under this rule the indirect counters match the closed-form
predictions exactly, while grand totals agree up to a small O(M+N)
slack stemming from prefix-loop bookkeeping.

Memory is accounted in integer words, with one float64 value counting
as two words.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InstrumentationUnavailable
from .types import AssemblyRequest

_enabled = True


def set_instrumentation(flag: bool) -> None:
    """Config gate for the counting build; the hot paths never count."""
    global _enabled
    _enabled = bool(flag)


def instrumentation_enabled() -> bool:
    return _enabled


def array_words(arr: np.ndarray) -> int:
    """Integer-word equivalent of an array (float64 = 2 words)."""
    return arr.size * 2 if arr.dtype == np.float64 else arr.size


class AllocationTracker:
    """Running word count of live buffers; records the peak.

    Not internally synchronized; concurrent callers must serialize
    their alloc/free pairs (the threaded driver does).
    """

    def __init__(self):
        self.current = 0
        self.peak = 0

    def alloc(self, what) -> None:
        self.current += what if isinstance(what, int) else array_words(what)
        if self.current > self.peak:
            self.peak = self.current

    def free(self, what) -> None:
        self.current -= what if isinstance(what, int) else array_words(what)


@dataclass(frozen=True)
class PhaseCost:
    accesses: int
    indirect: int
    indirect_len: int  # indirect accesses into input-length arrays


@dataclass
class CostReport:
    """Access counters and allocation figures, totals plus per-part."""

    total_accesses: int
    indirect_accesses: int
    indirect_len_accesses: int
    peak_aux_words: int
    phases: dict[str, PhaseCost] = field(default_factory=dict)
    alloc_candidates: tuple[int, ...] = ()

    def __post_init__(self):
        assert all(
            c >= 0
            for ph in self.phases.values()
            for c in (ph.accesses, ph.indirect, ph.indirect_len)
        )
        if self.phases:
            assert self.total_accesses == sum(p.accesses for p in self.phases.values())
            assert self.indirect_accesses == sum(p.indirect for p in self.phases.values())
            assert self.indirect_len_accesses == sum(
                p.indirect_len for p in self.phases.values()
            )


def serial_alloc_candidates(length: int, m: int, n: int, nnz: int) -> tuple[int, int]:
    """The two serial peak-allocation candidates in integer words.

    The first peaks right after the column cache is allocated, the
    second once the output (3*nnz words) coexists with irank.
    """
    s1 = 2 * n + 1 + m + 1 + 2 * length
    s2 = n + 1 + 3 * nnz + length
    return s1, s2


def parallel_alloc_candidate(length: int, m: int, n: int, nnz: int, p: int) -> int:
    """Parallel peak: output plus both rank arrays plus p+1 row counters."""
    return n + 1 + (m + 1) * (p + 1) + 3 * nnz + 2 * length


def predict_serial_cost(length: int, m: int, n: int, nnz: int) -> CostReport:
    """Closed-form serial access counts and allocation candidates."""
    phases = {
        "part1": PhaseCost(2 * length + m, length, 0),
        "part2": PhaseCost(3 * length, 2 * length, length),
        "part3": PhaseCost(5 * length + m, 4 * length, 2 * length),
        "part4": PhaseCost(3 * length + n, length, 0),
    }
    s1, s2 = serial_alloc_candidates(length, m, n, nnz)
    return CostReport(
        total_accesses=13 * length + 2 * m + n,
        indirect_accesses=8 * length,
        indirect_len_accesses=3 * length,
        peak_aux_words=max(s1, s2),
        phases=phases,
        alloc_candidates=(s1, s2),
    )


def predict_parallel_cost(length: int, m: int, n: int, nnz: int, p: int) -> CostReport:
    """Closed-form parallel access counts (p workers) and allocation."""
    phases = {
        "part1": PhaseCost(2 * length + 3 * m * p, length, 0),
        "part2": PhaseCost(3 * length, 2 * length, length),
        "part3": PhaseCost(5 * length + m, 3 * length, 2 * length),
        "part4": PhaseCost(4 * length + 3 * n * p, 2 * length, length),
    }
    s3 = parallel_alloc_candidate(length, m, n, nnz, p)
    return CostReport(
        total_accesses=14 * length + 3 * (m + n) * p + m,
        indirect_accesses=8 * length,
        indirect_len_accesses=4 * length,
        peak_aux_words=s3,
        phases=phases,
        alloc_candidates=(s3,),
    )


def total_tolerance(m: int, n: int) -> int:
    """Accepted slack between measured and predicted grand totals."""
    return 2 * (m + n) + 16


def measure_serial_cost(req: AssemblyRequest) -> CostReport:
    """Instrumented serial run; counts accesses while executing.

    This is a plain-Python mirror of the serial algorithm, so it is
    only meant for modest input sizes.
    """
    if not _enabled:
        raise InstrumentationUnavailable("instrumentation is disabled")
    dims = req.effective_dims()
    t = req.triplets
    length, m, n = len(t), dims.m, dims.n
    ii = t.ii.tolist()
    jj = t.jj.tolist()

    tracker = AllocationTracker()

    # Part 1: count and accumulate rows
    jr = [0] * (m + 1)
    tracker.alloc(m + 1)
    a1 = i1 = 0
    for i in range(length):
        a1 += 2  # ii[i]; jr[ii[i]] read-modify-write
        i1 += 1
        jr[ii[i]] += 1
    for r in range(2, m + 1):
        a1 += 2
        jr[r] += jr[r - 1]

    # Part 2: rank scatter, advancing jr (slot r-1 = end of row r)
    rank = [0] * length
    tracker.alloc(length)
    a2 = 0
    for i in range(length):
        a2 += 3  # ii[i]; jr slot; rank write
        r = ii[i]
        rank[jr[r - 1]] = i
        jr[r - 1] += 1
    i2, l2 = 2 * length, length  # jr slot + rank write; rank is input-length

    # Part 3: uniqueness with the column cache
    jc = [0] * (n + 1)
    hcol = [0] * (n + 1)
    irank = [0] * length
    tracker.alloc(n + 1)
    tracker.alloc(n)  # hcol counts n words
    tracker.alloc(length)
    a3 = i3 = l3 = 0
    i = 0
    for row in range(1, m + 1):
        a3 += 1  # per-row loop bound read of jr
        while i < jr[row - 1]:
            a3 += 5  # rank[i]; jj[ix]; hcol[col]; jc[col]; irank[ix]
            i3 += 4
            l3 += 2
            ix = rank[i]
            col = jj[ix]
            if hcol[col] < row:
                hcol[col] = row
                jc[col] += 1
            irank[ix] = jc[col] - 1
            i += 1
    tracker.free(n)  # hcol
    tracker.free(length)  # rank
    tracker.free(m + 1)  # jr
    del hcol, rank, jr

    # Part 4: accumulate columns, rebase irank
    a4 = i4 = 0
    for c in range(2, n + 1):
        a4 += 2
        jc[c] += jc[c - 1]
    for i in range(length):
        a4 += 3  # jj[i]; jc[jj[i]-1]; irank[i] read-modify-write
        i4 += 1
        irank[i] += jc[jj[i] - 1]
    nnz = jc[n] if n else 0

    # final output: nnz index words + nnz values (2 words each)
    tracker.alloc(3 * nnz)
    tracker.free(length)  # irank

    phases = {
        "part1": PhaseCost(a1, i1, 0),
        "part2": PhaseCost(a2, i2, l2),
        "part3": PhaseCost(a3, i3, l3),
        "part4": PhaseCost(a4, i4, 0),
    }
    return CostReport(
        total_accesses=a1 + a2 + a3 + a4,
        indirect_accesses=i1 + i2 + i3 + i4,
        indirect_len_accesses=l2 + l3,
        peak_aux_words=tracker.peak,
        phases=phases,
        alloc_candidates=serial_alloc_candidates(length, m, n, nnz),
    )
