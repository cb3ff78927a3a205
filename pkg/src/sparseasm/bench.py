"""Benchmark data generator and timing harness.

The generator follows the random-structure recipe used for the three
standard datasets: every row draws a fixed number of uniformly random
columns, the whole block is repeated, and one global permutation
shuffles the result; all values are 1.0. Timing uses a monotonic
clock, one untimed warm-up run, and the arithmetic mean over the
repetitions. Outputs of all timed implementations are cross-checked
for bit-identity before any timing happens.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import ResultMismatch
from .oracle import assemble_oracle
from .parallel import assemble_parallel, element_range
from .serial import assemble_serial
from .types import AssemblyRequest, TripletList

DEFAULT_SEED = 20151023
DEFAULT_REPS = 40

_DATASETS = {
    1: (10_000, 50, 5),
    2: (50_000, 50, 1),
    3: (50_000, 10, 5),
}


@dataclass
class DatasetSpec:
    """Generator parameters: matrix size, nonzeros per row, repetition."""

    siz: int
    nnz_row: int
    nrep: int
    seed: int = DEFAULT_SEED

    @property
    def length(self) -> int:
        return self.siz * self.nnz_row * self.nrep


def dataset_config(ds_id: int, scale: float = 1.0, seed: int = DEFAULT_SEED) -> DatasetSpec:
    """Standard datasets 1-3; scale shrinks the matrix size linearly."""
    from .errors import UnknownDataset

    if ds_id not in _DATASETS:
        raise UnknownDataset(f"dataset id {ds_id} not in {sorted(_DATASETS)}")
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale {scale} outside (0, 1]")
    siz, nnz_row, nrep = _DATASETS[ds_id]
    return DatasetSpec(max(1, round(siz * scale)), nnz_row, nrep, seed)


def gen_ransparse(spec: DatasetSpec) -> TripletList:
    """Random benchmark triplets; fully reproducible per seed."""
    if spec.siz < 1 or spec.nnz_row < 1 or spec.nrep < 1:
        raise ValueError(f"non-positive generator parameters {spec}")
    rng = np.random.default_rng(spec.seed)
    block = spec.siz * spec.nnz_row
    rows = np.tile(np.arange(1, spec.siz + 1, dtype=np.int32), spec.nnz_row)
    cols = rng.integers(1, spec.siz + 1, size=block, dtype=np.int32)
    rows = np.tile(rows, spec.nrep)
    cols = np.tile(cols, spec.nrep)
    perm = rng.permutation(len(rows))
    return TripletList(
        np.ascontiguousarray(rows[perm]),
        np.ascontiguousarray(cols[perm]),
        np.ones(len(rows), dtype=np.float64),
    )


def expected_nnz(siz: int, nnz_row: int) -> float:
    """Expected distinct columns per row times rows (binomial model)."""
    return siz * siz * (1.0 - (1.0 - 1.0 / siz) ** nnz_row)


@dataclass
class BenchResult:
    dataset_id: str
    impl: str
    threads: int
    mean_seconds: float
    min_seconds: float
    reps: int
    L: int
    M: int
    N: int
    nnz: int
    speedup_vs_serial: float | None = None
    phase_means: dict = field(default_factory=dict)


@dataclass
class Impl:
    """A timed implementation: name, thread count, and a runner."""

    name: str
    threads: int
    run: callable  # (req, phase_times) -> CscMatrix


def make_impl(kind: str, threads: int = 1, backend_name: str | None = None) -> Impl:
    K = backend.get(backend_name)
    suffix = f"-{K.BACKEND}" if backend_name else ""
    if kind == "serial":
        return Impl(
            f"serial{suffix}",
            1,
            lambda req, pt=None: assemble_serial(req, kernels=K, phase_times=pt),
        )
    if kind == "parallel":
        return Impl(
            f"parallel{suffix}",
            threads,
            lambda req, pt=None: assemble_parallel(
                req, threads, kernels=K, phase_times=pt
            ),
        )
    if kind == "oracle":
        return Impl("oracle", 1, lambda req, pt=None: assemble_oracle(req))
    raise ValueError(f"unknown implementation kind {kind!r}")


def run_bench(
    spec: DatasetSpec,
    impls: list[Impl],
    reps: int = DEFAULT_REPS,
    dataset_id: str = "custom",
) -> list[BenchResult]:
    """Cross-check all implementations, then time each one.

    Every implementation gets one untimed warm-up run followed by
    ``reps`` timed runs; reported are the arithmetic mean and the
    minimum, plus mean per-phase breakdowns where available.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    t = gen_ransparse(spec)
    req = AssemblyRequest(t)
    dims = req.effective_dims()

    reference = None
    for impl in impls:
        out = impl.run(req)
        if reference is None:
            reference = (impl.name, out)
        elif not reference[1].same_as(out):
            raise ResultMismatch(
                f"{impl.name} output differs from {reference[0]} "
                f"(nnz {out.nnz} vs {reference[1].nnz})"
            )
    nnz = reference[1].nnz if reference else 0

    results = []
    serial_mean = None
    for impl in impls:
        impl.run(req)  # warm-up, untimed
        times = []
        phase_acc: dict[str, float] = {}
        for _ in range(reps):
            phases: dict[str, float] = {}
            t0 = time.perf_counter()
            impl.run(req, phases)
            times.append(time.perf_counter() - t0)
            for key, val in phases.items():
                phase_acc[key] = phase_acc.get(key, 0.0) + val
        mean = sum(times) / len(times)
        if impl.name.startswith("serial") and serial_mean is None:
            serial_mean = mean
        results.append(
            BenchResult(
                dataset_id=dataset_id,
                impl=impl.name,
                threads=impl.threads,
                mean_seconds=mean,
                min_seconds=min(times),
                reps=reps,
                L=len(t),
                M=dims.m,
                N=dims.n,
                nnz=nnz,
                phase_means={k: v / reps for k, v in phase_acc.items()},
            )
        )
    if serial_mean is not None:
        for r in results:
            r.speedup_vs_serial = serial_mean / r.mean_seconds
    return results


def stream_copy_bandwidth(n: int, p: int, reps: int = 3, *, kernels=None) -> float:
    """Parallel-copy speedup over single-worker copy of n float64s.

    The memory-bound ceiling: assembly speedups should sit in the same
    ballpark since both streams through large arrays.
    """
    import threading

    K = kernels or backend.get()
    src = np.arange(n, dtype=np.float64)
    dst = np.empty(n, dtype=np.float64)

    def copy_with(workers: int) -> float:
        best = float("inf")
        for _ in range(reps + 1):  # first pass doubles as warm-up
            t0 = time.perf_counter()
            if workers == 1:
                K.copy_range(dst, src, 0, n)
            else:
                threads = [
                    threading.Thread(
                        target=K.copy_range, args=(dst, src, *element_range(n, workers, k))
                    )
                    for k in range(workers)
                ]
                for th in threads:
                    th.start()
                for th in threads:
                    th.join()
            best = min(best, time.perf_counter() - t0)
        return best

    t_serial = copy_with(1)
    t_parallel = copy_with(max(1, p))
    if not np.array_equal(dst, src):
        raise ResultMismatch("stream copy produced a corrupted destination")
    return t_serial / t_parallel
