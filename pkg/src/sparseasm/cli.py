"""Command-line front end: assemble, gen, verify, bench.

Exit codes: 0 success, 1 input/usage error, 2 verification mismatch.
SPARSE_ASM_THREADS provides the default worker count.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import backend, bench, mmio
from .errors import (
    BadIndex,
    DimensionTooSmall,
    LengthMismatch,
    ParseError,
    ResultMismatch,
    UnknownDataset,
)
from .instrument import measure_serial_cost, predict_parallel_cost, predict_serial_cost
from .oracle import assemble_oracle
from .parallel import assemble_parallel, default_workers
from .serial import assemble_serial
from .types import AssemblyRequest, Dimensions, prune_explicit_zeros


def _thread_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad thread list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"bad thread list {text!r}")
    return values


def cmd_assemble(args) -> int:
    triplets, dims = mmio.read_triplets_matrixmarket(args.input)
    if (args.m is None) != (args.n is None):
        print("error: --m and --n must be given together", file=sys.stderr)
        return 1
    explicit = Dimensions(args.m, args.n) if args.m is not None else dims
    req = AssemblyRequest(triplets, explicit, args.nzmax)
    t0 = time.perf_counter()
    if args.serial:
        out = assemble_serial(req)
    else:
        out = assemble_parallel(req, args.threads)
    elapsed = time.perf_counter() - t0
    if args.prune_zeros:
        out = prune_explicit_zeros(out)
    mmio.write_csc_matrixmarket(out, args.output)
    print(
        f"L={len(triplets)} M={out.m} N={out.n} nnz={out.nnz} "
        f"elapsed={elapsed:.6f}s",
        file=sys.stderr,
    )
    return 0


def cmd_gen(args) -> int:
    if args.size < 1 or args.nnz_row < 1 or args.nrep < 1:
        print("error: --size, --nnz-row and --nrep must be positive", file=sys.stderr)
        return 1
    spec = bench.DatasetSpec(args.size, args.nnz_row, args.nrep, args.seed)
    triplets = bench.gen_ransparse(spec)
    mmio.write_triplets_matrixmarket(triplets, Dimensions(spec.siz, spec.siz), args.out)
    print(f"wrote {len(triplets)} triplets to {args.out}", file=sys.stderr)
    return 0


def _verify_one(req, threads: list[int]) -> tuple[bool, str]:
    """Oracle vs serial vs parallel at each thread count; bit-exact."""
    reference = assemble_oracle(req)
    candidates = [("serial", assemble_serial(req))]
    for p in threads:
        candidates.append((f"parallel(p={p})", assemble_parallel(req, p)))
    for name, out in candidates:
        if out.same_as(reference):
            continue
        detail = f"{name} differs from oracle"
        if not np.array_equal(out.jc, reference.jc):
            c = int(np.argmax(out.jc != reference.jc))
            detail += f": first differing jc slot {c}"
        elif not np.array_equal(out.ir, reference.ir):
            k = int(np.argmax(out.ir != reference.ir))
            detail += f": first differing ir slot {k}"
        else:
            neq = out.pr.tobytes() != reference.pr.tobytes()
            k = 0
            for k in range(out.nnz):
                if out.pr[k].tobytes() != reference.pr[k].tobytes():
                    break
            detail += f": first differing pr slot {k}"
        return False, detail
    return True, f"{1 + len(candidates)} implementations agree, nnz={reference.nnz}"


def cmd_verify(args) -> int:
    threads = args.threads or [1, 2, 4, 8]
    if args.random:
        rng = np.random.default_rng(args.seed)
        for case in range(args.random):
            length = int(rng.integers(0, 5000))
            m = int(rng.integers(1, 300))
            n = int(rng.integers(1, 300))
            req = AssemblyRequest.from_raw(
                rng.integers(1, m + 1, size=length),
                rng.integers(1, n + 1, size=length),
                rng.standard_normal(length),
            )
            ok, message = _verify_one(req, threads)
            if not ok:
                print(f"case {case}: {message}", file=sys.stderr)
                return 2
        print(f"{args.random} random instances verified", file=sys.stderr)
        return 0
    if not args.input:
        print("error: need --input or --random N", file=sys.stderr)
        return 1
    triplets, dims = mmio.read_triplets_matrixmarket(args.input)
    req = AssemblyRequest(triplets, dims)
    ok, message = _verify_one(req, threads)
    print(message, file=sys.stderr)
    return 0 if ok else 2


def cmd_bench(args) -> int:
    threads = args.threads or [default_workers()]
    spec = bench.dataset_config(args.dataset, args.scale, args.seed)
    backends = args.backends.split(",") if args.backends else [None]
    impls = []
    for b in backends:
        impls.append(bench.make_impl("serial", backend_name=b))
        for p in threads:
            impls.append(bench.make_impl("parallel", threads=p, backend_name=b))
    impls.append(bench.make_impl("oracle"))
    results = bench.run_bench(spec, impls, args.reps, dataset_id=str(args.dataset))
    mmio.write_bench_csv(results, args.out)
    for r in results:
        print(
            f"{r.impl:>16} p={r.threads} mean={r.mean_seconds:.4f}s "
            f"min={r.min_seconds:.4f}s speedup={r.speedup_vs_serial:.2f}x",
            file=sys.stderr,
        )
    if args.cost_report:
        t = bench.gen_ransparse(bench.DatasetSpec(min(spec.siz, 500), spec.nnz_row, 1, spec.seed))
        req = AssemblyRequest(t)
        dims = req.effective_dims()
        measured = measure_serial_cost(req)
        nnz = results[0].nnz if results else 0
        labeled = [
            ("measured-serial-small", measured),
            (
                "predicted-serial",
                predict_serial_cost(results[0].L, results[0].M, results[0].N, nnz),
            ),
            (
                "predicted-parallel",
                predict_parallel_cost(
                    results[0].L, results[0].M, results[0].N, nnz, threads[-1]
                ),
            ),
        ]
        cost_path = args.out + ".cost.csv"
        mmio.write_cost_csv(labeled, cost_path)
        print(f"cost report written to {cost_path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparseasm",
        description="Multicore sparse assembly: triplets to CSC with duplicate summation",
    )
    parser.add_argument(
        "--backend",
        choices=backend.available(),
        help="force a kernel backend (default: compiled when available)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("assemble", help="assemble a MatrixMarket triplet file")
    pa.add_argument("--input", required=True)
    pa.add_argument("--output", required=True)
    pa.add_argument("--m", type=int)
    pa.add_argument("--n", type=int)
    pa.add_argument("--nzmax", type=int)
    pa.add_argument("--threads", type=int, default=None)
    pa.add_argument("--serial", action="store_true", help="force the serial path")
    pa.add_argument("--prune-zeros", action="store_true")
    pa.set_defaults(func=cmd_assemble)

    pg = sub.add_parser("gen", help="generate random benchmark triplets")
    pg.add_argument("--size", type=int, required=True)
    pg.add_argument("--nnz-row", type=int, required=True)
    pg.add_argument("--nrep", type=int, default=1)
    pg.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=cmd_gen)

    pv = sub.add_parser("verify", help="cross-check oracle/serial/parallel")
    pv.add_argument("--input")
    pv.add_argument("--threads", type=_thread_list)
    pv.add_argument("--random", type=int, help="verify N seeded random instances")
    pv.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    pv.set_defaults(func=cmd_verify)

    pb = sub.add_parser("bench", help="run the timing harness")
    pb.add_argument("--dataset", type=int, choices=[1, 2, 3], required=True)
    pb.add_argument("--scale", type=float, default=1.0)
    pb.add_argument("--reps", type=int, default=bench.DEFAULT_REPS)
    pb.add_argument("--threads", type=_thread_list)
    pb.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    pb.add_argument("--out", required=True)
    pb.add_argument("--cost-report", action="store_true")
    pb.add_argument(
        "--backends", help="comma list of kernel backends to compare (c,python)"
    )
    pb.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        backend.set_default(args.backend)
    try:
        return args.func(args)
    except (
        BadIndex,
        LengthMismatch,
        DimensionTooSmall,
        ParseError,
        UnknownDataset,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResultMismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
