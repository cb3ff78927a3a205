"""MatrixMarket coordinate I/O and CSV reports.

MatrixMarket is the interchange format because it natively encodes
1-based coordinate triplets with duplicates. Values are written with
17 significant digits so write/read round trips are bit-faithful.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import ParseError
from .types import CscMatrix, Dimensions, TripletList, validate_and_convert

_HEADER = "%%MatrixMarket matrix coordinate real general"

BENCH_CSV_COLUMNS = [
    "dataset_id",
    "impl",
    "threads",
    "mean_seconds",
    "min_seconds",
    "reps",
    "L",
    "M",
    "N",
    "nnz",
    "speedup_vs_serial",
]

COST_CSV_COLUMNS = [
    "label",
    "phase",
    "accesses",
    "indirect",
    "indirect_len",
    "peak_aux_words",
]


def _parse_header(line: str) -> None:
    fields = line.strip().split()
    if len(fields) != 5 or not fields[0].lower() == "%%matrixmarket":
        raise ParseError(f"not a MatrixMarket header: {line.strip()!r}", line=1)
    obj, fmt, field, symmetry = (f.lower() for f in fields[1:])
    if (obj, fmt, symmetry) != ("matrix", "coordinate", "general") or field not in (
        "real",
        "integer",
    ):
        raise ParseError(
            f"unsupported MatrixMarket type {' '.join(fields[1:])!r} "
            "(need: matrix coordinate real general)",
            line=1,
        )


def read_triplets_matrixmarket(path) -> tuple[TripletList, Dimensions]:
    """Read a coordinate file; duplicates preserved, indices 1-based."""
    with open(path) as fh:
        first = fh.readline()
        if not first:
            raise ParseError("empty file", line=1)
        _parse_header(first)
        lineno = 1
        size = None
        rows, cols, vals = [], [], []
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            fields = line.split()
            if size is None:
                if len(fields) != 3:
                    raise ParseError(f"bad size line {line!r}", line=lineno)
                try:
                    m, n, count = (int(f) for f in fields)
                except ValueError:
                    raise ParseError(f"bad size line {line!r}", line=lineno) from None
                if m < 0 or n < 0 or count < 0:
                    raise ParseError(f"negative size {line!r}", line=lineno)
                size = (m, n, count)
                continue
            if len(fields) != 3:
                raise ParseError(f"expected 'i j value', got {line!r}", line=lineno)
            try:
                rows.append(float(fields[0]))
                cols.append(float(fields[1]))
                vals.append(float(fields[2]))
            except ValueError:
                raise ParseError(f"malformed entry {line!r}", line=lineno) from None
    if size is None:
        raise ParseError("missing size line", line=lineno)
    m, n, count = size
    if len(rows) != count:
        raise ParseError(
            f"size line promised {count} entries, found {len(rows)}", line=lineno
        )
    if count == 0:
        triplets = TripletList(
            np.empty(0, dtype=np.int32),
            np.empty(0, dtype=np.int32),
            np.empty(0, dtype=np.float64),
        )
        return triplets, Dimensions(m, n)
    triplets, inferred = validate_and_convert(rows, cols, vals)
    if inferred.m > m or inferred.n > n:
        raise ParseError(
            f"entry indices reach ({inferred.m}, {inferred.n}) beyond "
            f"declared size ({m}, {n})"
        )
    return triplets, Dimensions(m, n)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_triplets_matrixmarket(t: TripletList, dims: Dimensions, path) -> None:
    with open(path, "w") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{dims.m} {dims.n} {len(t)}\n")
        for i, j, v in zip(t.ii.tolist(), t.jj.tolist(), t.sr.tolist()):
            fh.write(f"{i} {j} {_fmt(v)}\n")


def write_csc_matrixmarket(m: CscMatrix, path) -> None:
    """Write entries column-major, row-ascending (natural CSC order)."""
    jc = m.jc
    with open(path, "w") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{m.m} {m.n} {m.nnz}\n")
        for c in range(m.n):
            for k in range(int(jc[c]), int(jc[c + 1])):
                fh.write(f"{int(m.ir[k]) + 1} {c + 1} {_fmt(float(m.pr[k]))}\n")


def write_bench_csv(results, path) -> None:
    """One row per timed (dataset, implementation, threads) combination."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_CSV_COLUMNS)
        writer.writeheader()
        for r in results:
            writer.writerow({col: getattr(r, col) for col in BENCH_CSV_COLUMNS})


def write_cost_csv(labeled_reports, path) -> None:
    """Serialize CostReports: per-phase rows plus a total row each."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COST_CSV_COLUMNS)
        writer.writeheader()
        for label, report in labeled_reports:
            for phase, cost in report.phases.items():
                writer.writerow(
                    {
                        "label": label,
                        "phase": phase,
                        "accesses": cost.accesses,
                        "indirect": cost.indirect,
                        "indirect_len": cost.indirect_len,
                        "peak_aux_words": "",
                    }
                )
            writer.writerow(
                {
                    "label": label,
                    "phase": "total",
                    "accesses": report.total_accesses,
                    "indirect": report.indirect_accesses,
                    "indirect_len": report.indirect_len_accesses,
                    "peak_aux_words": report.peak_aux_words,
                }
            )
