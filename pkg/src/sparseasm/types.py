"""Domain types and input validation for sparse assembly.

Index arrays are 1-based on input (``ii``/``jj``) and 0-based in the
assembled matrix (``ir``); column pointers follow the usual CSC
convention ``jc[0] = 0``, ``jc[n] = nnz``. Indices and counters are
32-bit signed, which caps both the triplet count and nnz at 2**31 - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadIndex, DimensionTooSmall, LengthMismatch

INDEX_DTYPE = np.int32
VALUE_DTYPE = np.float64
_INDEX_MAX = np.iinfo(INDEX_DTYPE).max


@dataclass
class Dimensions:
    """Row and column count of the target matrix."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError(f"negative dimensions {self.m}x{self.n}")


@dataclass
class TripletList:
    """Raw unordered (row, column, value) input, 1-based indices."""

    ii: np.ndarray
    jj: np.ndarray
    sr: np.ndarray

    def __post_init__(self):
        if not (len(self.ii) == len(self.jj) == len(self.sr)):
            raise LengthMismatch(
                f"triplet arrays of lengths {len(self.ii)}, "
                f"{len(self.jj)}, {len(self.sr)}"
            )

    def __len__(self):
        return len(self.ii)


@dataclass
class CscMatrix:
    """Column-compressed matrix: jc (len n+1), ir and pr (len nnz)."""

    jc: np.ndarray
    ir: np.ndarray
    pr: np.ndarray
    m: int
    n: int

    @property
    def nnz(self) -> int:
        return len(self.ir)

    def same_as(self, other: "CscMatrix") -> bool:
        """Bit-exact equality, including value bit patterns (NaN-safe)."""
        return (
            self.m == other.m
            and self.n == other.n
            and np.array_equal(self.jc, other.jc)
            and np.array_equal(self.ir, other.ir)
            and self.pr.tobytes() == other.pr.tobytes()
        )


@dataclass
class AssemblyRequest:
    """Assembly job: validated triplets plus optional explicit shape.

    ``capacity_hint`` mirrors the nzmax argument of the classic
    sparse() signature; it is an allocation hint only and never changes
    the result.
    """

    triplets: TripletList
    dims: Dimensions | None = None
    capacity_hint: int | None = None
    value_mode: str = "vector"  # "scalar" when a length-1 value was broadcast
    inferred_dims: Dimensions | None = field(default=None, repr=False)

    @classmethod
    def from_raw(cls, raw_i, raw_j, raw_s, m=None, n=None, nzmax=None):
        value_mode = "scalar" if np.size(raw_s) == 1 and np.size(raw_i) != 1 else "vector"
        triplets, inferred = validate_and_convert(raw_i, raw_j, raw_s)
        if (m is None) != (n is None):
            raise LengthMismatch("explicit dimensions require both m and n")
        dims = Dimensions(m, n) if m is not None else None
        return cls(triplets, dims, nzmax, value_mode, inferred)

    def effective_dims(self) -> Dimensions:
        """Explicit dims when given (checked), else inferred maxima."""
        inferred = self.inferred_dims
        if inferred is None:
            t = self.triplets
            inferred = Dimensions(
                int(t.ii.max(initial=0)), int(t.jj.max(initial=0))
            )
            self.inferred_dims = inferred
        if self.dims is None:
            return inferred
        if inferred.m > self.dims.m or inferred.n > self.dims.n:
            raise DimensionTooSmall(
                f"indices reach ({inferred.m}, {inferred.n}) but dimensions "
                f"are ({self.dims.m}, {self.dims.n})"
            )
        return self.dims


def _convert_index_array(raw, what: str) -> tuple[np.ndarray, int]:
    """Validate one 1-based index array; returns (int32 array, max)."""
    arr = np.asarray(raw)
    if arr.dtype.kind in "iu":
        bad = (arr < 1) | (arr > _INDEX_MAX)
        if bad.any():
            k = int(np.argmax(bad))
            raise BadIndex(k, arr[k])
        out = arr.astype(INDEX_DTYPE)
    else:
        arr = arr.astype(VALUE_DTYPE, copy=False)
        with np.errstate(invalid="ignore"):
            ok = (arr >= 1.0) & (arr == np.ceil(arr)) & (arr <= _INDEX_MAX)
        if not ok.all():
            k = int(np.argmin(ok))
            raise BadIndex(k, float(arr[k]))
        out = arr.astype(INDEX_DTYPE)
    return out, int(out.max(initial=0))


def validate_and_convert(raw_i, raw_j, raw_s) -> tuple[TripletList, Dimensions]:
    """Check and convert raw index/value arrays into a TripletList.

    The dimensions are inferred as the largest row and column index.
    A length-1 value array is broadcast over the index length.
    """
    raw_i = np.atleast_1d(np.asarray(raw_i))
    raw_j = np.atleast_1d(np.asarray(raw_j))
    raw_s = np.atleast_1d(np.asarray(raw_s, dtype=VALUE_DTYPE))
    if len(raw_i) != len(raw_j):
        raise LengthMismatch(
            f"index arrays of lengths {len(raw_i)} and {len(raw_j)}"
        )
    length = len(raw_i)
    if len(raw_s) == 1 and length != 1:
        raw_s = np.full(length, raw_s[0], dtype=VALUE_DTYPE)
    elif len(raw_s) != length:
        raise LengthMismatch(
            f"value array of length {len(raw_s)} vs index length {length}"
        )
    ii, max_i = _convert_index_array(raw_i, "row")
    jj, max_j = _convert_index_array(raw_j, "column")
    return TripletList(ii, jj, raw_s.astype(VALUE_DTYPE, copy=False)), Dimensions(
        max_i, max_j
    )


def csc_validate(m: CscMatrix) -> list[str]:
    """Structural check; returns a list of violations (empty = valid)."""
    violations = []
    jc, ir, pr = m.jc, m.ir, m.pr
    if len(jc) != m.n + 1:
        violations.append(f"jc length {len(jc)} != n+1 = {m.n + 1}")
        return violations
    if len(ir) != len(pr):
        violations.append(f"ir length {len(ir)} != pr length {len(pr)}")
    if m.n >= 0 and len(jc) and jc[0] != 0:
        violations.append(f"jc[0] = {jc[0]} != 0")
    if jc[-1] != len(ir):
        violations.append(f"jc[n] = {jc[-1]} != nnz = {len(ir)}")
    dif = np.diff(jc)
    if (dif < 0).any():
        c = int(np.argmax(dif < 0))
        violations.append(f"non-decreasing jc violated at column {c}")
        return violations
    if len(ir):
        if ir.min() < 0 or ir.max() >= m.m:
            k = int(np.argmax((ir < 0) | (ir >= m.m)))
            violations.append(f"row index ir[{k}] = {ir[k]} outside [0, {m.m})")
        # strictly increasing rows within each column: row diffs must be
        # positive except at column boundaries
        if len(ir) > 1:
            boundary = np.zeros(len(ir), dtype=bool)
            boundary[jc[1:-1][jc[1:-1] < len(ir)]] = True
            nondec = np.flatnonzero((np.diff(ir) <= 0) & ~boundary[1:])
            if len(nondec):
                k = int(nondec[0])
                violations.append(
                    f"strictly increasing rows violated at slot {k + 1}"
                )
    return violations


def prune_explicit_zeros(m: CscMatrix) -> CscMatrix:
    """Drop entries stored as exactly 0.0 (Matlab-style post-pass)."""
    keep = m.pr != 0.0
    if keep.all():
        return CscMatrix(m.jc.copy(), m.ir.copy(), m.pr.copy(), m.m, m.n)
    cols = np.repeat(np.arange(m.n, dtype=np.int64), np.diff(m.jc))
    counts = np.bincount(cols[keep], minlength=m.n)
    jc = np.zeros(m.n + 1, dtype=INDEX_DTYPE)
    np.cumsum(counts, out=jc[1:])
    return CscMatrix(jc, m.ir[keep], m.pr[keep], m.m, m.n)
