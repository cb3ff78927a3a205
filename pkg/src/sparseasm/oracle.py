"""Sort-based reference assembly used as ground truth.

Deliberately shares no code with the counting-sort paths: a stable
lexicographic sort by (column, row) followed by a run merge. Duplicate
groups are summed in ascending original input order, the same
floating-point contract as the main paths, so outputs are bit-identical.
Complexity is O(L log L).
"""

from __future__ import annotations

import numpy as np

from .types import INDEX_DTYPE, AssemblyRequest, CscMatrix


def assemble_oracle(req: AssemblyRequest) -> CscMatrix:
    dims = req.effective_dims()
    t = req.triplets
    n = dims.n
    if len(t) == 0:
        return CscMatrix(
            np.zeros(n + 1, dtype=INDEX_DTYPE),
            np.empty(0, dtype=INDEX_DTYPE),
            np.empty(0, dtype=np.float64),
            dims.m,
            n,
        )
    order = np.lexsort((t.ii, t.jj))  # by column, then row; stable
    rows = t.ii[order]
    cols = t.jj[order]
    vals = t.sr[order]
    first = np.empty(len(rows), dtype=bool)
    first[0] = True
    first[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
    group = np.cumsum(first) - 1
    nnz = int(group[-1]) + 1
    pr = np.zeros(nnz, dtype=np.float64)
    # in-order accumulation: within a group the stable sort preserved
    # the original input order
    np.add.at(pr, group, vals)
    ir = (rows[first] - 1).astype(INDEX_DTYPE)
    jc = np.zeros(n + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(cols[first], minlength=n + 1)[1:], out=jc[1:])
    return CscMatrix(jc, ir, pr, dims.m, n)
