"""Multicore sparse assembly: raw triplets to CSC with duplicate summation.

The core is an index-based distribution-counting sort, available as a
serial path and a barrier-phased lock-free parallel path that produce
bit-identical output. Hot kernels are compiled (Cython) with an
automatic numpy fallback; ``sparseasm.backend.name()`` reports which
one is active.
"""

from . import backend
from .errors import (
    BadIndex,
    DimensionTooSmall,
    InstrumentationUnavailable,
    LengthMismatch,
    ParseError,
    ResultMismatch,
    UnknownDataset,
)
from .oracle import assemble_oracle
from .parallel import assemble_parallel, find_max_parallel
from .serial import assemble_serial
from .types import (
    AssemblyRequest,
    CscMatrix,
    Dimensions,
    TripletList,
    csc_validate,
    prune_explicit_zeros,
    validate_and_convert,
)

__version__ = "0.1.0"


def assemble(i, j, s, m=None, n=None, nzmax=None, threads=None) -> CscMatrix:
    """One-call assembly mirroring the classic sparse(i,j,s,m,n,nzmax).

    Repeated (i, j) pairs are summed. With threads=None a worker count
    is chosen automatically (serial below a size threshold); pass
    threads=1 to force the serial algorithm.
    """
    req = AssemblyRequest.from_raw(i, j, s, m=m, n=n, nzmax=nzmax)
    if threads == 1:
        return assemble_serial(req)
    return assemble_parallel(req, threads)


__all__ = [
    "AssemblyRequest",
    "BadIndex",
    "CscMatrix",
    "DimensionTooSmall",
    "Dimensions",
    "InstrumentationUnavailable",
    "LengthMismatch",
    "ParseError",
    "ResultMismatch",
    "TripletList",
    "UnknownDataset",
    "assemble",
    "assemble_oracle",
    "assemble_parallel",
    "assemble_serial",
    "backend",
    "csc_validate",
    "find_max_parallel",
    "prune_explicit_zeros",
    "validate_and_convert",
]
