import numpy as np
import pytest

from sparseasm import AssemblyRequest, backend

# The running example used throughout (13 triplets, 4x4 output)
EXAMPLE_S = [4, 4, 5, 7, 3, 5, 5, 4, 3, 4, 9, 7, -2]
EXAMPLE_I = [3, 4, 1, 3, 2, 1, 4, 4, 4, 3, 2, 3, 1]
EXAMPLE_J = [3, 3, 1, 4, 1, 1, 4, 3, 1, 3, 2, 2, 4]

EXAMPLE_JC = [0, 3, 5, 7, 10]
EXAMPLE_IR = [0, 1, 3, 1, 2, 2, 3, 0, 2, 3]
EXAMPLE_PR = [10, 3, 3, 9, 7, 8, 8, -2, 7, 5]

# The sorted, duplicate-free triplet form of the same matrix
SORTED_S = [10, 3, 3, 9, 7, 8, 8, -2, 7, 5]
SORTED_I = [1, 2, 4, 2, 3, 3, 4, 1, 3, 4]
SORTED_J = [1, 1, 1, 2, 2, 3, 3, 4, 4, 4]


@pytest.fixture
def example_request():
    return AssemblyRequest.from_raw(EXAMPLE_I, EXAMPLE_J, EXAMPLE_S)


@pytest.fixture(params=backend.available())
def kernels(request):
    """Run the test against every available kernel backend."""
    return backend.get(request.param)


def random_instance(seed, max_len=50_000, max_dim=2000, allow_special=True):
    """Seeded random assembly request spanning 0-100% duplicate rates.

    Small dimensions produce near-total collision; dimensions near
    max_dim produce mostly unique pairs. Values include negatives and
    zeros, and some instances carry NaNs.
    """
    rng = np.random.default_rng(seed)
    length = int(np.expm1(rng.uniform(0, np.log1p(max_len))))
    if rng.random() < 0.05:
        length = 0
    if rng.random() < 0.25:
        m = int(rng.integers(1, 8))
        n = int(rng.integers(1, 8))
    else:
        m = int(rng.integers(1, max_dim + 1))
        n = int(rng.integers(1, max_dim + 1))
    ii = rng.integers(1, m + 1, size=length)
    jj = rng.integers(1, n + 1, size=length)
    sr = rng.standard_normal(length)
    if allow_special and length:
        if rng.random() < 0.3:
            sr[rng.integers(0, length, size=max(1, length // 20))] = 0.0
        if rng.random() < 0.15:
            sr[rng.integers(0, length, size=max(1, length // 20))] = np.nan
    return AssemblyRequest.from_raw(ii, jj, sr)


def assert_same_matrix(a, b, context=""):
    __tracebackhide__ = True
    assert a.m == b.m and a.n == b.n, f"shape differs {context}"
    assert np.array_equal(a.jc, b.jc), f"jc differs {context}"
    assert np.array_equal(a.ir, b.ir), f"ir differs {context}"
    assert a.pr.tobytes() == b.pr.tobytes(), f"pr differs (bitwise) {context}"
