import itertools

import numpy as np
import pytest

from multistage_gt import _kernels_numpy

try:
    from multistage_gt import _kernels_numba
except ImportError:  # pragma: no cover
    _kernels_numba = None

ACCEPTANCE_LINES: list[str] = []

BACKENDS = [_kernels_numpy] + ([_kernels_numba] if _kernels_numba is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def kernels(request):
    return request.param


def brute_edges(bits: np.ndarray, r: np.ndarray, s: int) -> list[tuple[int, ...]]:
    """Every subset of size 1..s whose column OR equals r, via plain Python ints."""
    n_rows, t = bits.shape
    cols = [int("".join(map(str, bits[:, j])), 2) for j in range(t)]
    target = int("".join(map(str, r)), 2)
    found = []
    for k in range(1, s + 1):
        for sub in itertools.combinations(range(t), k):
            acc = 0
            for j in sub:
                acc |= cols[j]
            if acc == target:
                found.append(sub)
    return sorted(found)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
