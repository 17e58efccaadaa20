import itertools

import numpy as np
import pytest

from bosim.permanent import perm_naive


def unit_disc_matrix(rng, n):
    r = np.sqrt(rng.uniform(0, 1, (n, n)))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, (n, n)))


def brute_force_table(U, inputs, detect, kernel="boson", eff=None):
    """Reference lossy-source table built from perm_naive, keyed by output tuple."""
    U = np.asarray(U)
    m = U.shape[0]
    inputs = list(inputs)
    eff = eff or {p: 1.0 for p in inputs}
    table = {}
    for T in itertools.combinations(range(1, m + 1), detect):
        total = 0.0
        for S in itertools.combinations(inputs, detect):
            A = U[np.ix_([s - 1 for s in S], [t - 1 for t in T])]
            w = np.prod([eff[s] for s in S])
            if kernel == "boson":
                total += w * abs(perm_naive(A)) ** 2
            else:
                total += w * perm_naive(np.abs(A) ** 2).real
        table[T] = total
    z = sum(table.values())
    return {k: v / z for k, v in table.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
