import math

import numpy as np
import pytest


def random_density_matrix(n_max, seed, occupied=None):
    """Random full-rank mixed state supported on the lowest ``occupied`` levels."""
    rng = np.random.default_rng(seed)
    k = n_max + 1 if occupied is None else occupied
    g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    small = g @ g.conj().T
    small /= np.trace(small).real
    rho = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    rho[:k, :k] = small
    return rho


def brute_coherent_vector(beta, n_max):
    """Coherent amplitudes straight from factorials, no renormalisation."""
    return np.array([math.exp(-abs(beta) ** 2 / 2) * beta**n / math.sqrt(math.factorial(n))
                     for n in range(n_max + 1)], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
