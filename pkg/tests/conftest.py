"""Shared brute-force oracles, independent of the library's own code paths.

Everything here is built from dense matrices and explicit series so the
library can be checked against a second route: destroy/create are literal
tridiagonal matrices, coherent amplitudes come straight from the defining
series, and cat states are assembled as explicit sums of coherent vectors
(the library builds them on their photon-number support instead).
"""

import math

import numpy as np
import pytest


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n)), 1)


def create(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n)), -1)


def coherent_column(z: complex, n: int) -> np.ndarray:
    """exp(-|z|^2/2) z^m / sqrt(m!) via per-term log evaluation."""
    out = np.zeros(n, dtype=complex)
    for m in range(n):
        if z == 0:
            out[m] = 1.0 if m == 0 else 0.0
        else:
            lg = -0.5 * abs(z) ** 2 + m * math.log(abs(z)) - 0.5 * math.lgamma(m + 1)
            out[m] = math.exp(lg) * (z / abs(z)) ** m
    return out


def cat_column(alpha: float, d: int, k: int, n: int) -> np.ndarray:
    """Normalized cat-state qudit as an explicit phased sum of coherent vectors."""
    w = np.exp(2j * np.pi / d)
    acc = np.zeros(n, dtype=complex)
    for m in range(d):
        acc += w ** (-k * m) * coherent_column(alpha * w**m, n)
    return acc / np.linalg.norm(acc)


def hybrid_matrix(alpha: float, d: int, k: int, n: int) -> np.ndarray:
    """Hybrid qudit rows (discrete index) by Fock columns, unit norm up to tail."""
    w = np.exp(2j * np.pi / d)
    rows = np.zeros((d, n), dtype=complex)
    for m in range(d):
        rows[m] = w ** (-k * m) * coherent_column(alpha * w**m, n) / math.sqrt(d)
    return rows


def poisson_tail(alpha: float, n: int) -> float:
    """Mass of Poisson(alpha^2) on outcomes >= n, by direct summation."""
    lam = alpha * alpha
    total = 0.0
    log_pmf = -lam
    for m in range(n):
        total += math.exp(log_pmf)
        log_pmf += math.log(lam) - math.log(m + 1)
    return max(0.0, 1.0 - total)


def var4(column: np.ndarray) -> float:
    """4 Var(n) of a normalized Fock column (flattens hybrid matrices)."""
    if column.ndim == 2:
        p = (np.abs(column) ** 2).sum(axis=0)
    else:
        p = np.abs(column) ** 2
    idx = np.arange(p.size)
    mean = float(p @ idx)
    return 4.0 * (float(p @ (idx * idx)) - mean * mean)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
