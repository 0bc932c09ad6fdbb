"""Closed-form fidelities, optimized gains, and quantum Fisher information.

All cat-state expressions reduce to weighted root-of-unity sums

    S_j(x) = sum_{n=0}^{d-1} w^{-jn} exp[-x (1 - w^n)],   w = exp(2 pi i / d),

which are real and positive for x >= 0 (they equal d e^{-x} times the Taylor
mass of e^x on photon numbers congruent to j mod d).  For x >= 0.5 they are
evaluated as complex sums with an asserted imaginary residue; below that the
complex sum cancels to noise, so the equivalent positive series is used
instead.  Fidelities carry their exp[-alpha^2 (g-1)^2] envelope explicitly so
no intermediate overflows even at large gain.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import gammaln

from . import amplify
from .errors import DivergentGainError
from .fock import DensityMatrix

_SERIES_CUTOVER = 0.5


class Scheme(enum.Enum):
    """The two named amplification schemes."""

    AADAG = "aadag"  # photon addition then subtraction
    ADAG2 = "adag2"  # double photon addition


def as_scheme(s) -> Scheme:
    if isinstance(s, Scheme):
        return s
    return Scheme(str(s).lower())


def scheme_word(s) -> amplify.SchemeWord:
    return amplify.AADAG if as_scheme(s) is Scheme.AADAG else amplify.ADAG2


def target_index(k: int, d: int, s) -> int:
    """Qudit index of the amplification target: k, or k+2 (mod d) for double addition."""
    return k % d if as_scheme(s) is Scheme.AADAG else (k + 2) % d


def _mod_exp_sum(j: int, x, d: int):
    """S_j(x) as defined in the module docstring; x may be a scalar or array."""
    j = j % d
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    out = np.empty_like(x)
    big = x >= _SERIES_CUTOVER
    if big.any():
        xb = x[big]
        w = np.exp(2j * np.pi / d)
        acc = np.zeros(xb.shape, dtype=complex)
        mags = np.zeros(xb.shape)
        for n in range(d):
            t = w ** (-j * n) * np.exp(-xb * (1.0 - w**n))
            acc += t
            mags += np.abs(t)
        if np.any(np.abs(acc.imag) > 1e-12 * np.maximum(1.0, mags)):
            raise ArithmeticError("root-of-unity sum has non-negligible imaginary residue")
        out[big] = acc.real
    if (~big).any():
        xs = x[~big]
        safe = np.maximum(xs, 1e-300)
        acc = np.zeros(xs.shape)
        m = j
        while m <= j + 80 * d:
            term = np.exp(m * np.log(safe) - gammaln(m + 1.0)) if m else np.ones_like(xs)
            acc += term
            if m > j and np.all(term <= 1e-22 * np.maximum(acc, 1e-300)):
                break
            m += d
        res = d * np.exp(-xs) * acc
        res[xs == 0.0] = d if j == 0 else 0.0
        out[~big] = res
    return float(out[0]) if scalar else out


def omega_exp_sum(j: int, x: float, d: int) -> float:
    """Reference complex-arithmetic evaluation of S_j(x) (cross-check oracle)."""
    w = np.exp(2j * np.pi / d)
    terms = [w ** (-(j % d) * n) * np.exp(-x * (1.0 - w**n)) for n in range(d)]
    s = sum(terms)
    if abs(s.imag) > 1e-12 * max(1.0, sum(abs(t) for t in terms)):
        raise ArithmeticError("root-of-unity sum has non-negligible imaginary residue")
    return float(s.real)


def hes_fidelity(alpha: float, g, s) -> float:
    """Fidelity of the amplified hybrid qudit against the gain-g target (d, k free)."""
    s = as_scheme(s)
    g = np.asarray(g, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gain must be positive")
    a2 = alpha * alpha
    env = np.exp(-a2 * (g - 1.0) ** 2)
    if s is Scheme.AADAG:
        val = (g * g * a2 * a2 + 2 * g * a2 + 1.0) / (a2 * a2 + 3 * a2 + 1.0) * env
    else:
        val = g**4 * a2 * a2 / (a2 * a2 + 4 * a2 + 2.0) * env
    return float(val) if val.ndim == 0 else val


def hes_gain(alpha: float, s) -> float:
    """Gain maximizing the hybrid fidelity; diverges for double addition at alpha = 0."""
    s = as_scheme(s)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    a2 = alpha * alpha
    if s is Scheme.AADAG:
        # rationalized form of (a2 - 1 + sqrt(a4 + 6 a2 + 1)) / (2 a2), stable at a2 -> 0
        return float(4.0 / (1.0 - a2 + np.sqrt(a2 * a2 + 6 * a2 + 1.0)))
    if alpha == 0.0:
        raise DivergentGainError("double-addition gain diverges as alpha -> 0")
    return float(0.5 * (1.0 + np.sqrt(1.0 + 8.0 / a2)))


def hes_qfi(alpha: float, s=None) -> float:
    """Phase-estimation Fisher information of a (possibly amplified) hybrid qudit."""
    a2 = alpha * alpha
    if s is None:
        return 4.0 * a2
    s = as_scheme(s)
    a4, a6, a8 = a2 * a2, a2**3, a2**4
    if s is Scheme.AADAG:
        return 4.0 * a2 * (a8 + 6 * a6 + 14 * a4 + 10 * a2 + 4.0) / (a4 + 3 * a2 + 1.0) ** 2
    return 4.0 * a2 * (a8 + 8 * a6 + 24 * a4 + 24 * a2 + 12.0) / (a4 + 4 * a2 + 2.0) ** 2


def scs_fidelity(alpha: float, g, d: int, k: int, s):
    """Fidelity of the amplified cat-state qudit against the gain-g target qudit.

    The target carries index k for add-then-subtract and k+2 (mod d) for double
    addition.  ``g`` may be an array (used by the dense-scan oracles).
    """
    s = as_scheme(s)
    g = np.asarray(g, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gain must be positive")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0.0:
        # both states collapse onto number states
        if s is Scheme.AADAG:
            val = np.ones_like(g)
        else:
            val = np.full_like(g, 1.0 if k + 2 < d else 0.0)
        return float(val) if val.ndim == 0 else val
    a2 = alpha * alpha
    y = g * a2
    z = g * g * a2
    env = np.exp(-a2 * (g - 1.0) ** 2)
    if s is Scheme.AADAG:
        num = (_mod_exp_sum(k, y, d) + y * _mod_exp_sum(k - 1, y, d)) ** 2
        den_in = (
            a2 * a2 * _mod_exp_sum(k - 2, a2, d)
            + 3 * a2 * _mod_exp_sum(k - 1, a2, d)
            + _mod_exp_sum(k, a2, d)
        )
        val = env * num / (den_in * _mod_exp_sum(k, z, d))
    else:
        num = (g * g * a2) ** 2 * _mod_exp_sum(k, y, d) ** 2
        den_in = (
            a2 * a2 * _mod_exp_sum(k - 2, a2, d)
            + 4 * a2 * _mod_exp_sum(k - 1, a2, d)
            + 2 * _mod_exp_sum(k, a2, d)
        )
        val = env * num / (den_in * _mod_exp_sum(k + 2, z, d))
    return float(val) if val.ndim == 0 else val


def scs_qfi(alpha: float, d: int, k: int, s=None) -> float:
    """Phase-estimation Fisher information of a (possibly amplified) cat-state qudit."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0.0:
        return 0.0  # number states are phase invariant
    a2 = alpha * alpha
    x = a2
    S = {j: _mod_exp_sum(k - j, x, d) for j in range(5)}
    if s is None:
        mean = a2 * S[1] / S[0]
        second = a2 * a2 * S[2] / S[0]
        return 4.0 * (second + mean) - 4.0 * mean * mean
    s = as_scheme(s)
    a4, a6, a8 = a2 * a2, a2**3, a2**4
    if s is Scheme.AADAG:
        den = a4 * S[2] + 3 * a2 * S[1] + S[0]
        big = a8 * S[4] + 8 * a6 * S[3] + 14 * a4 * S[2] + 4 * a2 * S[1]
        mid = a6 * S[3] + 5 * a4 * S[2] + 4 * a2 * S[1]
    else:
        den = a4 * S[2] + 4 * a2 * S[1] + 2 * S[0]
        big = a8 * S[4] + 13 * a6 * S[3] + 46 * a4 * S[2] + 46 * a2 * S[1] + 8 * S[0]
        mid = a6 * S[3] + 8 * a4 * S[2] + 14 * a2 * S[1] + 4 * S[0]
    return 4.0 * big / den - 4.0 * (mid / den) ** 2


def qfi_ratio(alpha: float, d: int | None = None, k: int | None = None) -> float:
    """Fisher-information ratio of the two schemes (add-then-subtract over double add).

    With d (and k) omitted the hybrid/coherent family is used; otherwise the
    cat-state qudit (d, k).
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if d is None:
        return hes_qfi(alpha, Scheme.AADAG) / hes_qfi(alpha, Scheme.ADAG2)
    if k is None:
        raise ValueError("k is required together with d")
    return scs_qfi(alpha, d, k, Scheme.AADAG) / scs_qfi(alpha, d, k, Scheme.ADAG2)


def qfi_spectral(rho: DensityMatrix, eig_cutoff: float = 1e-12) -> float:
    """Fisher information 2 sum_{k,l} (l_k - l_l)^2 / (l_k + l_l) |<k|n|l>|^2.

    The generator is the photon-number operator; eigenpairs with combined
    weight below ``eig_cutoff`` are skipped.  For pure states this reduces to
    4 Var(n).
    """
    lam, vec = np.linalg.eigh(rho.entries)
    n = np.arange(rho.dim)
    h = vec.conj().T @ (n[:, None] * vec)  # <k| n |l>
    total = 0.0
    for a in range(rho.dim):
        for b in range(rho.dim):
            w = lam[a] + lam[b]
            if w > eig_cutoff:
                total += (lam[a] - lam[b]) ** 2 / w * abs(h[a, b]) ** 2
    return 2.0 * total


_IDENTITIES = {
    # word (rightmost acts first) -> coefficients of adag^j a^j, index j
    "sub_add3_sub3_add": (("subtract", "add", "add", "add", "subtract", "subtract", "subtract", "add"), {4: 1.0, 3: 7.0, 2: 9.0}),
    "sub_add2_sub2_add": (("subtract", "add", "add", "subtract", "subtract", "add"), {3: 1.0, 2: 5.0, 1: 4.0}),
    "sub2_add2_sub2_add2": (("subtract", "subtract", "add", "add", "subtract", "subtract", "add", "add"), {4: 1.0, 3: 12.0, 2: 38.0, 1: 32.0, 0: 4.0}),
    "sub2_add_sub_add2": (("subtract", "subtract", "add", "subtract", "add", "add"), {3: 1.0, 2: 8.0, 1: 14.0, 0: 4.0}),
}


def verify_normal_ordering_identities(trunc: int) -> dict[str, float]:
    """Max interior deviation between ladder words and their normally ordered forms.

    Returns one entry per identity; deviations are measured on matrix entries
    with both indices <= trunc - 6 so boundary truncation cannot contribute.
    """
    if trunc < 12:
        raise ValueError("trunc must be >= 12")
    a = np.diag(np.sqrt(np.arange(1.0, trunc)), 1)
    ad = a.T.copy()
    ops = {"add": ad, "subtract": a}
    report = {}
    cut = trunc - 5  # entries with index <= trunc - 6
    for name, (word, coeffs) in _IDENTITIES.items():
        left = np.eye(trunc)
        for op in word:  # leftmost factor applied last = leftmost in the product
            left = left @ ops[op]
        right = np.zeros((trunc, trunc))
        for j, c in coeffs.items():
            right += c * np.linalg.matrix_power(ad, j) @ np.linalg.matrix_power(a, j)
        report[name] = float(np.max(np.abs((left - right)[:cut, :cut])))
    return report
