"""Derivative-free scalar maximization and root bracketing.

The maximizer is a one-dimensional downhill simplex (two points, with
reflection, expansion, contraction and shrink steps) plus a single restart
from a small perturbation of the best point found.  It reports the best local
maximum reachable from its start; global optimality is a test-suite concern
handled by dense grid scans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic
from .errors import OptimizationError
from .states import ScsSpec

GAIN_LO = 1e-3
GAIN_HI = 20.0


@dataclass(frozen=True)
class OptResult:
    argmax: float
    value: float
    iterations: int
    converged: bool
    boundary_hit: bool


def _clip(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def _simplex(f, x0: float, x1: float, lo: float, hi: float, tol: float,
             budget: int) -> tuple[float, float, int, bool]:
    """Core two-point simplex loop; returns (argmax, value, iterations, converged)."""

    def eval_f(x: float) -> float:
        y = f(x)
        if not np.isfinite(y):
            raise OptimizationError(f"objective returned non-finite value at x={x}")
        return float(y)

    best, worst = x0, x1
    fb, fw = eval_f(best), eval_f(worst)
    if fw > fb:
        best, worst, fb, fw = worst, best, fw, fb
    it = 0
    while it < budget:
        it += 1
        if abs(best - worst) < tol:
            return best, fb, it, True
        xr = _clip(best + (best - worst), lo, hi)
        fr = eval_f(xr)
        if fr > fb:
            xe = _clip(best + 2.0 * (best - worst), lo, hi)
            fe = eval_f(xe)
            if fe > fr:
                worst, fw, best, fb = best, fb, xe, fe
            else:
                worst, fw, best, fb = best, fb, xr, fr
        elif fr > fw:
            worst, fw = xr, fr
        else:
            xc = best + 0.5 * (worst - best)
            fc = eval_f(xc)
            if fc > fw:
                worst, fw = xc, fc
            else:
                xs = best + 0.25 * (worst - best)
                worst, fw = xs, eval_f(xs)
        if fw > fb:
            best, worst, fb, fw = worst, best, fw, fb
    return best, fb, it, False


def _with_restart(f, x0: float, x1: float, lo: float, hi: float, tol: float,
                  budget: int) -> OptResult:
    b1, f1, it1, conv1 = _simplex(f, x0, x1, lo, hi, tol, budget)
    second = _clip(b1 + 10.0 * tol if b1 + 10.0 * tol <= hi else b1 - 10.0 * tol, lo, hi)
    b2, f2, it2, conv2 = _simplex(f, b1, second, lo, hi, tol, budget)
    if f2 >= f1:
        best, fbest, conv = b2, f2, conv2
    else:
        best, fbest, conv = b1, f1, conv1
    boundary = best - lo < tol or hi - best < tol
    return OptResult(best, fbest, it1 + it2, conv, boundary)


def maximize_scalar(f, lo: float, hi: float, tol: float = 1e-8,
                    max_iter: int = 2000) -> OptResult:
    """Maximize f on [lo, hi]; simplex started at the interior quartile points."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    return _with_restart(f, lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo),
                         lo, hi, tol, max_iter // 2)


def scs_gain(spec: ScsSpec, s, tol: float = 1e-8) -> OptResult:
    """Gain maximizing the cat-state fidelity, searched over (0, 20].

    The simplex starts at {1.0, 1.5} (gain near unity is the physical prior).
    For the last two qudit indices under double addition at small amplitude the
    optimum can sit at very large gain; boundary_hit flags an argmax within tol
    of the search edge.
    """
    scheme = analytic.as_scheme(s)

    def objective(g: float) -> float:
        return analytic.scs_fidelity(spec.alpha, g, spec.d, spec.k, scheme)

    return _with_restart(objective, 1.0, 1.5, GAIN_LO, GAIN_HI, tol, 1000)


def find_crossing(f, target: float, lo: float, hi: float, tol: float = 1e-6) -> float:
    """Bisection abscissa where f crosses target on [lo, hi]."""
    flo = f(lo) - target
    fhi = f(hi) - target
    if not np.isfinite(flo) or not np.isfinite(fhi):
        raise OptimizationError("objective non-finite at bracket endpoints")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid) - target
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
