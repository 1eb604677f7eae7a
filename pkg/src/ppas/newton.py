"""Damped Gauss-Newton for holomorphic residuals in complex unknowns."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class NonConvergent(RuntimeError):
    pass


@dataclass
class GNResult:
    x: np.ndarray
    residual: float
    converged: bool
    iterations: int


def gauss_newton(
    fun: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    x0: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 60,
    min_step: float = 2.0**-14,
) -> GNResult:
    """Minimise ``|F(x)|`` where ``fun(x) -> (F, J)`` with ``J = dF/dx`` complex.

    Steps are least-squares (minimum norm) Gauss-Newton steps with halving
    until the residual decreases.  ``tol`` is on the Euclidean norm of F,
    i.e. a squared residual of ``tol**2``.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _gauss_newton(fun, x0, tol, max_iter, min_step)


def _gauss_newton(fun, x0, tol, max_iter, min_step) -> GNResult:
    x = np.array(x0, dtype=complex)
    F, J = fun(x)
    f = float(np.linalg.norm(F))
    it = 0
    while it < max_iter and f > tol:
        it += 1
        if not np.all(np.isfinite(J)):
            break
        dx = np.linalg.lstsq(J, -F, rcond=None)[0]
        step = 1.0
        while step >= min_step:
            xn = x + step * dx
            Fn, Jn = fun(xn)
            fn = float(np.linalg.norm(Fn))
            if np.isfinite(fn) and fn < f:
                break
            step *= 0.5
        else:
            break
        x, F, J, f = xn, Fn, Jn, fn
    return GNResult(x, f, f <= tol, it)


def jacobian_condition(J: np.ndarray) -> float:
    """Ratio of smallest to largest singular value over the unknowns."""
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[0] == 0:
        return 0.0
    n = min(J.shape)
    return float(sv[n - 1] / sv[0]) if J.shape[0] >= J.shape[1] else 0.0
