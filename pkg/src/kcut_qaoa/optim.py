"""Derivative-free local minimisation (Nelder-Mead simplex)."""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import OptimizationError


class NMResult(NamedTuple):
    x: np.ndarray
    fun: float
    nit: int
    nfev: int


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    n = x0.size
    sim = np.empty((n + 1, n))
    sim[0] = x0
    for i in range(n):
        y = x0.copy()
        y[i] = y[i] * 1.05 if y[i] != 0 else 0.00025
        sim[i + 1] = y
    return sim


def nelder_mead(objective: Callable[[np.ndarray], float], x0, tol: float = 1e-8,
                max_iter: int = 2000, max_fev: int | None = None,
                rho: float = 1.0, chi: float = 2.0, psi: float = 0.5, sigma: float = 0.5) -> NMResult:
    """Minimise ``objective`` from ``x0``.

    Reflection ``rho``, expansion ``chi``, contraction ``psi``, shrink ``sigma``.
    The initial simplex scales each coordinate of ``x0`` by 1.05 (or sets it
    to 0.00025 when it is zero). Stops when the spread of function values
    over the simplex drops below ``tol`` or after ``max_iter`` iterations.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    if not np.all(np.isfinite(x0)):
        raise OptimizationError("non-finite starting point", x0)
    n = x0.size
    nfev = 0

    def f(x):
        nonlocal nfev
        nfev += 1
        val = float(objective(x))
        if not np.isfinite(val):
            raise OptimizationError("objective returned a non-finite value", x)
        return val

    sim = _initial_simplex(x0)
    fs = np.array([f(x) for x in sim])
    if max_fev is None:
        max_fev = 1 << 62
    nit = 0
    while nit < max_iter and nfev < max_fev:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        if fs[-1] - fs[0] < tol:
            break
        nit += 1
        xbar = sim[:-1].mean(axis=0)
        xr = xbar + rho * (xbar - sim[-1])
        fr = f(xr)
        if fr < fs[0]:
            xe = xbar + rho * chi * (xbar - sim[-1])
            fe = f(xe)
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = xbar + psi * rho * (xbar - sim[-1])
            fc = f(xc)
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xcc = xbar - psi * (xbar - sim[-1])
            fcc = f(xcc)
            if fcc < fs[-1]:
                sim[-1], fs[-1] = xcc, fcc
                continue
        for j in range(1, n + 1):
            sim[j] = sim[0] + sigma * (sim[j] - sim[0])
            fs[j] = f(sim[j])
    i = int(np.argmin(fs))
    return NMResult(sim[i].copy(), float(fs[i]), nit, nfev)
