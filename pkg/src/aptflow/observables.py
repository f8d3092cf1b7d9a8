"""Information-flow measures: trace distance, purity and their time series."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import DimensionError, DomainError
from .hamiltonian import AptHamiltonian, ExperimentalFamily, Regime, classify, evolve
from .numerics import as_matrix, hermitian_eigen, projector

RECOVERY_TOL = 1e-9
BACKFLOW_TOL = 1e-9
SCAN_STEPS_PER_PERIOD = 1000
EP_EPSILON = 1e-3
UNBROKEN_SCAN_POINTS = 2000

RHO_0 = projector([1, 0])
RHO_1 = projector([0, 1])


def trace_distance(rho1, rho2) -> float:
    """D = (1/2) tr|rho1 - rho2| via the eigenvalues of the Hermitian difference."""
    a, b = as_matrix(rho1), as_matrix(rho2)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    vals, _ = hermitian_eigen(a - b)
    return float(0.5 * np.sum(np.abs(vals)))


def purity(rho) -> float:
    rho = as_matrix(rho)
    return float(np.real(np.trace(rho @ rho)))


@dataclass
class EvolutionTrace:
    times: np.ndarray
    rho_a: np.ndarray
    rho_b: np.ndarray
    distinguishability: np.ndarray
    purity: np.ndarray | None = None
    success_probability: np.ndarray | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing")
        self.distinguishability = np.asarray(self.distinguishability, dtype=float)
        if np.any(self.distinguishability < -1e-12) or np.any(self.distinguishability > 1 + 1e-10):
            raise DomainError("distinguishability outside [0, 1]")

    def __len__(self):
        return self.times.size


def distinguishability(h: AptHamiltonian, t: float, rho_a=RHO_0, rho_b=RHO_1) -> float:
    return trace_distance(evolve(h, rho_a, t), evolve(h, rho_b, t))


def distinguishability_series(h: AptHamiltonian, times: Sequence[float], rho_a=RHO_0,
                              rho_b=RHO_1) -> EvolutionTrace:
    times = np.asarray(times, dtype=float)
    a = np.array([evolve(h, rho_a, t) for t in times])
    b = np.array([evolve(h, rho_b, t) for t in times])
    d = np.array([trace_distance(x, y) for x, y in zip(a, b)])
    return EvolutionTrace(times, a, b, d, purity=np.array([purity(x) for x in a]))


def period_formula(s: float, lam: float) -> float | None:
    """pi / (s sqrt(lam^2 - 1)) in the broken phase, else None."""
    if lam <= 1 or s <= 0:
        return None
    return math.pi / (s * math.sqrt(lam * lam - 1))


@dataclass(frozen=True)
class OscillationMetrics:
    regime: Regime
    period: float | None
    amplitude: float | None
    d_min: float
    d_max: float
    period_formula: float | None = None


def _first_recovery(d, step: float, t_guess: float) -> float:
    """Locate the first return of D to its maximum after t = 0.

    Scans at ``step`` until D stops decreasing and turns back down again, then
    refines the bracketed maximum by golden-section search.
    """
    t_prev, d_prev = 0.0, d(0.0)
    t_cur, d_cur = step, d(step)
    rising = False
    k = 1
    limit = int(4 * t_guess / step) + 10
    while k < limit:
        t_next = (k + 1) * step
        d_next = d(t_next)
        if d_cur > d_prev:
            rising = True
        if rising and d_next <= d_cur:
            res = minimize_scalar(lambda t: -d(t), bracket=(t_prev, t_cur, t_next), method="golden",
                                  options={"xtol": 1e-12})
            return float(res.x)
        t_prev, d_prev, t_cur, d_cur = t_cur, d_cur, t_next, d_next
        k += 1
    raise RuntimeError("no recovery of distinguishability found in the scan window")


def oscillation_metrics(s: float, lam: float, rho_a=RHO_0, rho_b=RHO_1) -> OscillationMetrics:
    """Period, amplitude and extreme values of D(t) for the family s (i X + lam Z).

    In the broken phase the period is found numerically and then compared to
    the closed formula; D_min comes from a golden-section search over one
    period. Elsewhere only the infimum over a long horizon is reported.
    """
    family = ExperimentalFamily(s, lam)
    if s <= 0:
        raise DomainError("s must be positive")
    h = family.hamiltonian()
    regime = classify(h.radicand)

    def d(t):
        return distinguishability(h, t, rho_a, rho_b)

    if regime is not Regime.BROKEN:
        horizon = 10.0 / (s * max(1.0 - lam * lam, EP_EPSILON))
        grid = np.linspace(0.0, horizon, UNBROKEN_SCAN_POINTS)
        values = [d(t) for t in grid]
        return OscillationMetrics(regime, None, None, float(min(values)), float(max(values)))

    formula = period_formula(s, lam)
    step = formula / SCAN_STEPS_PER_PERIOD
    period = _first_recovery(d, step, formula)
    d_max = d(period)
    if d_max < 1.0 - RECOVERY_TOL:
        raise RuntimeError(f"distinguishability only recovers to {d_max!r}")
    grid = np.linspace(0.0, period, 201)
    values = np.array([d(t) for t in grid])
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(d, bracket=(lo, grid[i], hi), method="golden", options={"xtol": 1e-12})
    d_min = float(min(res.fun, values[i]))
    return OscillationMetrics(regime, period, d_max - d_min, d_min, d_max, formula)


@dataclass(frozen=True)
class BackflowWitness:
    has_backflow: bool
    total_backflow: float


def backflow_witness(trace, tol: float = BACKFLOW_TOL) -> BackflowWitness:
    """Sum of the increases of D between consecutive samples."""
    d = trace.distinguishability if isinstance(trace, EvolutionTrace) else np.asarray(trace, dtype=float)
    if d.size < 2:
        raise DomainError("need at least two samples")
    inc = np.diff(d)
    positive = inc[inc > tol]
    return BackflowWitness(bool(positive.size), float(positive.sum()))
