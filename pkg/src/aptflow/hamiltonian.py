"""Single-qubit anti-PT-symmetric Hamiltonians and their exact dynamics.

The generalized Hamiltonian is

    H = [[r e^{i theta},  i s],
         [i mu,          -r e^{-i theta}]]

with real r, theta, s, mu and hbar = 1. Writing ``Omega^2 = r^2 cos^2 theta - mu s``
the traceless part squares to ``Omega^2 * I``, so every analytic function of H
is a two-term polynomial whose coefficients are entire functions of Omega^2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DomainError, NormalizationError
from .numerics import I2, SIGMA_X, check_density_matrix, dagger

REGIME_TOL = 1e-12
SERIES_THRESHOLD = 1e-4
SERIES_TERMS = 6
SYMMETRY_TOL = 1e-12
NORMALIZATION_FLOOR = 1e-300


class Regime(str, Enum):
    BROKEN = "broken"
    UNBROKEN = "unbroken"
    EXCEPTIONAL_POINT = "exceptional_point"


@dataclass(frozen=True)
class AptHamiltonian:
    """Parameters (r, theta, s, mu) of the generalized anti-PT Hamiltonian."""

    r: float
    theta: float
    s: float
    mu: float

    def __post_init__(self):
        for name in ("r", "theta", "s", "mu"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_lambda(cls, s: float, lam: float) -> "AptHamiltonian":
        """The experimental family s (i sigma_x + lam sigma_z): theta = 0, r = lam s, mu = s."""
        return ExperimentalFamily(s, lam).hamiltonian()

    def matrix(self) -> np.ndarray:
        e = cmath.exp(1j * self.theta)
        return np.array([[self.r * e, 1j * self.s],
                         [1j * self.mu, -self.r / e]], dtype=complex)

    @property
    def radicand(self) -> float:
        """r^2 cos^2(theta) - mu s, i.e. (w/2)^2."""
        return (self.r * math.cos(self.theta)) ** 2 - self.mu * self.s

    @property
    def damping(self) -> float:
        """r sin(theta): the imaginary part shared by both eigenvalues."""
        return self.r * math.sin(self.theta)

    def traceless_part(self) -> np.ndarray:
        return self.matrix() - 1j * self.damping * I2


@dataclass(frozen=True)
class ExperimentalFamily:
    """H = s (i sigma_x + lam sigma_z), with lam the degree of Hermiticity."""

    s: float
    lam: float

    def __post_init__(self):
        s, lam = float(self.s), float(self.lam)
        if not (math.isfinite(s) and math.isfinite(lam)):
            raise DomainError("s and lambda must be finite")
        if s < 0 or lam < 0:
            raise DomainError(f"s and lambda must be non-negative, got s={s}, lambda={lam}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "lam", lam)

    def hamiltonian(self) -> AptHamiltonian:
        return AptHamiltonian(r=self.lam * self.s, theta=0.0, s=self.s, mu=self.s)


def from_lambda(s: float, lam: float) -> AptHamiltonian:
    return AptHamiltonian.from_lambda(s, lam)


@dataclass(frozen=True)
class SpectralData:
    eps_plus: complex
    eps_minus: complex
    w: complex
    w_squared: float
    regime: Regime


def classify(radicand: float, tol: float = REGIME_TOL) -> Regime:
    if radicand > tol:
        return Regime.BROKEN
    if radicand < -tol:
        return Regime.UNBROKEN
    return Regime.EXCEPTIONAL_POINT


def spectrum(h: AptHamiltonian, tol: float = REGIME_TOL) -> SpectralData:
    """Eigenvalues ``i r sin(theta) +- sqrt(radicand)`` with the principal root."""
    rad = h.radicand
    root = complex(math.sqrt(rad)) if rad >= 0 else 1j * math.sqrt(-rad)
    centre = 1j * h.damping
    return SpectralData(
        eps_plus=centre + root,
        eps_minus=centre - root,
        w=2 * root,
        w_squared=4.0 * rad,
        regime=classify(rad, tol),
    )


@dataclass(frozen=True)
class SymmetryReport:
    negative_transpose: bool
    anti_commutes: bool


def pt_conjugate(m: np.ndarray) -> np.ndarray:
    """(PT) m (PT)^-1 with P = sigma_x and T complex conjugation."""
    return SIGMA_X @ np.conj(m) @ SIGMA_X


def symmetry_check(h: AptHamiltonian, tol: float = SYMMETRY_TOL) -> SymmetryReport:
    m = h.matrix()
    conj = pt_conjugate(m)
    neg_t = bool(np.max(np.abs(conj + m.T)) <= tol)
    anti = neg_t and bool(np.max(np.abs(m.T - m)) <= tol)
    return SymmetryReport(negative_transpose=neg_t, anti_commutes=anti)


def gap_functions(omega_squared: float, t: float, *, threshold: float = SERIES_THRESHOLD,
                  terms: int = SERIES_TERMS) -> tuple[float, float]:
    """``(cos(Omega t), sin(Omega t)/Omega)`` as entire functions of Omega^2.

    Omega = w/2 may be real or imaginary; both outputs are real. Near
    ``Omega t = 0`` (including the exceptional point) a truncated Taylor
    series avoids the 0/0 in the second function.
    """
    x = omega_squared * t * t
    if abs(x) < threshold * threshold:
        f1 = 0.0
        f2 = 0.0
        term1 = 1.0
        term2 = 1.0
        for k in range(terms):
            f1 += term1
            f2 += term2
            term1 *= -x / ((2 * k + 1) * (2 * k + 2))
            term2 *= -x / ((2 * k + 2) * (2 * k + 3))
        return f1, t * f2
    if omega_squared > 0:
        omega = math.sqrt(omega_squared)
        return math.cos(omega * t), math.sin(omega * t) / omega
    kappa = math.sqrt(-omega_squared)
    return math.cosh(kappa * t), math.sinh(kappa * t) / kappa


def _propagator_from_coefficients(h: AptHamiltonian, f1, f2, t: float, with_damping: bool) -> np.ndarray:
    u = f1 * I2 - 1j * f2 * h.traceless_part()
    if with_damping:
        u = math.exp(h.damping * t) * u
    return u


def propagator(h: AptHamiltonian, t: float, *, with_damping: bool = True) -> np.ndarray:
    """exp(-i H t) in closed form.

    With ``with_damping=False`` the scalar factor ``exp(r sin(theta) t)`` is
    dropped; it cancels in every normalized quantity.
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    f1, f2 = gap_functions(h.radicand, t)
    return _propagator_from_coefficients(h, f1, f2, t, with_damping)


def propagator_from_gap(h: AptHamiltonian, w: complex, t: float) -> np.ndarray:
    """Closed form evaluated on an explicit (complex) gap w instead of w^2.

    Only valid away from w = 0. Used to check that the choice of square-root
    branch for w has no effect.
    """
    half = complex(w) / 2
    f1 = cmath.cos(half * t)
    f2 = cmath.sin(half * t) / half
    return _propagator_from_coefficients(h, f1, f2, t, True)


def evolve(h: AptHamiltonian, rho0, t: float) -> np.ndarray:
    """Normalized non-unitary evolution U rho0 U^dagger / tr(.) with U = exp(-i H t)."""
    rho0 = check_density_matrix(rho0, 2)
    u = propagator(h, t, with_damping=False)
    out = u @ rho0 @ dagger(u)
    tr = np.trace(out).real
    if not tr > NORMALIZATION_FLOOR:
        raise NormalizationError(f"evolved state has trace {tr!r}")
    out = out / tr
    return 0.5 * (out + dagger(out))


def evolve_state(h: AptHamiltonian, psi, t: float) -> np.ndarray:
    """Pure-state version of :func:`evolve`: returns the normalized ket."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (2,):
        raise DomainError("single-qubit ket required")
    out = propagator(h, t, with_damping=False) @ psi
    norm = np.linalg.norm(out)
    if not norm > NORMALIZATION_FLOOR:
        raise NormalizationError("evolved ket vanished")
    return out / norm

