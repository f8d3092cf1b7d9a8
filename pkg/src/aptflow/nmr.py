"""Emulation of the four-qubit information-flow experiment.

Covers the pseudo-pure input state, the normalized Hilbert-Schmidt fidelity
used to score tomography, the noiseless nine-point experiment and a Monte
Carlo over amplitude/phase errors of every gate.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .circuit import Circuit, Gate, circuit_unitary, post_select, simulate, u2
from .exceptions import DimensionError, DomainError, NormalizationError
from .hamiltonian import AptHamiltonian, from_lambda
from .lcu import ANCILLAS, Scheme, build_circuit
from .numerics import as_matrix, dagger, partial_trace, projector
from .observables import EvolutionTrace, purity, trace_distance

BAND_TOL = 1e-12


@dataclass(frozen=True)
class PseudoPureState:
    """(1 - epsilon) I/d + epsilon |0...0><0...0|."""

    epsilon: float
    n_qubits: int = 4

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise DomainError(f"polarization must lie in [0, 1], got {self.epsilon}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def matrix(self) -> np.ndarray:
        m = (1.0 - self.epsilon) / self.dim * np.eye(self.dim, dtype=complex)
        m[0, 0] += self.epsilon
        return m

    def background(self) -> np.ndarray:
        return (1.0 - self.epsilon) / self.dim * np.eye(self.dim, dtype=complex)


def pseudo_pure(epsilon: float, n_qubits: int = 4) -> PseudoPureState:
    return PseudoPureState(float(epsilon), n_qubits)


def deviation_part(rho, epsilon: float, dim: int | None = None) -> np.ndarray:
    """Remove the identity background of a pseudo-pure state and rescale by 1/epsilon."""
    rho = as_matrix(rho)
    dim = dim or rho.shape[0]
    if epsilon <= 0:
        raise DomainError("deviation part undefined for epsilon = 0")
    return (rho - (1.0 - epsilon) / dim * np.eye(rho.shape[0])) / epsilon


def identity_part_invariant(state: PseudoPureState, unitary, tol: float = 1e-12) -> bool:
    """True if U leaves the (1 - epsilon) I/d background of ``state`` unchanged."""
    u = as_matrix(unitary)
    bg = state.background()
    return bool(np.max(np.abs(u @ bg @ dagger(u) - bg)) <= tol)


def conjugate_pseudo_pure(state: PseudoPureState, unitary) -> np.ndarray:
    u = as_matrix(unitary)
    return u @ state.matrix @ dagger(u)


def state_fidelity(rho, sigma) -> float:
    """tr(rho sigma) / sqrt(tr rho^2 tr sigma^2)."""
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    denom = math.sqrt(purity(rho) * purity(sigma))
    if denom <= 0:
        raise NormalizationError("zero-purity argument")
    return float(np.real(np.trace(rho @ sigma)) / denom)


@dataclass
class ExperimentConfig:
    s: float = 3.0
    lambdas: tuple[float, ...] = (2.0, 1.5, 1.01, 0.5)
    t_final: float = 1.0
    n_points: int = 9
    noise_fraction: float = 0.05
    n_trials: int = 200
    seed: int = 20190101

    def __post_init__(self):
        self.lambdas = tuple(float(x) for x in self.lambdas)
        if not self.lambdas:
            raise DomainError("at least one lambda is required")
        if self.s < 0 or any(x < 0 for x in self.lambdas):
            raise DomainError("s and lambda must be non-negative")
        if self.n_points < 2:
            raise DomainError("n_points must be at least 2")
        if not 0.0 <= self.noise_fraction < 1.0:
            raise DomainError("noise_fraction must lie in [0, 1)")
        if self.n_trials < 1:
            raise DomainError("n_trials must be positive")
        if not self.t_final > 0:
            raise DomainError("t_final must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def times(self) -> np.ndarray:
        """t = 0 reference followed by k t_final / n_points, k = 1..n_points."""
        return np.arange(self.n_points + 1) * (self.t_final / self.n_points)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambdas"] = list(self.lambdas)
        return d


def _work_states(output: np.ndarray):
    branch, prob = post_select(output, ANCILLAS, "00")
    joint = projector(branch)
    return partial_trace(joint, [0], [2, 2]), partial_trace(joint, [1], [2, 2]), prob


def _simulate_point(circuit: Circuit):
    out = simulate(circuit)
    rho_a, rho_b, prob = _work_states(out)
    env = partial_trace(projector(out), [2], [2, 2, 2, 2])
    return rho_a, rho_b, prob, env


def run_experiment(config: ExperimentConfig | None = None) -> dict[float, EvolutionTrace]:
    """Noiseless four-qubit experiment for every lambda in ``config``."""
    config = config or ExperimentConfig()
    times = config.times()
    results = {}
    for lam in config.lambdas:
        h = from_lambda(config.s, lam)
        rows = [_simulate_point(build_circuit(h, t, Scheme.FOUR_QUBIT)) for t in times]
        rho_a = np.array([r[0] for r in rows])
        rho_b = np.array([r[1] for r in rows])
        results[lam] = EvolutionTrace(
            times,
            rho_a,
            rho_b,
            np.array([trace_distance(a, b) for a, b in zip(rho_a, rho_b)]),
            purity=np.array([purity(r[3]) for r in rows]),
            success_probability=np.array([r[2] for r in rows]),
        )
    return results


def pseudo_pure_distinguishability(h: AptHamiltonian, t: float, epsilon: float) -> float:
    """D(t) obtained from a pseudo-pure input through the four-qubit circuit.

    The whole 16x16 ensemble state is propagated; after projecting the
    ancillas onto |00> the known identity background is subtracted before
    the work-qubit states are compared.
    """
    pps = pseudo_pure(epsilon)
    u = circuit_unitary(build_circuit(h, t, Scheme.FOUR_QUBIT))
    rho = conjugate_pseudo_pure(pps, u)
    block = rho.reshape(4, 4, 4, 4)[0, :, 0, :]
    dev = deviation_part(block, epsilon, dim=pps.dim)
    tr = np.trace(dev).real
    if tr <= 0:
        raise NormalizationError("post-selected deviation part vanished")
    dev = dev / tr
    return trace_distance(partial_trace(dev, [0], [2, 2]), partial_trace(dev, [1], [2, 2]))


# noise ----------------------------------------------------------------------

def su2_parameters(u) -> tuple[float, float, np.ndarray]:
    """Write a 2x2 unitary as exp(i gamma) exp(-i phi n.sigma); returns (gamma, phi, n)."""
    u = as_matrix(u)
    gamma = 0.5 * np.angle(np.linalg.det(u))
    v = u * np.exp(-1j * gamma)
    c = float(np.clip(0.5 * np.trace(v).real, -1.0, 1.0))
    phi = math.acos(c)
    s = math.sin(phi)
    if s < 1e-12:
        return float(gamma), phi, np.array([0.0, 0.0, 1.0])
    # v = cos(phi) I - i sin(phi) n.sigma
    nx = (-v[0, 1] - v[1, 0]).imag / (2 * s)
    ny = (v[1, 0] - v[0, 1]).real / (2 * s)
    nz = (v[1, 1] - v[0, 0]).imag / (2 * s)
    n = np.array([nx, ny, nz])
    return float(gamma), phi, n / np.linalg.norm(n)


def su2_matrix(gamma: float, phi: float, n) -> np.ndarray:
    nx, ny, nz = n
    ns = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=complex)
    return np.exp(1j * gamma) * (math.cos(phi) * np.eye(2) - 1j * math.sin(phi) * ns)


def perturb_gate(g: Gate, amplitude: float, phase: float, delta: float) -> Gate:
    """Scale the rotation angle by (1 + amplitude delta) and add phase delta pi to the gate."""
    gamma, phi, n = su2_parameters(g.matrix())
    m = su2_matrix(gamma + phase * delta * math.pi, phi * (1.0 + amplitude * delta), n)
    return u2(m, g.target, g.controls)


def perturb_circuit(circuit: Circuit, rng: np.random.Generator, delta: float) -> Circuit:
    draws = rng.uniform(-1.0, 1.0, size=(len(circuit.gates), 2))
    gates = [perturb_gate(g, a, p, delta) for g, (a, p) in zip(circuit.gates, draws)]
    return Circuit(circuit.n_qubits, gates, circuit.names)


def trial_rng(seed: int, trial: int, *key: int) -> np.random.Generator:
    """Independent stream for one trial; depends only on the indices, not on scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial), *map(int, key)]))


@dataclass
class NoiseBand:
    times: np.ndarray
    nominal: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    success_probability: np.ndarray | None = None

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains_nominal(self, tol: float = BAND_TOL) -> bool:
        return bool(np.all(self.lower <= self.nominal + tol) and np.all(self.nominal <= self.upper + tol))


def _trial_distinguishability(args) -> np.ndarray:
    config, trial = args
    times = config.times()
    out = np.empty((len(config.lambdas), times.size))
    for i, lam in enumerate(config.lambdas):
        h = from_lambda(config.s, lam)
        for j, t in enumerate(times):
            rng = trial_rng(config.seed, trial, i, j)
            noisy = perturb_circuit(build_circuit(h, t, Scheme.FOUR_QUBIT), rng, config.noise_fraction)
            rho_a, rho_b, _ = _work_states(simulate(noisy))
            out[i, j] = trace_distance(rho_a, rho_b)
    return out


def noise_monte_carlo(config: ExperimentConfig | None = None, *, workers: int = 1,
                      include_nominal: bool = True) -> dict[float, NoiseBand]:
    """Min/max envelope of D over randomly perturbed circuits, per lambda.

    The unperturbed run (zero amplitude and phase error, inside the sampled
    range) is part of the envelope unless ``include_nominal`` is False.
    """
    config = config or ExperimentConfig()
    nominal = run_experiment(config)
    jobs = [(config, k) for k in range(config.n_trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(_trial_distinguishability, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        samples = [_trial_distinguishability(job) for job in jobs]
    stack = np.stack(samples)
    bands = {}
    for i, lam in enumerate(config.lambdas):
        d_nom = nominal[lam].distinguishability
        lo = stack[:, i, :].min(axis=0)
        hi = stack[:, i, :].max(axis=0)
        if include_nominal:
            lo = np.minimum(lo, d_nom)
            hi = np.maximum(hi, d_nom)
        bands[lam] = NoiseBand(config.times(), d_nom, lo, hi, nominal[lam].success_probability)
    return bands
