"""Linear-combination-of-unitaries synthesis of exp(-iHt).

The traceless part of H is ``n . sigma`` with
``n = (i(s+mu)/2, (mu-s)/2, r cos(theta))``, hence

    exp(-iHt) ~ f1 I + (s+mu)/2 f2 X + i(s-mu)/2 f2 Y - i r cos(theta) f2 Z

up to the scalar ``exp(r sin(theta) t)``. The four weights are loaded into
two ancillas, each Pauli is applied under a doubly-controlled gate, and a
final H (x) H on the ancillas followed by post-selection on |00> leaves the
work qubit in ``(1/2) sum_i c_i U_i |psi>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, environment_view, post_select, simulate, u2
from .exceptions import DomainError
from .hamiltonian import AptHamiltonian, gap_functions
from .numerics import I2, PAULIS

PAULI_ORDER = ("I", "X", "Y", "Z")
ZERO_PAIR_TOL = 1e-300
REAL_TOL = 1e-15

ANCILLAS = (0, 1)


@dataclass(frozen=True)
class LcuDecomposition:
    weights: np.ndarray
    labels: tuple[str, ...] = PAULI_ORDER

    @property
    def terms(self) -> list[tuple[complex, str, np.ndarray]]:
        return [(complex(a), lab, PAULIS[lab]) for a, lab in zip(self.weights, self.labels)]

    @property
    def one_norm(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    @property
    def normalized_column(self) -> np.ndarray:
        return self.weights / np.linalg.norm(self.weights)

    def operator(self) -> np.ndarray:
        return sum(a * PAULIS[lab] for a, lab in zip(self.weights, self.labels))


def lcu_coefficients(h: AptHamiltonian, t: float) -> LcuDecomposition:
    """Pauli weights (I, X, Y, Z) of exp(-iHt) with the scalar damping factor removed."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    f1, f2 = gap_functions(h.radicand, t)
    weights = np.array([
        f1,
        0.5 * (h.s + h.mu) * f2,
        0.5j * (h.s - h.mu) * f2,
        -1j * h.r * math.cos(h.theta) * f2,
    ], dtype=complex)
    return LcuDecomposition(weights)


def reflection(theta: float) -> np.ndarray:
    """R(theta) = [[cos, sin], [sin, -cos]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def pair_unitary(a: complex, b: complex) -> np.ndarray:
    """A 2x2 unitary whose first column is (a, b) / |(a, b)|.

    Real pairs give the reflection form [[a, b], [b, -a]]; complex pairs use
    [[a, -b*], [b, a*]]. A zero pair gives the identity.
    """
    norm = math.hypot(abs(a), abs(b))
    if norm <= ZERO_PAIR_TOL:
        return I2.copy()
    a, b = complex(a) / norm, complex(b) / norm
    if abs(a.imag) <= REAL_TOL and abs(b.imag) <= REAL_TOL:
        return np.array([[a.real, b.real], [b.real, -a.real]], dtype=complex)
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=complex)


@dataclass(frozen=True)
class AnglePlan:
    theta0: float
    theta1: float
    theta2: float
    v0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def matrix(self) -> np.ndarray:
        """(V1 (+) V2)(V0 (x) I) on the two ancillas."""
        block = np.zeros((4, 4), dtype=complex)
        block[:2, :2] = self.v1
        block[2:, 2:] = self.v2
        return block @ np.kron(self.v0, I2)


def angle_plan(column) -> AnglePlan:
    """Gates V0, V1, V2 whose product loads ``column`` (4 amplitudes) on two qubits."""
    if isinstance(column, LcuDecomposition):
        column = column.normalized_column
    c = np.asarray(column, dtype=complex).ravel()
    if c.shape != (4,):
        raise DomainError("angle plan needs a 4-entry column")
    norm = np.linalg.norm(c)
    if not norm > 0:
        raise DomainError("column is zero")
    c = c / norm
    n1 = math.hypot(abs(c[0]), abs(c[1]))
    n2 = math.hypot(abs(c[2]), abs(c[3]))
    theta0 = math.acos(min(1.0, n1))
    v1 = pair_unitary(c[0], c[1])
    v2 = pair_unitary(c[2], c[3])
    # diagnostic angles; the magnitude of the leading entry of each sub-pair
    theta1 = math.acos(min(1.0, abs(c[0]) / n1)) if n1 > ZERO_PAIR_TOL else 0.0
    theta2 = math.acos(min(1.0, abs(c[2]) / n2)) if n2 > ZERO_PAIR_TOL else 0.0
    return AnglePlan(theta0, theta1, theta2, pair_unitary(n1, n2), v1, v2)


def _split_gates(amps: np.ndarray, level: int, n_qubits: int, prefix: tuple[int, ...], gates: list):
    half = amps.size // 2
    left, right = amps[:half], amps[half:]
    controls = tuple((q, bit) for q, bit in enumerate(prefix))
    if half == 1:
        gates.append(u2(pair_unitary(left[0], right[0]), level, controls))
        return
    nl, nr = np.linalg.norm(left), np.linalg.norm(right)
    gates.append(u2(pair_unitary(nl, nr), level, controls))
    _split_gates(left, level + 1, n_qubits, prefix + (0,), gates)
    _split_gates(right, level + 1, n_qubits, prefix + (1,), gates)


def prepare_lcu_state(weights: Sequence[complex]) -> Circuit:
    """Circuit taking |0...0> to the l2-normalized ``weights`` (zero padded to 2^m).

    Built by recursive binary splitting: one uncontrolled gate on the first
    qubit, then polarity-controlled gates on each following qubit.
    """
    w = np.asarray(weights, dtype=complex).ravel()
    if w.size < 1:
        raise DomainError("need at least one weight")
    norm = np.linalg.norm(w)
    if not norm > 0:
        raise DomainError("weights are all zero")
    n = max(1, math.ceil(math.log2(w.size)))
    amps = np.zeros(2 ** n, dtype=complex)
    amps[:w.size] = w / norm
    gates: list[Gate] = []
    _split_gates(amps, 0, n, (), gates)
    return Circuit(n, gates)


class Scheme(str, Enum):
    THREE_QUBIT = "three"
    FOUR_QUBIT = "four"


QUBIT_NAMES = {
    Scheme.THREE_QUBIT: ("a0", "a1", "w0"),
    Scheme.FOUR_QUBIT: ("a0", "a1", "w0", "w1"),
}

_PATTERNS = {"I": (0, 0), "X": (0, 1), "Y": (1, 0), "Z": (1, 1)}


def build_circuit(h: AptHamiltonian, t: float, scheme: Scheme | str = Scheme.THREE_QUBIT, *,
                  include_identity: bool = False) -> Circuit:
    """Ancilla-dilated circuit for exp(-iHt).

    Qubits are ``a0, a1, w0`` (three-qubit) or ``a0, a1, w0, w1`` where the
    second work qubit starts with an X and every controlled Pauli acts on both
    work qubits.
    """
    scheme = Scheme(scheme)
    names = QUBIT_NAMES[scheme]
    work = list(range(2, len(names)))
    plan = angle_plan(lcu_coefficients(h, t))
    c = Circuit(len(names), names=names)
    if scheme is Scheme.FOUR_QUBIT:
        c.append(Gate("x", 3))
    c.append(u2(plan.v0, 0))
    c.append(u2(plan.v1, 1, [(0, 0)]))
    c.append(u2(plan.v2, 1, [(0, 1)]))
    for label in PAULI_ORDER:
        ctrl = tuple(zip(ANCILLAS, _PATTERNS[label]))
        for q in work:
            if label == "I":
                if include_identity:
                    c.append(u2(I2, q, ctrl))
            else:
                c.append(Gate(label.lower(), q, ctrl))
    c.append(Gate("h", 0))
    c.append(Gate("h", 1))
    return c


def input_state(psi, scheme: Scheme | str = Scheme.THREE_QUBIT) -> np.ndarray:
    """|00>_a (x) work state; the four-qubit scheme takes a two-qubit work ket."""
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    anc = np.zeros(4, dtype=complex)
    anc[0] = 1.0
    return np.kron(anc, psi)


def run_circuit(h: AptHamiltonian, t: float, psi=None, scheme: Scheme | str = Scheme.THREE_QUBIT):
    """Build, simulate and post-select; returns ``(work_state, success_probability, output)``.

    ``psi`` defaults to |0> (three-qubit) or |00> (four-qubit) on the work
    register; the four-qubit circuit flips the second work qubit itself.
    """
    scheme = Scheme(scheme)
    n_work = 1 if scheme is Scheme.THREE_QUBIT else 2
    if psi is None:
        psi = np.zeros(2 ** n_work, dtype=complex)
        psi[0] = 1.0
    out = simulate(build_circuit(h, t, scheme), input_state(psi, scheme))
    work, prob = post_select(out, ANCILLAS, "00")
    return work, prob, out


def environment_state(h: AptHamiltonian, t: float, psi=None) -> np.ndarray:
    """Work-qubit density matrix with the ancillas traced out (no post-selection)."""
    _, _, out = run_circuit(h, t, psi, Scheme.THREE_QUBIT)
    return environment_view(out, ANCILLAS)
