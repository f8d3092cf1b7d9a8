"""Gate-list circuits over qubits, exact statevector simulation and text I/O.

Qubit 0 is the most significant bit of a basis index, so ``ket("01")`` has
qubit 0 in |0> and qubit 1 in |1>.

Text format, one gate per line::

    qubits 3
    u2 q0 <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
    ry q1 0.5 ctrl q0=0
    h q0

Mnemonics are ``h x y z ry u2``; ``#`` starts a comment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CircuitFormatError, DimensionError, NormalizationError, PostSelectionError
from .numerics import HADAMARD, SIGMA_X, SIGMA_Y, SIGMA_Z, is_unitary, kron_all, partial_trace, projector

INPUT_NORM_TOL = 1e-12
OUTPUT_NORM_TOL = 1e-10
UNITARY_TOL = 1e-12
POSTSELECT_FLOOR = 1e-30

_FIXED = {"h": HADAMARD, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
KINDS = ("h", "x", "y", "z", "ry", "u2")


def ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """A single-target gate with optional polarity-tagged controls.

    ``controls`` holds ``(qubit, polarity)`` pairs; polarity 0 means the gate
    fires when that control qubit is |0>.
    """

    kind: str
    target: int
    controls: tuple[tuple[int, int], ...] = ()
    param: float | None = None
    unitary: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CircuitFormatError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "controls", tuple((int(q), int(p)) for q, p in self.controls))
        for q, p in self.controls:
            if p not in (0, 1):
                raise CircuitFormatError(f"control polarity must be 0 or 1, got {p}")
        if self.kind == "ry":
            if self.param is None or not math.isfinite(self.param):
                raise CircuitFormatError("ry needs a finite angle")
            object.__setattr__(self, "param", float(self.param))
        if self.kind == "u2":
            if self.unitary is None:
                raise CircuitFormatError("u2 needs a matrix")
            u = np.array(self.unitary, dtype=complex)
            if u.shape != (2, 2) or not is_unitary(u, UNITARY_TOL):
                raise CircuitFormatError("u2 matrix must be a 2x2 unitary")
            u.setflags(write=False)
            object.__setattr__(self, "unitary", u)

    def matrix(self) -> np.ndarray:
        if self.kind == "ry":
            return ry(self.param)
        if self.kind == "u2":
            return self.unitary
        return _FIXED[self.kind]

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + tuple(q for q, _ in self.controls)


def u2(matrix, target: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("u2", target, tuple(controls), unitary=np.asarray(matrix, dtype=complex))


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DimensionError("a circuit needs at least one qubit")
        for g in self.gates:
            self._validate(g)

    def _validate(self, g: Gate):
        qs = g.qubits
        if any(q < 0 or q >= self.n_qubits for q in qs):
            raise DimensionError(f"gate {g.kind} touches qubits {qs} outside 0..{self.n_qubits - 1}")
        if len(set(qs)) != len(qs):
            raise DimensionError(f"gate {g.kind} has overlapping target/control qubits {qs}")

    def append(self, g: Gate) -> "Circuit":
        self._validate(g)
        self.gates.append(g)
        return self

    def __len__(self):
        return len(self.gates)

    def same_as(self, other: "Circuit", atol: float = 1e-15) -> bool:
        """Structural equality with matrices compared entrywise within ``atol``."""
        if self.n_qubits != other.n_qubits or len(self.gates) != len(other.gates):
            return False
        for a, b in zip(self.gates, other.gates):
            if a != b:
                return False
            if a.kind == "u2" and np.max(np.abs(a.unitary - b.unitary)) > atol:
                return False
        return True

    def gate_counts(self) -> dict[int, int]:
        """Number of gates keyed by how many qubits each one touches."""
        counts: dict[int, int] = {}
        for g in self.gates:
            counts[len(g.qubits)] = counts.get(len(g.qubits), 0) + 1
        return counts


def _apply(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    psi = state.reshape((2,) * n)
    sel = [slice(None)] * n
    for q, p in g.controls:
        sel[q] = p
    sel = tuple(sel)
    sub = psi[sel]
    # the target axis index within the sliced block
    axis = g.target - sum(1 for q, _ in g.controls if q < g.target)
    sub = np.moveaxis(np.tensordot(g.matrix(), sub, axes=([1], [axis])), 0, axis)
    out = psi.copy()
    out[sel] = sub
    return out.reshape(-1)


def simulate(circuit: Circuit, state=None) -> np.ndarray:
    """Apply the gates in order to ``state`` (default |0...0>)."""
    dim = 2 ** circuit.n_qubits
    if state is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.array(state, dtype=complex).ravel()
        if psi.shape != (dim,):
            raise DimensionError(f"state of length {psi.size} for {circuit.n_qubits} qubits")
        if abs(np.linalg.norm(psi) - 1.0) > INPUT_NORM_TOL:
            raise NormalizationError(f"input state has norm {np.linalg.norm(psi)!r}")
    for g in circuit.gates:
        psi = _apply(psi, g, circuit.n_qubits)
    if abs(np.linalg.norm(psi) - 1.0) > OUTPUT_NORM_TOL:
        raise NormalizationError("simulation lost normalization")
    return psi


def gate_operator(g: Gate, n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of one gate: I - P + P (x) U with P the control projector."""
    proj = [np.eye(2, dtype=complex) for _ in range(n)]
    for q, p in g.controls:
        proj[q] = np.diag([1.0 - p, float(p)]).astype(complex)
    active = list(proj)
    active[g.target] = g.matrix()
    return np.eye(2 ** n, dtype=complex) - kron_all(*proj) + kron_all(*active)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    n = circuit.n_qubits
    u = np.eye(2 ** n, dtype=complex)
    for g in circuit.gates:
        u = gate_operator(g, n) @ u
    return u


def _branch(state, ancillas: Sequence[int], pattern: str, n: int) -> np.ndarray:
    if len(pattern) != len(ancillas) or set(pattern) - {"0", "1"}:
        raise DimensionError(f"pattern {pattern!r} does not match ancillas {list(ancillas)}")
    psi = np.asarray(state, dtype=complex).reshape((2,) * n)
    sel = [slice(None)] * n
    for q, b in zip(ancillas, pattern):
        sel[q] = int(b)
    return psi[tuple(sel)].reshape(-1)


def _n_qubits(state) -> int:
    size = np.asarray(state).size
    n = size.bit_length() - 1
    if size != 2 ** n or n < 1:
        raise DimensionError(f"state length {size} is not a power of two")
    return n


def projected_branch(state, ancillas: Sequence[int], pattern: str) -> np.ndarray:
    """Unnormalized work-register amplitudes conditioned on ``pattern``."""
    return _branch(state, ancillas, pattern, _n_qubits(state))


def post_select(state, ancillas: Sequence[int], pattern: str) -> tuple[np.ndarray, float]:
    """Project the ancillas onto ``pattern`` and renormalize.

    Returns the remaining qubits' state (in ascending qubit order) and the
    probability of the selected outcome.
    """
    branch = projected_branch(state, ancillas, pattern)
    prob = float(np.vdot(branch, branch).real)
    if prob < POSTSELECT_FLOOR:
        raise PostSelectionError(f"post-selection probability {prob:.3e} is too small")
    return branch / math.sqrt(prob), prob


def environment_view(state, ancillas: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of the work qubits with the ancillas traced out."""
    n = _n_qubits(state)
    keep = [q for q in range(n) if q not in set(ancillas)]
    return partial_trace(projector(state), keep, [2] * n)


# text format ---------------------------------------------------------------

def _num(x: float) -> str:
    return format(float(x), ".17g")


def export_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        parts = [g.kind, f"q{g.target}"]
        if g.kind == "ry":
            parts.append(_num(g.param))
        elif g.kind == "u2":
            for z in g.unitary.ravel():
                parts += [_num(z.real), _num(z.imag)]
        if g.controls:
            parts.append("ctrl")
            parts += [f"q{q}={p}" for q, p in g.controls]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _qubit(tok: str, lineno: int) -> int:
    if not tok.startswith("q") or not tok[1:].isdigit():
        raise CircuitFormatError(f"line {lineno}: bad qubit {tok!r}")
    return int(tok[1:])


def _float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise CircuitFormatError(f"line {lineno}: bad number {tok!r}") from None
    if not math.isfinite(x):
        raise CircuitFormatError(f"line {lineno}: non-finite number {tok!r}")
    return x


def parse_circuit(text: str) -> Circuit:
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if circuit is None:
            if toks[0] != "qubits" or len(toks) != 2 or not toks[1].isdigit():
                raise CircuitFormatError(f"line {lineno}: expected 'qubits N' header")
            circuit = Circuit(int(toks[1]))
            continue
        kind = toks[0]
        if kind not in KINDS:
            raise CircuitFormatError(f"line {lineno}: unknown mnemonic {kind!r}")
        if len(toks) < 2:
            raise CircuitFormatError(f"line {lineno}: missing target")
        target = _qubit(toks[1], lineno)
        rest = toks[2:]
        n_params = {"ry": 1, "u2": 8}.get(kind, 0)
        if len(rest) < n_params:
            raise CircuitFormatError(f"line {lineno}: {kind} expects {n_params} parameters")
        params = [_float(tok, lineno) for tok in rest[:n_params]]
        rest = rest[n_params:]
        controls = []
        if rest:
            if rest[0] != "ctrl" or len(rest) == 1:
                raise CircuitFormatError(f"line {lineno}: unexpected tokens {rest}")
            for tok in rest[1:]:
                q, _, p = tok.partition("=")
                if p not in ("0", "1"):
                    raise CircuitFormatError(f"line {lineno}: bad control {tok!r}")
                controls.append((_qubit(q, lineno), int(p)))
        try:
            if kind == "ry":
                gate = Gate("ry", target, tuple(controls), param=params[0])
            elif kind == "u2":
                m = np.array([complex(params[i], params[i + 1]) for i in range(0, 8, 2)]).reshape(2, 2)
                gate = u2(m, target, controls)
            else:
                gate = Gate(kind, target, tuple(controls))
            circuit.append(gate)
        except DimensionError as exc:
            raise CircuitFormatError(f"line {lineno}: {exc}") from None
    if circuit is None:
        raise CircuitFormatError("empty circuit text")
    return circuit
