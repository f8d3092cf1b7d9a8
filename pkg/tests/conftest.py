import numpy as np
import pytest

from aptflow.circuit import Circuit, Gate, u2

ACCEPTANCE_LINES = []


def record(criterion: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_ket(rng, dim=2):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim=2, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_circuit(rng, n=3, n_gates=12):
    c = Circuit(n)
    for _ in range(n_gates):
        target = int(rng.integers(n))
        others = [q for q in range(n) if q != target]
        k = int(rng.integers(0, len(others) + 1))
        ctrl = [(int(q), int(rng.integers(2))) for q in rng.permutation(others)[:k]]
        kind = rng.choice(["h", "x", "y", "z", "ry", "u2"])
        if kind == "ry":
            c.append(Gate("ry", target, tuple(ctrl), param=float(rng.uniform(-4, 4))))
        elif kind == "u2":
            c.append(u2(random_unitary(rng), target, ctrl))
        else:
            c.append(Gate(str(kind), target, tuple(ctrl)))
    return c
