import math

import numpy as np
import pytest

from aptflow.circuit import circuit_unitary, projected_branch, simulate
from aptflow.exceptions import DomainError
from aptflow.hamiltonian import AptHamiltonian, evolve, from_lambda, propagator
from aptflow.lcu import (
    ANCILLAS, Scheme, angle_plan, build_circuit, environment_state, input_state, lcu_coefficients,
    pair_unitary, prepare_lcu_state, reflection, run_circuit,
)
from aptflow.numerics import PAULIS, expm_oracle, ket, projector
from aptflow.observables import purity, trace_distance

from conftest import random_ket


def test_coefficients_at_zero_time():
    w = lcu_coefficients(from_lambda(3, 2), 0.0).weights
    assert np.array_equal(w, [1, 0, 0, 0])


def test_coefficients_half_period_broken():
    # at t = T/2 = pi/(2w'): cos = 0, sin(Omega t)/Omega = 1/(3 sqrt 3)
    h = from_lambda(3, 2)
    t = math.pi / (6 * math.sqrt(3))
    w = lcu_coefficients(h, t).weights
    k = 1 / (3 * math.sqrt(3))
    assert np.max(np.abs(w - np.array([0, 3 * k, 0, -6j * k]))) < 1e-15
    col = lcu_coefficients(h, t).normalized_column
    assert np.allclose(np.abs(col) ** 2, [0, 0.2, 0, 0.8], atol=1e-15)


def test_coefficients_general_form():
    r, theta, sv, mu = 1.3, 0.4, 0.7, 2.1
    w = lcu_coefficients(AptHamiltonian(r, theta, sv, mu), 0.6).weights
    z = -1j * r * math.cos(theta)
    assert w[1] / w[3] == pytest.approx((sv + mu) / 2 / z, rel=1e-14)
    assert w[2] / w[3] == pytest.approx(0.5j * (sv - mu) / z, rel=1e-14)


def test_reconstruction_matches_oracle(rng):
    for _ in range(100):
        h = AptHamiltonian(*rng.uniform(-3, 3, 4))
        t = rng.uniform(0, 2)
        dec = lcu_coefficients(h, t)
        ref = expm_oracle(h.matrix(), t) * math.exp(-h.damping * t)
        assert np.max(np.abs(dec.operator() - ref)) <= 1e-12 * max(1, np.max(np.abs(ref)))


def test_non_finite_time():
    with pytest.raises(DomainError):
        lcu_coefficients(from_lambda(1, 2), math.inf)


def test_reflection_is_involution():
    r = reflection(0.37)
    assert np.allclose(r @ r, np.eye(2))


@pytest.mark.parametrize("a, b", [(0.6, 0.8), (1, 0), (0, 1), (-0.3, 0.2), (0.6j, 0.8), (1 + 1j, -2j), (0, 0)])
def test_pair_unitary_first_column(a, b):
    u = pair_unitary(a, b)
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-15)
    n = math.hypot(abs(a), abs(b))
    if n:
        assert np.allclose(u[:, 0], np.array([a, b]) / n, atol=1e-15)
    else:
        assert np.array_equal(u, np.eye(2))


def test_angle_plan_loads_column(rng):
    for _ in range(50):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        c /= np.linalg.norm(c)
        plan = angle_plan(c)
        assert np.max(np.abs(plan.matrix()[:, 0] - c)) < 1e-14
        assert math.cos(plan.theta0) == pytest.approx(math.hypot(abs(c[0]), abs(c[1])))


@pytest.mark.parametrize("col", [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0.6, 0, -0.8j], [0.5, 0.5, 0.5, 0.5]])
def test_angle_plan_special_columns(col):
    plan = angle_plan(col)
    assert np.allclose(plan.matrix()[:, 0], col, atol=1e-15)


def test_angle_plan_rejects_bad_columns():
    with pytest.raises(DomainError):
        angle_plan([0, 0, 0, 0])
    with pytest.raises(DomainError):
        angle_plan([1, 0, 0])


@pytest.mark.parametrize("size", [1, 2, 3, 4, 5, 8])
def test_prepare_lcu_state(rng, size):
    w = rng.normal(size=size) + 1j * rng.normal(size=size)
    c = prepare_lcu_state(w)
    out = simulate(c)
    target = np.zeros(out.size, dtype=complex)
    target[:size] = w / np.linalg.norm(w)
    assert np.max(np.abs(out - target)) < 1e-14


def test_prepare_lcu_state_rejects_zero():
    with pytest.raises(DomainError):
        prepare_lcu_state([0, 0])


def test_gate_counts_three_qubit():
    c = build_circuit(from_lambda(3, 2), 0.3)
    assert len(c) == 8
    assert c.gate_counts() == {1: 3, 2: 2, 3: 3}
    assert c.names == ("a0", "a1", "w0")


def test_gate_counts_four_qubit():
    c = build_circuit(from_lambda(3, 2), 0.3, Scheme.FOUR_QUBIT)
    assert len(c) == 12
    assert c.gates[0].kind == "x" and c.gates[0].target == 3


def test_identity_branch_is_optional(rng):
    h = AptHamiltonian(*rng.uniform(-2, 2, 4))
    a = circuit_unitary(build_circuit(h, 0.4))
    b = circuit_unitary(build_circuit(h, 0.4, include_identity=True))
    assert np.max(np.abs(a - b)) < 1e-15


def test_zero_time_amplitude():
    psi = np.array([0.6, 0.8j])
    out = simulate(build_circuit(from_lambda(3, 2), 0.0), input_state(psi))
    assert np.allclose(projected_branch(out, ANCILLAS, "00"), psi / 2, atol=1e-15)
    _, prob, _ = run_circuit(from_lambda(3, 2), 0.0, psi)
    assert prob == pytest.approx(0.25, abs=1e-15)


def test_branch_is_half_the_weighted_sum(rng):
    for _ in range(30):
        h = AptHamiltonian(*rng.uniform(-3, 3, 4))
        t = rng.uniform(0, 2)
        psi = random_ket(rng)
        dec = lcu_coefficients(h, t)
        col = dec.normalized_column
        expected = 0.5 * sum(c * PAULIS[lab] for c, lab in zip(col, dec.labels)) @ psi
        out = simulate(build_circuit(h, t), input_state(psi))
        assert np.max(np.abs(projected_branch(out, ANCILLAS, "00") - expected)) < 1e-14


def test_post_selected_state_is_evolved_state(rng):
    worst = 0.0
    for _ in range(100):
        h = AptHamiltonian(*rng.uniform(-3, 3, 4))
        t = rng.uniform(0, 2)
        psi = random_ket(rng)
        work, _, _ = run_circuit(h, t, psi)
        exact = propagator(h, t) @ psi
        exact /= np.linalg.norm(exact)
        worst = max(worst, 1 - abs(np.vdot(exact, work)) ** 2)
    assert worst < 1e-12


def test_success_probability_formula(rng):
    h = from_lambda(3, 0.5)
    for t in (0.1, 0.5, 1.0):
        psi = random_ket(rng)
        _, prob, _ = run_circuit(h, t, psi)
        dec = lcu_coefficients(h, t)
        amp = dec.operator() @ psi
        assert prob == pytest.approx(np.vdot(amp, amp).real / (4 * np.linalg.norm(dec.weights) ** 2), rel=1e-13)


def test_environment_purity_half_period():
    h = from_lambda(3, 2)
    env = environment_state(h, math.pi / (6 * math.sqrt(3)))
    assert np.allclose(env, np.diag([0.8, 0.2]), atol=1e-15)
    assert purity(env) == pytest.approx(0.68, abs=1e-14)


def test_environment_trivial_at_zero():
    env = environment_state(from_lambda(3, 2), 0.0)
    assert np.allclose(env, projector([1, 0]), atol=1e-15)


def test_environment_purity_oscillates_in_broken_phase():
    h = from_lambda(3, 2)
    period = math.pi / (3 * math.sqrt(3))
    assert purity(environment_state(h, period)) == pytest.approx(1.0, abs=1e-12)
    assert purity(environment_state(h, period / 2)) < 0.7


def test_environment_purity_settles_in_unbroken_phase():
    # at large t the weights go to (1 - lam^2, 1, 0, lam^2) up to scale: |0> and |1> each get half
    h = from_lambda(3, 0.5)
    p = [purity(environment_state(h, t)) for t in (1.0, 2.0, 3.0)]
    assert p[0] > p[1] > p[2]
    assert p[2] == pytest.approx(0.5000000000000324, abs=1e-12)


def test_four_qubit_distinguishability_matches_exact():
    for lam in (2.0, 1.5, 1.01, 0.5):
        h = from_lambda(3, lam)
        for t in np.linspace(0, 1, 10):
            work, _, _ = run_circuit(h, t, scheme=Scheme.FOUR_QUBIT)
            joint = projector(work).reshape(2, 2, 2, 2)
            rho_a = np.einsum("ijkj->ik", joint)
            rho_b = np.einsum("jijk->ik", joint)
            exact = trace_distance(evolve(h, projector([1, 0]), t), evolve(h, projector([0, 1]), t))
            assert abs(trace_distance(rho_a, rho_b) - exact) < 1e-12


def test_four_qubit_input_state():
    assert np.array_equal(input_state(ket("00"), "four"), ket("0000"))
