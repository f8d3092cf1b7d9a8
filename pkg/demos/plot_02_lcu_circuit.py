"""
Running exp(-iHt) on a dilated circuit
======================================

exp(-iHt) is not unitary, but it is a sum of four Paulis with complex
weights. Two ancillas hold the weights, doubly-controlled Paulis apply
each term, and keeping only the |00> ancilla outcome leaves the work
qubit in the normalized exp(-iHt)|psi>.
"""

import numpy as np

from aptflow import AptHamiltonian, build_circuit, export_circuit, lcu_coefficients, propagator, run_circuit

###############################################################################
# Pauli weights of the propagator for a generic H.

h = AptHamiltonian(r=1.2, theta=0.4, s=0.8, mu=2.0)
t = 0.7
dec = lcu_coefficients(h, t)
for weight, label, _ in dec.terms:
    print(f"{label}: {weight:.6f}")

###############################################################################
# The circuit itself: state loading, three controlled Paulis and two
# Hadamards. The identity term needs no gate.

circuit = build_circuit(h, t)
print(export_circuit(circuit))

###############################################################################
# Compare the post-selected output with the direct matrix evolution.

psi = np.array([0.6, 0.8j])
work, prob, _ = run_circuit(h, t, psi)
exact = propagator(h, t) @ psi
exact /= np.linalg.norm(exact)
print("fidelity:", abs(np.vdot(exact, work)) ** 2)
print("success probability:", prob)
