"""
Distinguishability and information backflow
===========================================

Start from |0> and |1> and track how well the evolved states can be told
apart, D(t) = (1/2) tr|rho_0(t) - rho_1(t)|. In the broken phase D returns
to 1 once per period pi / (s sqrt(lambda^2 - 1)); in the unbroken phase it
decays and never comes back.
"""

import numpy as np

from aptflow import backflow_witness, distinguishability_series, from_lambda, oscillation_metrics

s = 3.0
times = np.linspace(0, 3, 13)

###############################################################################
# D(t) on a coarse grid for the four values used in the experiment.

for lam in (2.0, 1.5, 1.01, 0.5):
    trace = distinguishability_series(from_lambda(s, lam), times)
    witness = backflow_witness(trace)
    print(f"lambda={lam:5.2f}", np.round(trace.distinguishability, 3), "backflow:", witness.has_backflow)

###############################################################################
# Period and amplitude from the numerics, next to the formulas.
# The amplitude is 2 / (lambda^2 + 1).

print(f"{'lambda':>7} {'period':>10} {'formula':>10} {'amplitude':>10}")
for lam in (1.1, 1.5, 2.0, 3.0, 5.0):
    m = oscillation_metrics(s, lam)
    print(f"{lam:7.2f} {m.period:10.6f} {m.period_formula:10.6f} {m.amplitude:10.6f}")
