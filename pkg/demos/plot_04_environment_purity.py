"""
What the ancillas see
=====================

Without post-selection the ancillas act as an environment. Tracing them
out leaves the work qubit in a mixed state whose purity tracks the flow of
information: it comes back to 1 every period in the broken phase and
settles at 1/2 (maximally mixed) in the unbroken phase.
"""

import numpy as np

from aptflow import environment_state, from_lambda, purity

s = 3.0
period = np.pi / (s * np.sqrt(3))

for lam, ts in ((2.0, np.linspace(0, 2 * period, 9)), (0.5, np.linspace(0, 3, 7))):
    h = from_lambda(s, lam)
    values = [purity(environment_state(h, t)) for t in ts]
    print(f"lambda={lam}:", np.round(values, 4))
