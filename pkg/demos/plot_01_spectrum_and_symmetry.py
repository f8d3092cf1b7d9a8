"""
Phases of an anti-PT-symmetric qubit
====================================

The family H = s (i X + lambda Z) has eigenvalues +-s sqrt(lambda^2 - 1).
Above lambda = 1 the gap is real and the dynamics oscillate; below it the
gap is imaginary and the dynamics relax. At lambda = 1 both eigenvalues
and eigenvectors merge.
"""

import numpy as np

from aptflow import from_lambda, spectrum, symmetry_check

###############################################################################
# Walk lambda across the exceptional point and look at the gap w.

s = 3.0
for lam in (0.0, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0):
    sp = spectrum(from_lambda(s, lam))
    print(f"lambda={lam:4.1f}  w={sp.w:.6f}  regime={sp.regime.value}")

###############################################################################
# Every member of the family anticommutes with PT (P = X, T = complex
# conjugation), and the general form of H is minus its own transpose.

h = from_lambda(s, 2.0)
report = symmetry_check(h)
print(h.matrix())
print("anti-PT:", report.anti_commutes, " H^T = -H:", report.negative_transpose)

###############################################################################
# The numerical eigenvalues agree with the closed form.

print(np.sort_complex(np.linalg.eigvals(h.matrix())), 3 * np.sqrt(3))
