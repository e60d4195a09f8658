"""
How small is the signal?
========================

With one satisfying input among 2**n the output expectation is about 2**-n.
Giving the witness the fastest tremble makes the derivative order one.
"""

import numpy as np

from zitter import qtp

for n in (4, 6, 8, 10):
    plain = qtp.derivative_magnitude_study(n, 1, amplify=False, rng=np.random.default_rng(n))
    fast = qtp.derivative_magnitude_study(n, 1, amplify=True, rng=np.random.default_rng(n))
    lo, hi = plain.value_bounds
    print(f"n={n:2d}  max|f|={plain.max_value:.2e} in [{lo:.2e}, {hi:.2e}]  "
          f"max|f'| {plain.max_derivative:.2e} -> {fast.max_derivative:.3f} with fast witness")
