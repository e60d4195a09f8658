"""
Outcome tables of the two query models
======================================

Each state ``i`` answers a question ``k`` with probability ``P(i, k)``.
The Hilbert realisation uses two mutually unbiased bases.
"""

import numpy as np

from zitter import core, querymodel

for size in (4, 8):
    model = querymodel.make_model(size)
    print(f"{size}-state table")
    print(model.table)

    real = querymodel.realize_in_hilbert(model)
    # Born probabilities computed from the filters agree with the table
    print("max |Born - table| =", np.abs(real.born_table() - model.table).max())

# sample the question "are you in state 2?" against state 1
model = querymodel.make_model(8)
real = querymodel.realize_in_hilbert(model)
rng = np.random.default_rng(1)
z = real.filter("B")
idx = core.sample_outcomes(real.state(1), z, 100_000, rng)
print("P(1, 2) from shots:", np.mean(z.eigenvalues[idx] == 2), "table:", model.p(1, 2))
