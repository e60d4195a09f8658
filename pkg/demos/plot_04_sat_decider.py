"""
Deciding satisfiability from a trembling input
==============================================

Prepare every input at once with weights that wobble in theta.
The output bit only wobbles if some inputs satisfy the formula and some do not.
"""

import numpy as np

from zitter import qtp
from zitter.formula import brute_force_table, parse

rng = np.random.default_rng(3)
sched = qtp.TrembleSchedule(3, 0.25)
thetas = np.linspace(0, 2 * np.pi, 7)

for text in ("x1 & ~x1", "x1 | ~x1", "(x1 | x2) & ~x3"):
    table = brute_force_table(parse(text, num_vars=3))
    gc = qtp.build_computer(table)
    f, df = qtp.scan(gc, sched, thetas)
    verdict = qtp.decide_sat(gc, sched, 16, rng)
    print(f"{text:18s} |S|={table.satisfying_count}  verdict {verdict.outcome.name}")
    print("   f :", np.round(f, 4))
    print("   f':", np.round(df, 4))

# the simulated expectation matches a closed form
table = brute_force_table(parse("(x1 | x2) & ~x3"))
gc = qtp.build_computer(table)
print("closed form gap:", abs(qtp.output_expectation(gc, sched, 1.1)
                              - qtp.closed_form_expectation(table, sched, 1.1)))

# reading f from finitely many shots has binomial error
p_hat = qtp.estimate_expectation(gc, sched, 1.1, 4000, rng)
print(f"estimate {p_hat:.4f} +/- {qtp.binomial_stderr(p_hat, 4000):.4f}")
