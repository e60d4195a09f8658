"""
Identifying a hidden state
==========================

A decision tree cuts eight candidates down to an odd/even pair.
Telling the pair apart needs an unbounded number of further questions.
"""

import numpy as np

from zitter import discriminate, querymodel

tree = discriminate.build_reduction_tree()
print("tree depth:", tree.depth())
print("leaf pairs:", tree.leaves())

model = querymodel.make_model(8)
rng = np.random.default_rng(2)

# one game, printed step by step
t = discriminate.identify(model, 5, rng)
for step in t.steps:
    print(f"  ask {step.query}: {step.outcome.name:3s} -> {sorted(step.knowledge)}")
print("verdict:", t.verdict, "tests used:", t.tests_used)

# the number of extra rounds is geometric with ratio 1/4
stats = discriminate.tail_statistics(model, 5, 50_000, rng)
print("accuracy:", stats.verdict_accuracy)
print("tail ratio:", round(stats.tail_ratio, 4))
for r, s in enumerate(stats.survival()[:6]):
    print(f"  P(rounds > {r}) = {s:.5f}   predicted {discriminate.exceed_probability(r):.5f}")
