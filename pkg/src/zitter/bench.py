"""Classical exhaustive enumeration against the simulated trembling-input decider.

The simulation itself costs O(2**n) per theta sample, so wall-clock numbers
only show the exp(n) growth of both routes on a desk computer; no speedup is
claimed. Work counts are deterministic and separated from timings.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import corpus, formula, qtp


@dataclass(frozen=True)
class BenchRow:
    n: int
    clauses: int
    classical_evaluations: int
    processor_runs: int
    satisfiable: bool
    verdict: str
    agree: bool
    classical_seconds: float
    qtp_seconds: float

    def counts(self) -> dict:
        return {
            "n": self.n, "clauses": self.clauses,
            "classical_evaluations": self.classical_evaluations,
            "processor_runs": self.processor_runs,
            "satisfiable": self.satisfiable, "verdict": self.verdict, "agree": self.agree,
        }


def run_bench(ns, rng: np.random.Generator, samples: int = 8, epsilon: float = 0.25,
              ratio: float = 4.26) -> list[BenchRow]:
    rows = []
    for n in ns:
        m = int(round(ratio * n))
        ast = corpus.random_3cnf(n, m, rng)

        start = time.perf_counter()
        table = formula.brute_force_table(ast)
        classical = time.perf_counter() - start

        start = time.perf_counter()
        verdict = qtp.decide_sat(qtp.build_computer(table), qtp.TrembleSchedule(n, epsilon), samples, rng)
        quantum = time.perf_counter() - start

        sat = not table.is_unsat
        rows.append(BenchRow(n, m, 2 ** n, samples, sat, verdict.outcome.value,
                             verdict.outcome.satisfiable == sat, classical, quantum))
    return rows
