"""Self-check suite behind ``zitter verify``.

Each check returns ``(passed, detail)``. The checks are quick, seeded versions
of the invariants exercised by the pytest suite.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core, corpus, discriminate, formula, qtp, querymodel


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_state(dim: int, rng: np.random.Generator) -> core.StateVector:
    return core.StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def check_spectral_reconstruction(rng):
    worst = 0.0
    for dim in (1, 2, 3, 5, 8, 16, 32, 64):
        h = random_hermitian(dim, rng)
        d = core.spectral_decompose(h)
        worst = max(worst, float(np.max(np.abs(d.reconstruct() - h))))
    return worst < 1e-10, f"max reconstruction error {worst:.3g}"


def check_evolution(rng):
    worst_norm = worst_group = 0.0
    for dim in (2, 4, 9):
        h = core.HermitianOperator(random_hermitian(dim, rng))
        d = core.spectral_decompose(h)
        psi = random_state(dim, rng)
        t, s = rng.uniform(-3, 3, 2)
        a = core.evolve(d, t + s, psi).amplitudes
        b = core.evolve(d, t, core.evolve(d, s, psi)).amplitudes
        worst_norm = max(worst_norm, abs(np.linalg.norm(a) - 1))
        worst_group = max(worst_group, float(np.max(np.abs(a - b))))
    return worst_norm < 1e-10 and worst_group < 1e-10, f"norm drift {worst_norm:.3g}, semigroup error {worst_group:.3g}"


def check_born_completeness(rng):
    worst = 0.0
    for dim in (2, 3, 8, 20):
        d = core.spectral_decompose(random_hermitian(dim, rng))
        worst = max(worst, abs(core.born_probabilities(random_state(dim, rng), d).sum() - 1))
    return worst < 1e-10, f"max |sum - 1| {worst:.3g}"


def check_collapse_idempotence(rng):
    d = core.spectral_decompose(random_hermitian(6, rng))
    for _ in range(50):
        first = core.measure(random_state(6, rng), d, rng)
        second = core.measure(first.post_state, d, rng)
        if second.index != first.index or abs(second.probability - 1) > 1e-10:
            return False, "repeated measurement changed value"
    return True, "50 repeated measurements agreed"


def check_query_tables(rng):
    worst = 0.0
    for size in querymodel.SUPPORTED_SIZES:
        model = querymodel.make_model(size)
        real = querymodel.realize_in_hilbert(model)
        for i in model.states():
            for k in model.states():
                d = real.filter_of(k)
                probs = core.born_probabilities(real.state(i), d)
                worst = max(worst, abs(probs[d.index_of(k)] - model.p(i, k)))
        if not np.array_equal(model.table, model.table.T):
            return False, f"{size}-state table not symmetric"
    return worst < 1e-12, f"max Born vs table deviation {worst:.3g}"


def check_reduction_tree(rng):
    tree = discriminate.build_reduction_tree()
    expected = {(o, e) if o < e else (e, o) for o in range(1, 9, 2) for e in range(2, 9, 2)}
    for path, pair in tree.paths():
        ks = discriminate.full_knowledge()
        for q, outcome in path:
            ks = discriminate.update_knowledge(ks, q, outcome)
        if tuple(sorted(ks)) != pair:
            return False, f"path {path} gives {sorted(ks)}, leaf says {pair}"
    leaves = tree.leaves()
    ok = tree.depth() == 6 and len(leaves) == 16 and set(leaves) == expected
    return ok, f"depth {tree.depth()}, {len(leaves)} leaves"


def check_identify_soundness(rng):
    model = querymodel.make_model(8)
    tree = discriminate.build_reduction_tree()
    for state in model.states():
        for _ in range(200):
            if discriminate.identify(model, state, rng, tree=tree).verdict != state:
                return False, f"wrong verdict for state {state}"
    return True, "1600 identifications correct"


def _small_corpus(rng, size=40):
    return corpus.decision_corpus(rng, size=size, n_range=range(1, 7))


def check_oracle(rng):
    for _, ast in _small_corpus(rng):
        gc = qtp.build_computer(formula.brute_force_table(ast))
        if not np.array_equal(gc.oracle[gc.oracle], np.arange(gc.dim)):
            return False, "oracle is not an involution"
        m = gc.matrix()
        if not np.allclose(m @ m.T, np.eye(gc.dim)):
            return False, "oracle matrix not unitary"
    return True, "involution and unitarity hold"


def check_classical_determinism(rng):
    for _, ast in _small_corpus(rng):
        table = formula.brute_force_table(ast)
        gc = qtp.build_computer(table)
        for x in range(2 ** table.n):
            if qtp.classical_run(gc, x, rng) != table.bits[x]:
                return False, f"classical run disagrees at x={x}"
    return True, "classical runs reproduce every truth table"


def check_closed_form(rng):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        table = formula.TruthTable(n, rng.random(2 ** n) < rng.random())
        sched = qtp.TrembleSchedule(n, float(rng.uniform(0, 0.95)))
        theta = float(rng.uniform(0, 2 * np.pi))
        sim = qtp.output_expectation(qtp.build_computer(table), sched, theta)
        worst = max(worst, abs(sim - float(qtp.closed_form_expectation(table, sched, theta))))
    return worst < 1e-10, f"max simulation vs closed form {worst:.3g}"


def check_gradient(rng):
    h = 1e-5
    for _ in range(100):
        n = int(rng.integers(1, 5))
        table = formula.TruthTable(n, rng.random(2 ** n) < 0.5)
        gc = qtp.build_computer(table)
        sched = qtp.TrembleSchedule(n, float(rng.uniform(0.05, 0.9)))
        theta = float(rng.uniform(0, 2 * np.pi))
        fd = (qtp.output_expectation(gc, sched, theta + h) - qtp.output_expectation(gc, sched, theta - h)) / (2 * h)
        an = qtp.output_derivative(gc, sched, theta)
        if abs(an - fd) > max(1e-6 * abs(fd), 1e-9):
            return False, f"analytic {an} vs finite difference {fd}"
    return True, "100 probes within relative 1e-6"


def check_zero_derivative(rng):
    n = 2
    thetas = np.linspace(0, 2 * np.pi, 2 * 2 ** n + 1)
    sched = qtp.TrembleSchedule(n, 0.25)
    for bits in itertools.product([False, True], repeat=2 ** n):
        table = formula.TruthTable(n, np.array(bits))
        _, df = qtp.scan(qtp.build_computer(table), sched, thetas)
        still = bool(np.all(np.abs(df) < 1e-12))
        if still != (table.is_unsat or table.is_tautology):
            return False, f"table {bits}: still={still}"
    return True, "all 16 two-variable tables"


def check_decision(rng):
    for label, ast in corpus.decision_corpus(rng, size=50):
        table = formula.brute_force_table(ast)
        verdict = qtp.decide_sat(qtp.build_computer(table), qtp.TrembleSchedule(table.n, 0.25), 16, rng)
        if verdict.outcome.satisfiable == table.is_unsat:
            return False, f"{label}: {verdict.outcome.value}"
    return True, "50 formulas agree with brute force"


def check_round_trip(rng):
    for _, ast in _small_corpus(rng, 30):
        again = formula.parse(formula.render(ast), num_vars=ast.num_vars)
        if again != ast:
            return False, f"round trip changed {formula.render(ast)}"
    return True, "render/parse round trip"


CHECKS: dict[str, Callable] = {
    "spectral_reconstruction": check_spectral_reconstruction,
    "unitary_evolution": check_evolution,
    "born_completeness": check_born_completeness,
    "collapse_idempotence": check_collapse_idempotence,
    "query_tables": check_query_tables,
    "reduction_tree": check_reduction_tree,
    "identify_soundness": check_identify_soundness,
    "oracle_involution": check_oracle,
    "classical_determinism": check_classical_determinism,
    "closed_form": check_closed_form,
    "gradient_check": check_gradient,
    "zero_derivative": check_zero_derivative,
    "decision_soundness": check_decision,
    "parse_round_trip": check_round_trip,
}


def run_all(seed: int = 0) -> list[CheckResult]:
    results = []
    for i, (name, check) in enumerate(CHECKS.items()):
        rng = np.random.default_rng([seed, i])
        try:
            passed, detail = check(rng)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail))
    return results
