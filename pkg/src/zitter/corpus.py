"""Seeded generators for test and benchmark formulas."""
from __future__ import annotations

import numpy as np

from .formula import Const, FormulaAst, Iff, Not, Or, Var, clauses_to_ast


def random_3cnf_clauses(n: int, m: int, rng: np.random.Generator) -> list[list[int]]:
    """``m`` clauses over 3 distinct variables each, random polarities."""
    k = min(3, n)
    clauses = []
    for _ in range(m):
        vars_ = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        signs = rng.choice([-1, 1], size=k)
        clauses.append([int(v * s) for v, s in zip(vars_, signs)])
    return clauses


def random_3cnf(n: int, m: int, rng: np.random.Generator) -> FormulaAst:
    return clauses_to_ast(random_3cnf_clauses(n, m, rng), n)


def planted_3cnf(n: int, m: int, witness: int, rng: np.random.Generator) -> FormulaAst:
    """Random 3-CNF satisfied by the assignment ``witness`` (and possibly others)."""
    bits = [(witness >> i) & 1 for i in range(n)]
    clauses = []
    while len(clauses) < m:
        (clause,) = random_3cnf_clauses(n, 1, rng)
        if any((lit > 0) == bool(bits[abs(lit) - 1]) for lit in clause):
            clauses.append(clause)
    return clauses_to_ast(clauses, n)


def single_witness(n: int, witness: int) -> FormulaAst:
    """Conjunction of literals true only at assignment ``witness``."""
    clauses = [[i + 1 if (witness >> i) & 1 else -(i + 1)] for i in range(n)]
    return clauses_to_ast(clauses, n)


def contradiction(n: int) -> FormulaAst:
    """x1 & ~x1 & (clauses over the rest), unsatisfiable for every n >= 1."""
    clauses = [[1], [-1]] + [[i, -i] for i in range(2, n + 1)]
    return clauses_to_ast(clauses, n)


def tautology(n: int) -> FormulaAst:
    root = Or(Var(1), Not(Var(1)))
    for i in range(2, n + 1):
        root = Or(root, Iff(Var(i), Var(i)))
    return FormulaAst(root, n)


def decision_corpus(rng: np.random.Generator, size: int = 200, n_range=range(4, 11)) -> list[tuple[str, FormulaAst]]:
    """Mixed corpus: random 3-CNF near the satisfiability threshold, planted
    single-witness forms, contradictions and tautologies.

    Returns ``(label, formula)`` pairs in a seed-determined order.
    """
    ns = list(n_range)
    out = []
    kinds = ("random", "random", "random", "planted", "single", "unsat", "taut")
    for j in range(size):
        kind = kinds[j % len(kinds)]
        n = int(rng.choice(ns))
        if kind == "random":
            # ratio around 4.26 gives a mix of SAT and UNSAT instances
            m = int(round(n * rng.uniform(3.5, 6.0)))
            out.append((f"random-n{n}-m{m}", random_3cnf(n, m, rng)))
        elif kind == "planted":
            w = int(rng.integers(2 ** n))
            out.append((f"planted3cnf-n{n}-w{w}", planted_3cnf(n, 5 * n, w, rng)))
        elif kind == "single":
            w = int(rng.integers(2 ** n))
            out.append((f"single-n{n}-w{w}", single_witness(n, w)))
        elif kind == "unsat":
            out.append((f"contradiction-n{n}", contradiction(n)))
        else:
            out.append((f"tautology-n{n}", tautology(n)))
    return out


def constant(n: int, value: bool) -> FormulaAst:
    return FormulaAst(Const(value), n)
