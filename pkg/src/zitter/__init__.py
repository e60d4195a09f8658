"""Simulator of two-filter quantum query models and of a trembling-input
satisfiability decider built on a reversible propositional oracle."""

__version__ = "0.1.0"
