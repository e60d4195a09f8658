"""Identifying an unknown prepared state by yes/no queries on fresh objects.

Phase one walks a fixed reduction tree until one odd and one even candidate
remain. Phase two alternates the two within-pair queries until an outcome
occurs that is impossible for one of them. Each phase-two round certifies
with probability ``1 - 2/num_states``, so the number of tests has a geometric
tail and no upper bound.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

import numpy as np

from .errors import Contradiction, IndexOutOfRange, Unresolved
from .querymodel import Answer, QueryModel, check_state, same_filter, sample_outcome

KnowledgeSet = frozenset


def full_knowledge(num_states: int = 8) -> KnowledgeSet:
    return frozenset(range(1, num_states + 1))


def update_knowledge(ks: KnowledgeSet, query: int, outcome: Answer, num_states: int = 8) -> KnowledgeSet:
    """Drop every candidate for which ``outcome`` has probability zero."""
    if not 1 <= query <= num_states:
        raise IndexOutOfRange(f"query {query} outside 1..{num_states}")
    if outcome is Answer.YES:
        new = frozenset(s for s in ks if s == query or not same_filter(s, query))
    else:
        new = ks - {query}
    if not new:
        raise Contradiction(f"{outcome.value} on query {query} is impossible for candidates {sorted(ks)}")
    return new


def is_pair(ks: KnowledgeSet) -> bool:
    return len(ks) == 2 and sum(s % 2 for s in ks) == 1


@dataclass(frozen=True)
class Leaf:
    pair: tuple

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Node:
    query: int
    yes: Union["Node", Leaf]
    no: Union["Node", Leaf]

    def depth(self) -> int:
        return 1 + max(self.yes.depth(), self.no.depth())


@dataclass(frozen=True)
class ReductionTree:
    root: Union[Node, Leaf]
    num_states: int

    def depth(self) -> int:
        return self.root.depth()

    def paths(self) -> Iterator[tuple[tuple, tuple]]:
        """Yield ``(((query, outcome), ...), pair)`` for every root-to-leaf path."""
        stack = [(self.root, ())]
        while stack:
            node, path = stack.pop()
            if isinstance(node, Leaf):
                yield path, node.pair
            else:
                stack.append((node.no, path + ((node.query, Answer.NO),)))
                stack.append((node.yes, path + ((node.query, Answer.YES),)))

    def leaves(self) -> list[tuple]:
        return [pair for _, pair in self.paths()]

    def follow(self, outcomes) -> Union[Node, Leaf]:
        node = self.root
        for outcome in outcomes:
            node = node.yes if outcome is Answer.YES else node.no
        return node


def _next_query(ks: KnowledgeSet) -> int:
    for s in sorted(ks):
        if sum(1 for t in ks if same_filter(s, t)) >= 2:
            return s
    raise AssertionError(f"no informative query for {sorted(ks)}")


def build_reduction_tree(num_states: int = 8) -> ReductionTree:
    """Tree from the policy: query the smallest candidate whose filter still
    holds two or more candidates; stop at one odd plus one even candidate."""

    def grow(ks):
        if is_pair(ks):
            return Leaf(tuple(sorted(ks)))
        q = _next_query(ks)
        return Node(q, grow(update_knowledge(ks, q, Answer.YES, num_states)),
                    grow(update_knowledge(ks, q, Answer.NO, num_states)))

    return ReductionTree(grow(full_knowledge(num_states)), num_states)


@dataclass(frozen=True)
class Step:
    query: int
    outcome: Answer
    knowledge: KnowledgeSet


@dataclass
class Transcript:
    steps: list = field(default_factory=list)
    verdict: Optional[int] = None
    reduction_tests: int = 0

    @property
    def tests_used(self) -> int:
        return len(self.steps)

    @property
    def resolution_tests(self) -> int:
        return self.tests_used - self.reduction_tests

    @property
    def resolution_rounds(self) -> int:
        return -(-self.resolution_tests // 2)

    @property
    def pair(self) -> tuple:
        return tuple(sorted(self.steps[self.reduction_tests - 1].knowledge))


def _resolve(pair, model: QueryModel, true_state: int, rng, max_tests, record):
    ks = frozenset(pair)
    if not is_pair(ks):
        raise ValueError(f"{sorted(pair)} is not an odd/even pair")
    if true_state not in ks:
        raise ValueError(f"true state {true_state} not in pair {sorted(pair)}")
    odd, even = sorted(ks, key=lambda s: s % 2 == 0)
    tests = 0
    while len(ks) > 1:
        if max_tests is not None and tests >= max_tests:
            raise Unresolved(ks, tests)
        query = odd if tests % 2 == 0 else even
        outcome = sample_outcome(model, true_state, query, rng)
        ks = update_knowledge(ks, query, outcome, model.num_states)
        tests += 1
        record(Step(query, outcome, ks))
    return next(iter(ks)), tests


def resolve_pair(pair, model: QueryModel, true_state: int, rng: np.random.Generator,
                 max_tests: Optional[int] = None) -> tuple[int, int]:
    """Alternate the odd and even member's queries until one is ruled out.

    Returns ``(identified_state, tests_used)``.
    """
    return _resolve(pair, model, true_state, rng, max_tests, lambda step: None)


def identify(model: QueryModel, true_state: int, rng: np.random.Generator,
             max_tests: Optional[int] = None, tree: Optional[ReductionTree] = None) -> Transcript:
    """Reduce to a pair with the tree, then resolve it. ``max_tests`` caps phase two."""
    check_state(model, true_state)
    tree = tree or build_reduction_tree(model.num_states)
    transcript = Transcript()
    ks = full_knowledge(model.num_states)
    node = tree.root
    while isinstance(node, Node):
        outcome = sample_outcome(model, true_state, node.query, rng)
        ks = update_knowledge(ks, node.query, outcome, model.num_states)
        transcript.steps.append(Step(node.query, outcome, ks))
        node = node.yes if outcome is Answer.YES else node.no
    transcript.reduction_tests = len(transcript.steps)
    transcript.verdict, _ = _resolve(node.pair, model, true_state, rng, max_tests, transcript.steps.append)
    return transcript


@dataclass
class TailStatistics:
    runs: int
    histogram: dict
    rounds_histogram: dict
    correct: int
    unresolved: int

    @property
    def resolved(self) -> int:
        return self.runs - self.unresolved

    @property
    def verdict_accuracy(self) -> float:
        return self.correct / self.resolved if self.resolved else float("nan")

    @property
    def max_tests(self) -> int:
        return max(self.histogram, default=0)

    @property
    def max_rounds(self) -> int:
        return max(self.rounds_histogram, default=0)

    def survival(self) -> np.ndarray:
        """Fraction of resolved runs needing more than r rounds, r = 0, 1, ..."""
        counts = np.zeros(self.max_rounds + 1)
        for r, c in self.rounds_histogram.items():
            counts[r] += c
        return counts[::-1].cumsum()[::-1][1:] / self.resolved if self.resolved else counts

    @property
    def tail_ratio(self) -> float:
        """Pooled per-round survival ratio, sum_r N(R>r+1) / sum_r N(R>r).

        This is the maximum-likelihood geometric parameter for rounds R >= 1.
        """
        total = sum(r * c for r, c in self.rounds_histogram.items())
        beyond_first = total - sum(self.rounds_histogram.values())
        return beyond_first / total if total else float("nan")

    def histogram_list(self) -> list[int]:
        out = [0] * (self.max_tests + 1)
        for k, c in self.histogram.items():
            out[k] = c
        return out

    def merge(self, other: "TailStatistics") -> "TailStatistics":
        return TailStatistics(self.runs + other.runs,
                              dict(Counter(self.histogram) + Counter(other.histogram)),
                              dict(Counter(self.rounds_histogram) + Counter(other.rounds_histogram)),
                              self.correct + other.correct, self.unresolved + other.unresolved)


def tail_statistics(model: QueryModel, true_state: int, runs: int, rng: np.random.Generator,
                    max_tests: Optional[int] = None) -> TailStatistics:
    """Run ``identify`` repeatedly and collect the distribution of test counts."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    tree = build_reduction_tree(model.num_states)
    hist, rounds = Counter(), Counter()
    correct = unresolved = 0
    for _ in range(runs):
        try:
            t = identify(model, true_state, rng, max_tests=max_tests, tree=tree)
        except Unresolved:
            unresolved += 1
            continue
        hist[t.tests_used] += 1
        rounds[t.resolution_rounds] += 1
        correct += t.verdict == true_state
    return TailStatistics(runs, dict(hist), dict(rounds), correct, unresolved)


def exceed_probability(rounds: int, num_states: int = 8) -> float:
    """Analytic probability that resolution needs more than ``rounds`` rounds."""
    return (2 / num_states) ** rounds
