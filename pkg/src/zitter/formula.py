"""Propositional forms: parsing, rendering, evaluation and exhaustive truth tables.

Grammar, loosest binding first::

    iff   := imp ("<->" imp)*          left-associative
    imp   := or ("->" imp)?            right-associative
    or    := and ("|" and)*
    and   := unary ("&" unary)*
    unary := "~" unary | atom
    atom  := "x<k>" | "true" | "false" | "(" iff ")"

Assignments are encoded as integers with x1 in the least significant bit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import ArityMismatch, FormatError, FormulaSyntaxError, VariableLimit

MAX_VAR_INDEX = 9999
TABLE_VAR_CAP = 20


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Iff:
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Const, Not, And, Or, Implies, Iff]


@dataclass(frozen=True)
class FormulaAst:
    root: Expr
    num_vars: int

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        if self.bits.shape != (2 ** self.n,):
            raise ValueError(f"expected {2 ** self.n} bits, got {self.bits.shape}")

    @property
    def satisfying_count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @property
    def satisfying_set(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    @property
    def is_unsat(self) -> bool:
        return self.satisfying_count == 0

    @property
    def is_tautology(self) -> bool:
        return self.satisfying_count == self.bits.size


# parsing

_TOKEN = re.compile(r"(?:(?P<op><->|->|[|&~()])|x(?P<var>\d+)|(?P<const>true|false)\b)")


def _tokenize(text: str, max_index: int):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = pos
        if m.group("var") is not None:
            index = int(m.group("var"))
            if index < 1:
                raise FormulaSyntaxError("variable indices start at x1", start, text)
            if index > max_index:
                raise VariableLimit(f"x{index} exceeds the cap x{max_index}")
            tokens.append(("var", index, start))
        elif m.group("const") is not None:
            tokens.append(("const", m.group("const") == "true", start))
        else:
            tokens.append((m.group("op"), None, start))
        pos = m.end()
    tokens.append(("eof", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, max_index: int):
        self.text = text
        self.tokens = _tokenize(text, max_index)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        kind, _, pos = self.tokens[self.i]
        found = "end of input" if kind == "eof" else repr(self.text[pos:pos + len(kind)] if kind in ("var", "const") else kind)
        raise FormulaSyntaxError(f"expected {expected}, found {found}", pos, self.text)

    def parse(self) -> Expr:
        expr = self.iff()
        if self.peek() != "eof":
            self.fail("operator or end of input")
        return expr

    def iff(self):
        left = self.imp()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        kind = self.peek()
        if kind == "var":
            return Var(self.take()[1])
        if kind == "const":
            return Const(self.take()[1])
        if kind == "(":
            self.take()
            inner = self.iff()
            if self.peek() != ")":
                self.fail("')'")
            self.take()
            return inner
        self.fail("variable, constant, '~' or '('")


def max_var(expr: Expr) -> int:
    stack, top = [expr], 0
    while stack:
        e = stack.pop()
        if isinstance(e, Var):
            top = max(top, e.index)
        elif isinstance(e, Not):
            stack.append(e.operand)
        elif not isinstance(e, Const):
            stack.extend((e.left, e.right))
    return top


def parse(text: str, num_vars: int | None = None, max_index: int = MAX_VAR_INDEX) -> FormulaAst:
    """Parse ``text``; ``num_vars`` defaults to the highest variable index used."""
    root = _Parser(text, max_index).parse()
    highest = max_var(root)
    if num_vars is None:
        num_vars = highest
    elif num_vars < highest:
        raise ArityMismatch(f"num_vars={num_vars} but x{highest} appears")
    return FormulaAst(root, num_vars)


# rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Var: 6, Const: 6}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _render(e: Expr) -> str:
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Const):
        return "true" if e.value else "false"
    prec = _PREC[type(e)]
    if isinstance(e, Not):
        inner = _render(e.operand)
        return "~" + (inner if _PREC[type(e.operand)] >= prec else f"({inner})")
    left, right = _render(e.left), _render(e.right)
    lp, rp = _PREC[type(e.left)], _PREC[type(e.right)]
    right_assoc = isinstance(e, Implies)
    if lp < prec or (right_assoc and lp == prec):
        left = f"({left})"
    if rp < prec or (not right_assoc and rp == prec):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(e)]} {right}"


def render(ast: FormulaAst | Expr) -> str:
    """Text that :func:`parse` maps back to the same tree."""
    return _render(ast.root if isinstance(ast, FormulaAst) else ast)


# evaluation

def _eval(e: Expr, values):
    # values[i-1] is the truth value of x_i; works for bools and numpy bool arrays alike
    if isinstance(e, Var):
        return values[e.index - 1]
    if isinstance(e, Const):
        return np.bool_(e.value) if isinstance(values, np.ndarray) else e.value
    if isinstance(e, Not):
        return ~_eval(e.operand, values) if isinstance(values, np.ndarray) else not _eval(e.operand, values)
    a, b = _eval(e.left, values), _eval(e.right, values)
    if isinstance(e, And):
        return a & b
    if isinstance(e, Or):
        return a | b
    if isinstance(e, Implies):
        return ~a | b if isinstance(values, np.ndarray) else (not a) or b
    return a == b


def evaluate(ast: FormulaAst, assignment: Sequence[bool]) -> bool:
    if len(assignment) != ast.num_vars:
        raise ArityMismatch(f"expected {ast.num_vars} values, got {len(assignment)}")
    return bool(_eval(ast.root, [bool(v) for v in assignment]))


def assignment_of(index: int, n: int) -> tuple[bool, ...]:
    """Decode an assignment index; bit 0 is x1."""
    return tuple(bool((index >> i) & 1) for i in range(n))


def brute_force_table(ast: FormulaAst, cap: int = TABLE_VAR_CAP) -> TruthTable:
    """Evaluate the form on all 2**n assignments."""
    n = ast.num_vars
    if n > cap:
        raise VariableLimit(f"{n} variables exceeds the truth-table cap {cap}")
    x = np.arange(2 ** n, dtype=np.int64)
    columns = np.zeros((n, x.size), dtype=bool)
    for i in range(n):
        columns[i] = (x >> i) & 1
    bits = np.broadcast_to(_eval(ast.root, columns), x.shape).astype(bool)
    return TruthTable(n, bits)


# DIMACS

def _balanced(items: list, node):
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return node(_balanced(items[:mid], node), _balanced(items[mid:], node))


def clauses_to_ast(clauses: Sequence[Sequence[int]], num_vars: int) -> FormulaAst:
    """Conjunction of disjunctions of signed literals; empty clause is false."""

    def literal(v):
        return Var(v) if v > 0 else Not(Var(-v))

    disjunctions = [_balanced([literal(v) for v in c], Or) if c else Const(False) for c in clauses]
    root = _balanced(disjunctions, And) if disjunctions else Const(True)
    return FormulaAst(root, num_vars)


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Return ``(num_vars, clauses)`` from DIMACS CNF text."""
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf" or not all(p.isdigit() for p in parts[2:]):
                raise FormatError(f"line {lineno}: bad header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise FormatError(f"line {lineno}: literal {lit} outside 1..{header[0]}")
            else:
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError("last clause is missing its 0 terminator")
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return header[0], clauses


def load_dimacs(text: str) -> FormulaAst:
    n, clauses = parse_dimacs(text)
    return clauses_to_ast(clauses, n)


def load_formula(path: str | Path) -> FormulaAst:
    """Read a ``.cnf`` (DIMACS) or ``.txt`` (infix grammar) file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".cnf":
        return load_dimacs(text)
    if path.suffix == ".txt":
        return parse(text)
    raise FormatError(f"unsupported formula file extension {path.suffix!r}; use .txt or .cnf")
