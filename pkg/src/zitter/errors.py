"""Exception hierarchy shared by all modules."""


class ZitterError(Exception):
    """Base class for every error raised by this package."""


class NonHermitianInput(ZitterError, ValueError):
    pass


class DimensionMismatch(ZitterError, ValueError):
    pass


class NotNormalized(ZitterError, ValueError):
    pass


class DegenerateOutcome(ZitterError, RuntimeError):
    """A sampled projector annihilated the state; indicates a sampling bug."""


class UnsupportedSize(ZitterError, ValueError):
    pass


class IndexOutOfRange(ZitterError, IndexError):
    pass


class Contradiction(ZitterError, ValueError):
    """An observed outcome is impossible for every remaining candidate."""


class Unresolved(ZitterError, RuntimeError):
    """The test budget ran out before a pair could be resolved."""

    def __init__(self, pair, tests_used):
        self.pair = tuple(sorted(pair))
        self.tests_used = tests_used
        super().__init__(f"pair {self.pair} unresolved after {tests_used} tests")


class FormulaSyntaxError(ZitterError, SyntaxError):
    """Malformed propositional text; ``position`` is a 0-based character offset."""

    def __init__(self, message, position, text=""):
        self.position = position
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.offset = position + 1


class VariableLimit(ZitterError, ValueError):
    pass


class ArityMismatch(ZitterError, ValueError):
    pass


class FormatError(ZitterError, ValueError):
    """Malformed DIMACS input."""


class BadEpsilon(ZitterError, ValueError):
    pass


class BadSampleCount(ZitterError, ValueError):
    pass


class InfeasibleRequest(ZitterError, ValueError):
    pass
