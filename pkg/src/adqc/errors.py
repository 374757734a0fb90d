"""Exception hierarchy shared across the package."""


class AdqcError(Exception):
    """Base class for all errors raised by this package."""


class UnknownQubitError(AdqcError):
    """A command or operation referenced a qubit that is not present."""


class ArityMismatchError(AdqcError):
    """Gate arity does not match the number of target qubits."""


class CapacityError(AdqcError):
    """Requested register size exceeds the dense-simulation limit."""


class PatternSyntaxError(AdqcError):
    """Textual pattern could not be parsed.

    Carries ``line`` and ``column`` (1-based) of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class CompositionError(AdqcError):
    """Patterns cannot be composed or tensored as requested."""


class RewriteBudgetError(AdqcError):
    """The standardisation engine exceeded its rule-application budget.

    This signals an engine bug: the rewrite system is terminating, so a
    well-formed input must standardise within the budget.
    """


class RewriteUnsupportedError(AdqcError):
    """The pattern contains commands outside the rewrite calculus."""


class GraphError(AdqcError):
    """Twisted-graph-state structure or labelling is invalid."""


class FlowError(AdqcError):
    """Flow-based synthesis was requested for a graph without causal flow."""


class TranslationError(AdqcError):
    """Model-to-model translation preconditions are not met."""
