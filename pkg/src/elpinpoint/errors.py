"""Exception hierarchy shared by all pipeline stages."""


class PinpointError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PinpointError):
    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UnknownName(ParseError):
    """A query mentions a name that is not in the symbol table."""


class QueryNotEntailed(PinpointError):
    """The queried subsumption is not derived by the closure."""


class InstanceSatisfiable(PinpointError):
    """Hard clauses plus all soft clauses are satisfiable, so there is no MinA."""


class GuardError(PinpointError):
    """An input exceeds a size guard (e.g. the brute-force oracle limit)."""
