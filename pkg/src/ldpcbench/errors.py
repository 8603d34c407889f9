"""Exception types; each maps to a CLI diagnostic prefix."""


class LdpcBenchError(Exception):
    prefix = "ERROR"


class ParseError(LdpcBenchError, ValueError):
    """Malformed input file."""

    prefix = "PARSE"


class DomainError(LdpcBenchError, ValueError):
    """Arguments outside an operation's domain."""

    prefix = "DOMAIN"


class BudgetExceeded(LdpcBenchError, RuntimeError):
    """A search or enumeration ran past its size or time budget."""

    prefix = "BUDGET"


class CapExceeded(BudgetExceeded):
    """No answer within the weight/size cap; ``lower_bound`` still holds."""

    def __init__(self, message: str, lower_bound: int | None = None):
        super().__init__(message)
        self.lower_bound = lower_bound
