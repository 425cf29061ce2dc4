"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Malformed graph input (graph6 line or JSON edge list).

    ``offset`` is the byte offset of the offending character when the
    problem can be localized, else ``None``.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ConfigurationError(ValueError):
    """Illegal selector/spec combination (arity violations, bad index
    sequences, containment preconditions)."""


class DomainError(ValueError):
    """Operation argument outside its domain (node out of range, pin to a
    missing node, prefix longer than tuples)."""


class BudgetError(RuntimeError):
    """A configured resource budget was exceeded.

    ``stats`` carries partial progress (states explored, nodes reached)
    so callers can report how far the computation got.
    """

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = dict(stats or {})


class ClosureError(RuntimeError):
    """A replacement tuple fell outside the colored tuple universe.

    The refinement update assumes every replacement of a colored tuple is
    itself colored; violating selector combinations are rejected loudly
    instead of being silently recolored.
    """


class CertificateError(ValueError):
    """A strategy certificate is malformed or does not match its game."""
