"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller violated an operation's precondition."""


class IntegrityError(RuntimeError):
    """An internal structural invariant failed (e.g. dd != 0)."""


class ParseError(ValueError):
    """Malformed picture input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(RuntimeError):
    """Pipeline-level precondition failure (e.g. disconnected foreground)."""
