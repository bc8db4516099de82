"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed graph input. ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ParameterError(ValueError):
    """A construction or query parameter is outside its valid range."""


class NoPathError(LookupError):
    """Target vertex is unreachable from the source."""
