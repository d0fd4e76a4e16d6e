"""Error taxonomy: input problems vs violated internal invariants."""


class InputError(ValueError):
    """Malformed or semantically invalid user input (exit code 1 in the CLI)."""


class ParseError(InputError):
    """Syntax error in an input file; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(AssertionError):
    """An internal structural invariant failed (exit code 2 in the CLI)."""
