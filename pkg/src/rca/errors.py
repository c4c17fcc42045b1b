class RCAError(Exception):
    """Base class for errors raised by this package."""


class ParseError(RCAError, ValueError):
    def __init__(self, message: str, lineno: int) -> None:
        super().__init__(f"{message} at line {lineno}")
        self.lineno = lineno


class InvalidRoute(RCAError, ValueError):
    pass


class Refusal(RCAError):
    """An exhaustive search would exceed its configured size guard."""
