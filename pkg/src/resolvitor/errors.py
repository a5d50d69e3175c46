class UsageError(ValueError):
    """Bad input from the caller: wrong domain, wrong shape, bad option."""


class IntegrityError(RuntimeError):
    """An internal identity that must hold was violated (e.g. a composition
    that should be zero is not)."""


class ParseError(UsageError):
    """Lexical or syntax error in a polynomial expression."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
