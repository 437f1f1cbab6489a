"""Exception types shared across the toolkit."""


class HilbcountError(Exception):
    """Base class for all toolkit errors."""


class NotIrreducible(HilbcountError, ValueError):
    pass


class NotMonic(HilbcountError, ValueError):
    pass


class PrecisionExhausted(HilbcountError, ArithmeticError):
    pass


class RamifiedPrime(HilbcountError, ValueError):
    pass


class NotSquarefree(HilbcountError, ValueError):
    pass


class SearchExhausted(HilbcountError, RuntimeError):
    """A bounded search ran out of budget; ``reached`` records how far it got."""

    def __init__(self, message: str, reached=None):
        super().__init__(message)
        self.reached = reached


class BadPrime(HilbcountError, ValueError):
    pass


class BranchPoint(HilbcountError, ValueError):
    pass


class InfeasibleData(HilbcountError, ValueError):
    pass


class DuplicateRationalPrime(HilbcountError, ValueError):
    pass


class DeltaTooSmall(HilbcountError, ValueError):
    pass


class ExponentCap(HilbcountError, ValueError):
    pass


class RankFull(HilbcountError, RuntimeError):
    def __init__(self, message: str, prime=None):
        super().__init__(message)
        self.prime = prime


class ReverificationError(HilbcountError, AssertionError):
    """An emitted record failed its independent re-check; always a bug."""


class ConfigError(HilbcountError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NotSmooth(HilbcountError, ValueError):
    pass
