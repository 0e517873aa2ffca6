"""Exception hierarchy for factor_bounds."""


class FactorBoundsError(Exception):
    """Base class for every error raised by this package."""


class PolynomialSyntaxError(FactorBoundsError, ValueError):
    """Malformed polynomial text."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class NotDivisibleError(FactorBoundsError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class DomainError(FactorBoundsError, ValueError):
    """An operation was called outside its domain."""


class BoundOverflowError(FactorBoundsError, OverflowError):
    """A certified floating bound left the double range before flooring."""


class SearchSpaceError(FactorBoundsError, ValueError):
    """A search space is empty or exceeds its configured cap."""


class MultipleNotFoundError(FactorBoundsError, LookupError):
    """No height-1 multiple exists within the degree cap."""


class ConstructionError(FactorBoundsError, ArithmeticError):
    """A family or inflation construction violated its stated invariant."""


class FixtureVerificationError(FactorBoundsError):
    """A fixture row failed exact re-verification."""

    def __init__(self, fixture: str, row: str, reason: str):
        self.fixture = fixture
        self.row = row
        super().__init__(f"fixture '{fixture}', row '{row}': {reason}")
