"""Exception hierarchy shared by every module."""


class DscError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DscError):
    """An algebraic axiom failed; ``witness`` holds the offending indices."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeCapError(DscError):
    """Input exceeds a configured enumeration or materialization cap."""


class ContractError(DscError):
    """A precondition of an operation was violated by the caller."""


class DomainError(DscError):
    """A numeric argument lies outside the domain of the operation."""


class ParseError(DscError):
    """An input file does not follow its format."""
