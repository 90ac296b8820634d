"""Exception types shared by the deciders, oracles and the CLI."""


class MorphicError(Exception):
    """Base class for every error raised by this package."""


class InputDomainError(MorphicError, ValueError):
    """A letter or word lies outside the declared alphabet."""


class PreconditionError(MorphicError, ValueError):
    """An operation was called on input violating its documented precondition."""


class UnsupportedInputError(MorphicError, ValueError):
    """The input is well formed but no decision procedure covers it."""


class ResourceLimitError(MorphicError, RuntimeError):
    """A word would exceed the configured materialization cap."""


class ConsistencyError(MorphicError, RuntimeError):
    """Internal invariant broken (e.g. classification does not match the morphism)."""


class SpecParseError(MorphicError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
