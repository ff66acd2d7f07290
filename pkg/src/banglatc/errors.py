"""Exception types shared across the package."""


class BanglaTCError(Exception):
    """Base class for all errors raised by banglatc."""


class InputError(BanglaTCError):
    """Bad arguments or a missing input path."""


class ValidationError(BanglaTCError):
    """Input was readable but violates a structural requirement."""


class DecodeError(BanglaTCError):
    """A corpus file is not valid UTF-8."""
