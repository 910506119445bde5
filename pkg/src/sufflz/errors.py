"""Exception hierarchy shared by every module of the package."""


class LZSAError(Exception):
    """Base class for all errors raised by sufflz."""


class ConfigError(LZSAError, ValueError):
    """Invalid window geometry (sizes not powers of two, LAB larger than dictionary...)."""


class InvalidInputError(LZSAError, ValueError):
    pass


class StateError(LZSAError, RuntimeError):
    pass


class MalformedHeaderError(LZSAError, ValueError):
    pass


class CorruptStreamError(LZSAError, ValueError):
    """A compressed stream could not be decoded.

    ``ordinal`` is the 0-based index of the token that failed, or None when
    the failure is not tied to a token (e.g. a short raw block).
    """

    def __init__(self, message, ordinal=None):
        super().__init__(message)
        self.ordinal = ordinal


class TruncatedStreamError(CorruptStreamError, EOFError):
    pass
