"""Exception types raised by weylgme."""


class WeylGMEError(ValueError):
    """Base class for all weylgme input errors."""


class InvalidDimensionError(WeylGMEError):
    """A local dimension, party count or rank is outside its allowed range."""


class InvalidIndexError(WeylGMEError):
    """An operator or party index is out of range or repeated."""


class UnsupportedError(WeylGMEError):
    """The requested computation is not defined for these inputs (e.g. n < 3)."""


class PreconditionError(WeylGMEError):
    """A documented precondition on a state does not hold."""


class InvalidStateError(WeylGMEError):
    """A density matrix failed validation.

    ``violations`` holds the human-readable list returned by
    :func:`weylgme.states.validate`.
    """

    def __init__(self, violations, source=None):
        self.violations = list(violations)
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(where + "; ".join(self.violations))
