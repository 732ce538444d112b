"""Exception types shared across the package."""


class CdgLabError(Exception):
    pass


class UsageError(CdgLabError, ValueError):
    """Inputs are structurally incompatible (shapes, spaces, algebras)."""


class NotDefined(CdgLabError):
    """A requested construction does not exist for the given data."""


class PreconditionViolation(CdgLabError):
    """An operation's mathematical precondition failed.

    ``detail`` carries whatever witness was found (a failed commutator, a
    nonzero residual, ...).
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail
