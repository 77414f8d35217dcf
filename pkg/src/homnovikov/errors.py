"""Exception hierarchy.  Every precondition failure carries its evidence."""


class HomNovikovError(Exception):
    """Base class for all library errors."""


class ScalarError(HomNovikovError, ValueError):
    pass


class FieldMismatchError(HomNovikovError, TypeError):
    pass


class DimensionError(HomNovikovError, ValueError):
    pass


class MissingRoleError(HomNovikovError, ValueError):
    pass


class PreconditionError(HomNovikovError):
    """A construction's hypotheses fail.

    ``report`` is the validation report (or ``None``) and ``witness`` the
    failing basis data when a single witness explains the failure.
    """

    def __init__(self, message, report=None, witness=None):
        super().__init__(message)
        self.report = report
        self.witness = witness


class RestrictionError(HomNovikovError, ValueError):
    """A family map or product was evaluated outside its domain."""


class NotClosedError(HomNovikovError, ValueError):
    pass


class GuardError(HomNovikovError, ValueError):
    """Brute-force search refused because the input is too large."""
