"""Exception types shared across the package."""


class DavlabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSError(DavlabError):
    """The multiplier s is not a nontrivial square root of 1 modulo n."""


class NoValidSplitError(DavlabError):
    """No coprime factorization n = n1 * n2 realizes the sign pattern of s."""


class TooLargeError(DavlabError):
    """The instance exceeds a hard size cap of an exact routine."""


class HypothesisNotMetError(DavlabError):
    """A construction's arithmetic hypothesis fails for the given split."""


class WrongLengthError(DavlabError):
    """A sequence does not have the length required by a structural test."""


class BoundViolationError(DavlabError):
    """An exact value escaped the bracket that is supposed to contain it."""


class BudgetExceededError(DavlabError):
    """A search budget ran out before the computation was exhaustive.

    The ``partial`` attribute carries whatever certified partial result the
    search produced before it was cut off (shape depends on the caller).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
