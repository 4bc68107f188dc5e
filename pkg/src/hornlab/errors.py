"""Exception hierarchy shared by every hornlab module."""


class HornlabError(Exception):
    """Base class for all library errors."""


class FormatError(HornlabError):
    """Malformed khs-1 input."""


class ArityTooSmall(HornlabError):
    pass


class NotSetClosed(HornlabError):
    pass


class UnknownElement(HornlabError, KeyError):
    pass


class MixedArity(HornlabError):
    pass


class EmptyFamily(HornlabError):
    pass


class NotAHomomorphism(HornlabError):
    pass


class BudgetExhausted(HornlabError):
    """A search ran out of its node, candidate or time allowance.

    This never means "no solution exists".
    """


class CapExceeded(HornlabError):
    pass


class HasLoop(HornlabError):
    pass


class NotMember(HornlabError):
    pass


class HomSetTruncated(HornlabError):
    pass


class MinCardinalityNotAbove2(HornlabError):
    pass


class NoSuchSequence(HornlabError):
    pass


class PreconditionFailed(HornlabError):
    pass


class RadiusTooSmall(HornlabError):
    pass


class NoFreshCopy(HornlabError):
    """The Duplicator strategy found no legal reply (non-strict instances only)."""


class TooLarge(HornlabError):
    pass
