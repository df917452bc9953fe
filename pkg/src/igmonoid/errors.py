"""Exception types raised across the package."""


class IGMonoidError(Exception):
    """Base class for all errors raised by igmonoid."""


class TorsionQuotient(IGMonoidError):
    """The group of fractions of a presented monoid has torsion."""


class NontrivialUnits(IGMonoidError):
    pass


class NotInMonoid(IGMonoidError):
    pass


class NotMaximalOrder(IGMonoidError):
    pass


class RelationNotPreserved(IGMonoidError):
    """A generator permutation does not induce an automorphism of the monoid."""


class NotFaithful(IGMonoidError):
    pass


class InvalidCocycle(IGMonoidError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotIGType(IGMonoidError):
    """Generator values do not give a bijective projection onto the monoid."""


class NotBijective(IGMonoidError):
    pass


class DuplicateWord(IGMonoidError):
    pass


class NotPermutation(IGMonoidError):
    pass


class PeriodInferenceFailed(IGMonoidError):
    pass


class TorsionPresent(IGMonoidError):
    pass


class PreconditionUnmet(IGMonoidError):
    pass
