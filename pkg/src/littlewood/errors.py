"""Exception hierarchy shared by every layer of the package."""


class LittlewoodError(Exception):
    """Base class for all errors raised by this package."""


class AmbiguousEnclosure(LittlewoodError):
    """An enclosure is too wide to decide a discrete quantity (floor, nearest integer).

    ``certified`` carries whatever was decided before the ambiguity, e.g. the
    partial quotients certified so far by a literal expansion.
    """

    def __init__(self, message, certified=None):
        super().__init__(message)
        self.certified = certified


class PrecisionExhausted(LittlewoodError):
    """Refinement could not reach the requested width within the iteration cap."""


class Undecidable(LittlewoodError):
    """A certified comparison straddles its threshold after the refinement cap."""


class BranchUndecidable(Undecidable):
    """The cos/cosh branch or root ordering of a cubic cannot be certified."""


class EmptyWindow(LittlewoodError):
    """The admissible exponent window (4/3, (3 + 4*gamma - eta)/5] is empty."""


class NotAWitness(LittlewoodError):
    """|f(u)| was certified to exceed epsilon."""


class ZeroFirstCoordinate(LittlewoodError):
    """A candidate witness has u[0] == 0."""


class FactorizationTimeout(LittlewoodError):
    """A composite cofactor survived the factoring budget."""

    def __init__(self, message, partial=None, cofactor=None):
        super().__init__(message)
        self.partial = partial
        self.cofactor = cofactor


class HypothesisViolation(LittlewoodError):
    """A stage was asked to run while a required hypothesis fails."""
