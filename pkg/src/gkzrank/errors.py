"""Exception types raised by the library."""


class GKZError(Exception):
    """Base class for all library errors."""


class NotASublattice(GKZError):
    pass


class InvalidBoundFunctional(GKZError):
    pass


class NotPointed(GKZError):
    """The cone over the columns contains a line (or a zero column)."""


class NotFullLattice(GKZError):
    """The columns do not generate the full integer lattice."""


class NotAFacet(GKZError):
    pass


class RecursionDepthExceeded(GKZError):
    """An auxiliary recursion failed to make progress."""


class InvariantViolation(GKZError):
    """A computed quantity broke an identity that must always hold."""
