"""Exception types raised across the package."""


class HolonomicError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(HolonomicError, ValueError):
    pass


class ComplexRootsDetected(HolonomicError, ValueError):
    """The cubic has a complex-conjugate root pair (negative discriminant)."""


class DegenerateMiddleRoot(HolonomicError):
    """The middle invariant eigenvalue collides with a neighbour."""


class NonCyclic(HolonomicError, ValueError):
    """A cyclic quantity was requested for a loop with zero angular frequency."""


class TimeOutOfRange(HolonomicError, ValueError):
    pass


class DegenerateDrive(HolonomicError, ValueError):
    """Both two-qubit drive amplitudes vanish, so the coupling is zero."""


class NormDriftExceeded(HolonomicError):
    """Integrated state norm drifted further than the configured tolerance."""


# The integrator reports non-Hermitian generators under its own name.
NonHermitianInput = NotHermitian
