"""Exception types shared across the library."""


class InvalidParameter(ValueError):
    """Parameter lies outside its family's source or natural domain."""


class NaturalDomainViolation(InvalidParameter):
    """Natural-parameter vector falls outside the open natural domain."""


class NotSPD(InvalidParameter):
    """A matrix that must be symmetric positive definite is not."""


class OutOfSupport(ValueError):
    """Sample point is not in the family's support."""


class InvalidAlpha(ValueError):
    """Skew or interpolation weight outside its legal range."""


class Unsupported(RuntimeError):
    """The requested capability is not available for this family."""


class DegenerateSolution(RuntimeError):
    """A reference-point system has no usable in-support solution."""


class NonConvergent(RuntimeError):
    """A numerical routine failed to reach its target accuracy."""
