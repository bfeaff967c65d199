"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter or configuration violates its documented constraints."""


class InconsistencyError(RuntimeError):
    """Derived quantities violate an invariant they are guaranteed to satisfy."""


class NoCrossingError(RuntimeError):
    """The logical-error-rate curves do not cross inside the swept grid."""


class DegenerateCrossingError(RuntimeError):
    """Two curves coincide everywhere, so no crossing point is defined."""
