"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input outside the domain where an operation is defined."""


class InvariantError(ValueError):
    """A value violates a structural invariant (unit axis, on-sphere, ...)."""


class RegularityError(DomainError):
    """Curve speed vanishes (or nearly so) where a frame is required."""


class SingularityError(DomainError):
    """A curvature profile or angle function hits a pole on the domain."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed; ``last_s`` is the last accepted parameter."""

    def __init__(self, message, last_s):
        super().__init__(f"{message} (last good s = {last_s!r})")
        self.last_s = last_s
