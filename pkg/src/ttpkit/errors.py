"""Exception types shared across the package."""


class TtpkitError(Exception):
    """Base class for all package errors."""


class CapabilityError(TtpkitError):
    """Input exceeds a documented enumeration or materialisation bound."""


class FormatError(TtpkitError, ValueError):
    """Malformed instance, solution or schedule file."""


class MetricViolationError(FormatError):
    """Loaded distance table violates a metric invariant."""


class RestrictedBoundsError(FormatError):
    """Depot distances fall outside [1, wmax] on a restricted instance."""


class LayoutError(TtpkitError, ValueError):
    """Super-team layout parameters are inconsistent."""


class AssemblyError(TtpkitError):
    """An assembled schedule failed its feasibility validation."""


class SeatDemandError(TtpkitError, ValueError):
    """First-two-day seat demands cannot be satisfied."""


class CostMismatchError(TtpkitError):
    """Sampled co-located teams disagree on itinerary weight."""
