"""Domain exceptions."""

from typing import Any, Dict, Optional, Tuple, Type


class SmallnessLabError(Exception):
    """Base class for all toolkit errors."""

    reason = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used in failure reports."""
        return {"reason": self.reason, "message": str(self), **self.details}

    def __reduce__(self) -> Tuple[Any, ...]:
        # Errors raised inside sweep workers cross the process boundary.
        return _restore, (type(self), str(self), self.details)


class ConfigurationError(SmallnessLabError):
    """Bad flags, malformed input files or unparsable rationals."""

    reason = "configuration"


class GroundSetError(SmallnessLabError):
    """Subset outside the ground set, or ground set too large."""

    reason = "ground-set"


class ImproperFamilyError(SmallnessLabError):
    """Family equal to 2^V or to the empty family."""

    reason = "improper-family"


class CapExceededError(SmallnessLabError):
    """An exhaustive or exact computation was requested above its cap."""

    reason = "cap-exceeded"


class DegenerateInstanceError(SmallnessLabError):
    """Instance rejected by a guard (p = 0, zero weights, constants below the guard)."""

    reason = "degenerate-instance"


class CertificateError(SmallnessLabError):
    """A certificate failed exact re-verification."""

    reason = "certificate"


class InvariantViolation(SmallnessLabError):
    """An asserted mathematical invariant failed."""

    reason = "invariant"

    def __init__(self, invariant: str, message: Optional[str] = None, **details: Any):
        message = message or f"invariant violated: {invariant}"
        super().__init__(message, invariant=invariant, **details)
        self.invariant = invariant


def _restore(
    cls: Type[SmallnessLabError], message: str, details: Dict[str, Any]
) -> SmallnessLabError:
    error = cls.__new__(cls)
    SmallnessLabError.__init__(error, message, **details)
    if isinstance(error, InvariantViolation):
        error.invariant = details.get("invariant", "")
    return error


def check(condition: bool, invariant: str, **details: Any) -> None:
    """Raise InvariantViolation unless condition holds."""
    if not condition:
        raise InvariantViolation(invariant, **details)
