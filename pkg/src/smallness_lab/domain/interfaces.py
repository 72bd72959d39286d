"""Domain interfaces (Protocols)."""

from fractions import Fraction
from typing import Any, Optional, Protocol

from .subsets import Subset


class Logger(Protocol):
    """Logger interface."""

    def info(self, message: str, **kwargs: Any) -> None:
        """Log info message."""
        ...

    def error(self, message: str, **kwargs: Any) -> None:
        """Log error message."""
        ...

    def warning(self, message: str, **kwargs: Any) -> None:
        """Log warning message."""
        ...

    def debug(self, message: str, **kwargs: Any) -> None:
        """Log debug message."""
        ...

    def bind(self, **context: Any) -> "Logger":
        """Logger that adds context to every event."""
        ...


class SubsetPredicate(Protocol):
    """Decidable predicate over subsets of [n] (a coverage target)."""

    def __call__(self, u: Subset) -> bool:
        ...


class CoverPart(Protocol):
    """One part of a cover: an explicit or implicit family of subsets."""

    kind: str

    def cost(self, p: Fraction) -> "CostReportLike":
        """Exact cost or an upper bound on Σ_{S in part} p^|S|."""
        ...

    def find_member_inside(self, u: Subset) -> Optional[Subset]:
        """A member of the part contained in u, or None."""
        ...

    def is_member(self, w: Subset) -> bool:
        """Independent membership test used to re-check witnesses."""
        ...


class CostReportLike(Protocol):
    exact: Optional[Fraction]
    upper_bound: Fraction
