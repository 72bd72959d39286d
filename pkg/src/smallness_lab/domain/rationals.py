"""Exact rational helpers."""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Tuple, TypeVar, Union

from .constants import EXACT_POWER_BITS, EXPONENT_CAP
from .errors import ConfigurationError

Rational = Union[Fraction, int]
T = TypeVar("T")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "num/den", an integer or a decimal string into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"cannot parse rational {text!r}", value=str(text)) from e


def parse_probability(text: Union[str, int, Fraction]) -> Fraction:
    """Parse a rational and check 0 <= p <= 1."""
    p = parse_rational(text)
    if p < 0 or p > 1:
        raise ConfigurationError(f"probability {p} outside [0, 1]", value=str(p))
    return p


def bounded_power(base: Fraction, exponent: int) -> Tuple[Fraction, bool]:
    """Return (value, exact) with value >= base**exponent, for base >= 0.

    Powers whose exact value would need more than EXACT_POWER_BITS bits are
    replaced, for base <= 1, by 2**-min(m*exponent, EXPONENT_CAP) where
    2**-m is the smallest power of two not below base.
    """
    if exponent < 0:
        raise ValueError("negative exponent")
    if base < 0:
        raise ValueError("negative base")
    if exponent == 0:
        return Fraction(1), True
    if base == 0 or base == 1:
        return Fraction(base), True
    width = max(base.numerator.bit_length(), base.denominator.bit_length())
    if width * exponent <= EXACT_POWER_BITS:
        return base**exponent, True
    if base > 1:
        raise OverflowError(f"cannot bound {base}**{exponent}")
    m = floor_log2(1 / base)
    return Fraction(1, 1 << min(m * exponent, EXPONENT_CAP)), False


def floor_log2(x: Fraction) -> int:
    """Largest integer m with 2**m <= x, for x > 0."""
    if x <= 0:
        raise ValueError("x must be positive")
    m = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** m > x:
        m -= 1
    while Fraction(2) ** (m + 1) <= x:
        m += 1
    return m


def ceil_log2(x: Fraction) -> int:
    """Smallest integer m with x <= 2**m, for x > 0."""
    m = floor_log2(x)
    return m if Fraction(2) ** m == x else m + 1


def sqrt_floor(x: Fraction, bits: int) -> Fraction:
    """Largest k / 2**bits with (k / 2**bits)**2 <= x, for x >= 0."""
    if x < 0:
        raise ValueError("x must be non-negative")
    scale = 1 << (2 * bits)
    k = isqrt((x.numerator * scale) // x.denominator)
    return Fraction(k, 1 << bits)


def ceil_fraction(x: Fraction) -> int:
    """Ceiling of a rational."""
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def bisect_threshold(
    evaluate: Callable[[Fraction], Tuple[bool, T]], tol: Fraction
) -> Tuple[Interval, T]:
    """Bisect a monotone predicate on [0, 1] that holds at 0 and fails at 1.

    Returns [lo, hi] with hi - lo <= tol, the predicate holding at lo and failing
    at hi, together with the payload evaluated at lo.
    """
    if tol <= 0:
        raise ConfigurationError("tolerance must be positive", tol=str(tol))
    lo, hi = Fraction(0), Fraction(1)
    ok, payload = evaluate(lo)
    if not ok:
        raise ValueError("predicate fails at p = 0")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        ok, mid_payload = evaluate(mid)
        if ok:
            lo, payload = mid, mid_payload
        else:
            hi = mid
    return Interval(lo=lo, hi=hi), payload
