"""Caps and numeric constants."""

from fractions import Fraction

MAX_GROUND_SET = 64
EXACT_MEASURE_CAP = 24
COVERAGE_CAP = 20
LP_CANDIDATE_CAP = 1 << 16
EXACT_LP_CAP = 4096
STAR_FOREST_ENUMERATION_CAP = 12
DEFAULT_BISECTION_TOL = Fraction(1, 1 << 30)

# Rational upper bound for e.
E_UPPER = Fraction("2.71828182845905")
# Upper bound for 2e used by the singleton guard J > 2e.
TWO_E_GUARD = Fraction("5.43657")

# Powers needing more than EXACT_POWER_BITS bits are bounded by powers of two,
# never below 2**-EXPONENT_CAP.
EXACT_POWER_BITS = 1 << 16
EXPONENT_CAP = 4096

# Repair factor for floating point LP solutions.
LP_REPAIR_FACTOR = 1 + Fraction(1, 1 << 20)

PIPELINE_R_GUARD_FACTOR = 4096
REDUCED_R_GUARD = Fraction(32)
R_ROUNDING_BITS = 40
