"""Unit tests for prefix-binomial covers."""

from fractions import Fraction

import pytest

from smallness_lab.domain.cover import PrefixBinomial
from smallness_lab.domain.errors import ConfigurationError, DegenerateInstanceError
from smallness_lab.service.singleton_cover import (
    SingletonInstance,
    SingletonTarget,
    build_singleton_cover,
    singleton_bound,
    singleton_witness,
)


def ones(n):
    """ζ ≡ 1 on n vertices."""
    return [Fraction(1)] * n


def test_uniform_weights(verifier):
    """Test ζ ≡ 1, n = 9, J = 8, p = 1/16: a = 2 and full coverage."""
    inst = SingletonInstance.of(ones(9), Fraction(1, 16), Fraction(8))
    built = build_singleton_cover(inst)
    assert built.a == 2
    assert built.R == 8
    assert built.report.exact < built.geometric_bound < built.bound
    assert built.bound == singleton_bound(Fraction(8))
    assert verifier.verify_coverage(built.cover, SingletonTarget(inst), inst.n).ok


def test_empty_target_gives_empty_cover():
    """Test Jp > 1."""
    inst = SingletonInstance.of(ones(4), Fraction(1, 4), Fraction(8))
    assert inst.empty_target
    built = build_singleton_cover(inst)
    assert built.report.exact == 0
    assert built.a is None
    assert built.part is None


def test_order_is_by_decreasing_weight():
    """Test ζ = (4, 3, 2, 1) keeps the identity order, zeros dropped."""
    zeta = [Fraction(4), Fraction(3), Fraction(2), Fraction(1)]
    inst = SingletonInstance.of(zeta, Fraction(1, 16), Fraction(8))
    assert inst.order() == (0, 1, 2, 3)
    zeta = [Fraction(0), Fraction(1), Fraction(2)]
    with_zero = SingletonInstance.of(zeta, Fraction(1, 16), Fraction(8))
    assert with_zero.order() == (2, 1)


def test_witness():
    """Test u = {first} with a = 1 and u = ∅."""
    part = PrefixBinomial(order=(2, 0, 1), a=1, kmax=3)
    assert singleton_witness(part, 0b100) == 1
    assert singleton_witness(part, 0) is None


@pytest.mark.parametrize(
    "zeta,p,J,error",
    [
        (ones(3), Fraction(1, 16), Fraction(5), DegenerateInstanceError),
        ([Fraction(0)] * 3, Fraction(1, 16), Fraction(8), DegenerateInstanceError),
        (ones(3), Fraction(0), Fraction(8), DegenerateInstanceError),
        ([Fraction(-1), Fraction(2)], Fraction(1, 16), Fraction(8), ConfigurationError),
        (ones(3), Fraction(3, 2), Fraction(8), ConfigurationError),
    ],
)
def test_guards(zeta, p, J, error):
    """Test the instance guards."""
    with pytest.raises(error):
        SingletonInstance.of(zeta, p, J)


def test_skewed_weights_covered(verifier):
    """Test coverage with uneven weights."""
    zeta = [Fraction(k, 7) for k in (5, 1, 0, 3, 3, 2, 7, 1)]
    inst = SingletonInstance.of(zeta, Fraction(1, 10), Fraction(9))
    built = build_singleton_cover(inst)
    assert built.report.exact < built.bound
    assert verifier.verify_coverage(built.cover, SingletonTarget(inst), inst.n).ok
