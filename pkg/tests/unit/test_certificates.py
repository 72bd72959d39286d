"""Unit tests for smallness certificates."""

from fractions import Fraction

import pytest

from smallness_lab.domain.certificates import FractionalCertificate, IntegralCertificate
from smallness_lab.domain.cover import ExplicitList
from smallness_lab.domain.errors import CertificateError


def test_fractional_certificate_objective(pair_family):
    """Test λ_{0,1} = 1 at p = 1/2."""
    certificate = FractionalCertificate(p=Fraction(1, 2), entries=((0b011, Fraction(1)),))
    assert certificate.objective == Fraction(1, 4)
    certificate.verify(pair_family, require_small=True)


def test_fractional_certificate_infeasible(pair_family):
    """Test a weak-cover constraint with too little mass."""
    certificate = FractionalCertificate(p=Fraction(1, 2), entries=((0b011, Fraction(1, 2)),))
    assert certificate.violations(pair_family) == [0b011]
    with pytest.raises(CertificateError):
        certificate.verify(pair_family)


def test_fractional_certificate_negative_weight(pair_family):
    """Test that negative weights are rejected."""
    certificate = FractionalCertificate(
        p=Fraction(1, 2), entries=((0b011, Fraction(2)), (0b001, Fraction(-1)))
    )
    with pytest.raises(CertificateError):
        certificate.verify(pair_family)


def test_fractional_certificate_not_small(single_vertex_family):
    """Test require_small when the objective exceeds 1/2."""
    certificate = FractionalCertificate(p=Fraction(3, 4), entries=((0b01, Fraction(1)),))
    certificate.verify(single_vertex_family)
    with pytest.raises(CertificateError):
        certificate.verify(single_vertex_family, require_small=True)


def test_integral_certificate(two_singletons_family):
    """Test an explicit cover of ⟨{0},{1}⟩."""
    certificate = IntegralCertificate(p=Fraction(1, 4), cover=ExplicitList(subsets=(0b01, 0b10)))
    assert certificate.cost == Fraction(1, 2)
    certificate.verify(two_singletons_family, require_small=True)


def test_integral_certificate_uncovered(two_singletons_family):
    """Test a cover that misses a minimal set."""
    certificate = IntegralCertificate(p=Fraction(1, 4), cover=ExplicitList(subsets=(0b01,)))
    assert certificate.uncovered(two_singletons_family) == [0b10]
    with pytest.raises(CertificateError):
        certificate.verify(two_singletons_family)


def test_integral_certificate_outside_ground_set(two_singletons_family):
    """Test cover subsets outside [n]."""
    cover = ExplicitList(subsets=(0b01, 0b10, 0b100))
    certificate = IntegralCertificate(p=Fraction(1, 4), cover=cover)
    with pytest.raises(CertificateError):
        certificate.verify(two_singletons_family)
