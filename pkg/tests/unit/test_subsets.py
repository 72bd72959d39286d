"""Unit tests for bitmask subsets."""

import pytest

from smallness_lab.domain.errors import GroundSetError
from smallness_lab.domain.subsets import (
    antichain,
    check_ground_set,
    check_subset,
    format_subset,
    from_indices,
    full_set,
    is_subset,
    k_subsets,
    nonempty_subsets_of,
    subsets_of,
    to_indices,
)


def test_from_and_to_indices():
    """Test conversion between vertex lists and masks."""
    assert from_indices([0, 2], 3) == 0b101
    assert to_indices(0b101) == [0, 2]
    assert to_indices(0) == []


def test_from_indices_rejects_vertex_outside_ground_set():
    """Test that vertices >= n are rejected."""
    with pytest.raises(GroundSetError):
        from_indices([3], 3)


def test_check_subset_rejects_high_bits():
    """Test that subsets with bits at or above n are rejected."""
    assert check_subset(0b111, 3) == 0b111
    with pytest.raises(GroundSetError):
        check_subset(0b1000, 3)


def test_ground_set_limits():
    """Test the 0 <= n <= 64 range."""
    check_ground_set(0)
    check_ground_set(64)
    with pytest.raises(GroundSetError):
        check_ground_set(65)
    with pytest.raises(GroundSetError):
        check_ground_set(-1)


def test_is_subset():
    """Test inclusion of masks."""
    assert is_subset(0b01, 0b11)
    assert is_subset(0, 0b11)
    assert not is_subset(0b100, 0b011)


def test_subsets_of_enumerates_every_subset_once():
    """Test submask enumeration including ∅ and the mask itself."""
    subs = list(subsets_of(0b1011))
    assert len(subs) == 8
    assert len(set(subs)) == 8
    assert 0 in subs and 0b1011 in subs
    assert 0 not in list(nonempty_subsets_of(0b1011))


def test_k_subsets():
    """Test k-subsets of an element list."""
    assert sorted(k_subsets([0, 1, 2], 2)) == [0b011, 0b101, 0b110]


def test_antichain_keeps_minimal_sets_sorted():
    """Test normalization to inclusion-minimal sets ordered by size then mask."""
    assert antichain([0b111, 0b011, 0b100, 0b011]) == [0b100, 0b011]


def test_format_subset():
    """Test the display form."""
    assert format_subset(0b11) == "{0,1}"
    assert format_subset(0) == "{}"
    assert full_set(4) == 0b1111
