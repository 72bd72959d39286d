"""Unit tests for stars and special-star search."""

from fractions import Fraction
from itertools import combinations
from math import prod

from smallness_lab.domain.stars import (
    SpecialStarSearch,
    Star,
    StarForest,
    elementary_symmetric,
    good_threshold,
    is_special,
    special_size,
)
from smallness_lab.service.fixtures import clique_union, star_graph


def test_star_mask_and_size():
    """Test the vertex set of a star."""
    star = Star(center=0, leaves=0b110)
    assert star.mask == 0b111
    assert star.size == 2


def test_forest_disjointness():
    """Test vertex-disjointness of star forests."""
    assert StarForest(stars=(Star(0, 0b10), Star(2, 0b1000))).is_disjoint()
    assert not StarForest(stars=(Star(0, 0b10), Star(1, 0b100))).is_disjoint()


def test_good_threshold_uses_full_degree():
    """Test J·d·p/4."""
    assert good_threshold(8, Fraction(8), Fraction(1, 4)) == 4


def test_special_size():
    """Test L^v = max(L, ⌈J d_v p / 4⌉)."""
    graph = star_graph(8)
    assert special_size(graph, 0, 1, Fraction(8), Fraction(1, 4)) == 4
    assert special_size(graph, 1, 2, Fraction(8), Fraction(1, 4)) == 2
    assert is_special(graph, Star(0, 0b11110), 1, Fraction(8), Fraction(1, 4))
    assert not is_special(graph, Star(1, 0b100), 1, Fraction(8), Fraction(1, 4))


def test_elementary_symmetric_matches_brute_force():
    """Test the e_b dynamic program."""
    values = [Fraction(1, 2), Fraction(1, 3), Fraction(0), Fraction(2, 5)]
    for b in range(0, 6):
        brute = sum((prod(c, start=Fraction(1)) for c in combinations(values, b)), Fraction(0))
        assert elementary_symmetric(values, b) == brute


def test_search_finds_forest_in_disjoint_cliques():
    """Test that two disjoint triangles hold two disjoint single-leaf stars."""
    search = SpecialStarSearch(clique_union([3, 3]), b=2, L=1, J=Fraction(4), p=Fraction(1, 4))
    forest = search.find_inside(0b111111)
    assert forest is not None
    assert forest.is_disjoint()
    assert len(forest.stars) == 2
    assert search.decomposes(forest.mask)
    assert search.find_inside(0b000111) is None


def test_member_masks_are_decomposable():
    """Test that enumerated members decompose."""
    search = SpecialStarSearch(clique_union([3, 3]), b=2, L=1, J=Fraction(4), p=Fraction(1, 4))
    masks = search.member_masks()
    assert masks
    assert all(mask.bit_count() == 4 and search.decomposes(mask) for mask in masks)
