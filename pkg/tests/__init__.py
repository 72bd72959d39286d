"""Tests for smallness-lab."""
