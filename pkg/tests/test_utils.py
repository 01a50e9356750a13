"""Test wprelay utility functions module."""

import math

from wprelay.utils import format_sig, relative_deviation


def test_format_sig():
    """Test nine significant digits and blank missing values."""
    assert format_sig(1 / 3) == '0.333333333'
    assert format_sig(30.0) == '30'
    assert format_sig(2.2625e-6) == '2.2625e-06'
    assert format_sig(math.pi, digits=3) == '3.14'
    assert format_sig(None) == ''


def test_relative_deviation():
    """Test relative deviation and its zero-reference fallback."""
    assert math.isclose(relative_deviation(1.1, 1.0), 0.1)
    assert relative_deviation(-2.0, -2.0) == 0.0
    assert relative_deviation(0.5, 0.0) == 0.5
