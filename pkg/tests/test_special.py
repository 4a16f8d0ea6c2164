"""Incomplete gamma pair: accuracy against scipy and basic identities."""
import math

import numpy as np
import pytest
from scipy import special as sp

from hths.special import IncompleteGammaPair, incomplete_gamma, regularized_lower

SHAPES = (0.1, 0.25, 0.5, 1.0, 2.5, 7.0, 20.0)
CUTS = (0.0, 1e-6, 0.1, 0.9, 1.0, 3.0, 10.0, 80.0)


@pytest.mark.parametrize("s", SHAPES)
@pytest.mark.parametrize("x", CUTS)
def test_matches_scipy_regularized(s, x):
    got = regularized_lower(s, x)
    want = float(sp.gammainc(s, x))
    assert got == pytest.approx(want, abs=1e-13, rel=1e-12)


@pytest.mark.parametrize("s", SHAPES)
@pytest.mark.parametrize("x", CUTS)
def test_pair_sums_to_complete_gamma(s, x):
    pair = incomplete_gamma(s, x)
    assert pair.lower >= 0.0
    assert pair.upper >= 0.0
    assert pair.total == pytest.approx(math.gamma(s), rel=1e-12)


def test_shape_one_is_exponential_cdf():
    for x in (0.3, 1.0, 4.2):
        assert regularized_lower(1.0, x) == pytest.approx(-math.expm1(-x), rel=1e-12)


def test_continuity_at_series_cf_switchover():
    # the series/continued-fraction handoff at x = s + 1 must not leave a seam
    s = 1.7
    xs = np.linspace(s + 1.0 - 1e-6, s + 1.0 + 1e-6, 11)
    vals = [regularized_lower(s, float(x)) for x in xs]
    for x, v in zip(xs, vals):
        assert v == pytest.approx(float(sp.gammainc(s, x)), rel=1e-12)
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_zero_cut_gives_zero_lower():
    pair = incomplete_gamma(2.5, 0.0)
    assert pair.lower == 0.0
    assert pair.upper == pytest.approx(math.gamma(2.5), rel=1e-12)


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        incomplete_gamma(0.0, 1.0)
    with pytest.raises(ValueError):
        incomplete_gamma(-1.0, 1.0)
    with pytest.raises(ValueError):
        incomplete_gamma(1.0, -0.5)


def test_pair_is_a_value_object():
    pair = incomplete_gamma(0.5, 2.0)
    assert isinstance(pair, IncompleteGammaPair)
    with pytest.raises(AttributeError):
        pair.lower = 0.0
