"""Tests for walk_core - exact walk functionals."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.walk_core import (
    FUNCTIONAL_NAMES,
    WalkPath,
    last_nonpositive_index,
    reverse_at_sigma,
    walk_functionals,
)

steps = st.lists(st.sampled_from([-2, -1, 1, 2, 3]), min_size=0, max_size=12)


class TestWalkPath:
    """Test cases for WalkPath construction."""

    def test_partial_sums_start_at_zero(self):
        path = WalkPath.from_steps([1, -1, "1/2"])

        assert path.n == 3
        assert path.partial_sums == (0, 1, 0, Fraction(1, 2))

    def test_from_partial_sums_inverts(self):
        path = WalkPath.from_partial_sums([0, 2, 1, 3])

        assert path.increments == (2, -1, 2)

    def test_from_partial_sums_requires_origin(self):
        with pytest.raises(ValueError, match="start at 0"):
            WalkPath.from_partial_sums([1, 2])

    def test_empty_walk(self):
        result = walk_functionals(WalkPath())

        assert result.sigma == 0
        assert all(result.get(name) == 0 for name in FUNCTIONAL_NAMES)


class TestWalkFunctionals:
    """Hand-computed functionals on short walks."""

    def test_dip_and_return(self):
        """S = (0, -1, 0): the minimum sits in the middle."""
        result = walk_functionals(WalkPath.from_steps([-1, 1]))

        assert result.sigma == 2
        assert (result.n_minus, result.n_plus) == (2, 1)
        assert (result.nt_minus, result.nt_plus) == (2, 1)
        assert (result.f_fwd, result.f_bwd) == (1, 1)
        assert (result.g_fwd, result.g_bwd) == (2, 2)

    def test_rise_and_return(self):
        """S = (0, 1, 0): the minimum is tied at both ends."""
        result = walk_functionals(WalkPath.from_steps([1, -1]))

        assert result.sigma == 2
        assert (result.n_minus, result.n_plus) == (1, 2)
        assert (result.f_fwd, result.f_bwd) == (2, 2)
        assert (result.g_fwd, result.g_bwd) == (1, 1)

    def test_strictly_decreasing(self):
        result = walk_functionals(WalkPath.from_steps([-1, -1]))

        assert result.sigma == 2
        assert result.s_sigma == -2
        assert (result.n_minus, result.n_plus) == (2, 0)
        assert (result.nt_minus, result.nt_plus) == (0, 2)
        assert (result.f_fwd, result.f_bwd) == (2, 0)
        assert (result.g_fwd, result.g_bwd) == (0, 2)

    def test_never_returns(self):
        result = walk_functionals(WalkPath.from_steps([1, 1, -1]))

        assert result.sigma == 0
        assert result.as_dict()["f_fwd"] == 0

    def test_get_rejects_unknown_name(self):
        result = walk_functionals(WalkPath.from_steps([-1]))

        with pytest.raises(KeyError):
            result.get("median")

    def test_last_nonpositive_index(self):
        assert last_nonpositive_index((0, 1, -1, 2)) == 2
        assert last_nonpositive_index((0, 1, 2)) == 0


class TestReversal:
    """Test cases for reverse_at_sigma."""

    def test_reversed_increments(self):
        path = WalkPath.from_steps([-2, 1, 1, 3])
        reversed_path = reverse_at_sigma(path)

        assert walk_functionals(path).sigma == 3
        assert reversed_path.increments == (1, 1, -2)

    def test_reversed_partial_sums(self):
        reversed_path = reverse_at_sigma(WalkPath.from_steps([-1, 1, 1]))

        assert reversed_path.partial_sums == (0, 1, 0)
        assert reversed_path.increments == (1, -1)

    def test_reversal_of_positive_walk_is_empty(self):
        assert reverse_at_sigma(WalkPath.from_steps([1, 1])).n == 0


class TestWalkProperties:
    """Per-path invariants over random increment sequences."""

    @given(steps)
    def test_ranges(self, increments):
        result = walk_functionals(WalkPath.from_steps(increments))

        assert 0 <= result.sigma <= len(increments)
        for name in FUNCTIONAL_NAMES:
            assert 0 <= result.get(name) <= result.sigma

    @given(steps)
    def test_extremum_order(self, increments):
        """Last attainment is never before the first."""
        result = walk_functionals(WalkPath.from_steps(increments))

        assert result.f_fwd >= result.sigma - result.f_bwd
        assert result.g_fwd >= result.sigma - result.g_bwd

    @given(steps)
    def test_sigma_is_nonpositive_visit(self, increments):
        path = WalkPath.from_steps(increments)
        result = walk_functionals(path)
        sums = path.partial_sums

        assert sums[result.sigma] <= 0
        assert all(v > 0 for v in sums[result.sigma + 1 :])

    @given(steps)
    def test_reversal_keeps_endpoint(self, increments):
        path = WalkPath.from_steps(increments)
        reversed_path = reverse_at_sigma(path)
        result = walk_functionals(path)

        assert reversed_path.n == result.sigma
        assert reversed_path.partial_sums[-1] == result.s_sigma


def _all_paths(support):
    """Every increment sequence of length 0..10 over the support."""
    for n in range(11):
        for increments in product(support, repeat=n):
            yield WalkPath.from_steps(increments)


SUPPORTS = pytest.mark.parametrize("support", [(-1, 1), (-1, 2)], ids=["fair", "skip2"])


class TestExhaustiveIdentities:
    """Definitional identities over every path of length <= 10."""

    @SUPPORTS
    def test_reversed_occupation(self, support):
        """n_minus of the reversed walk counts the visits of S at or above S_sigma."""
        for path in _all_paths(support):
            assert walk_functionals(reverse_at_sigma(path)).n_minus == (
                walk_functionals(path).nt_plus
            ), path

    @SUPPORTS
    def test_reversed_minimum_time(self, support):
        """Last minimum of the reversed walk sits at g_bwd of the original."""
        for path in _all_paths(support):
            assert walk_functionals(reverse_at_sigma(path)).f_fwd == (
                walk_functionals(path).g_bwd
            ), path

    @SUPPORTS
    def test_occupation_sum(self, support):
        for path in _all_paths(support):
            result = walk_functionals(path)
            sums = path.partial_sums
            zeros = sum(1 for i in range(1, result.sigma + 1) if sums[i] == 0)

            assert result.n_minus + result.n_plus == result.sigma + zeros, path

    @SUPPORTS
    def test_relative_occupation_sum(self, support):
        for path in _all_paths(support):
            result = walk_functionals(path)
            sums = path.partial_sums
            ties = sum(1 for i in range(result.sigma) if sums[i] == result.s_sigma)

            assert result.nt_minus + result.nt_plus == result.sigma + ties, path

    @SUPPORTS
    def test_minimum_times_add_up_iff_unique(self, support):
        for path in _all_paths(support):
            result = walk_functionals(path)
            window = path.partial_sums[: result.sigma + 1]
            unique = window.count(min(window)) == 1

            assert (result.f_fwd + result.f_bwd == result.sigma) == unique, path
