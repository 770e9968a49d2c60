"""Tests for the fundamental cone and polytope descriptions."""
import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.cone import (
    cone_contains, cone_contains_float, cone_inequalities, format_system, is_unscaled_pseudocodeword,
    polytope_contains, polytope_inequalities
)
from src.errors import DimensionError, GuardExceededError
from src.matrices import BinaryMatrix, enumerate_codewords


class TestConeInequalities:

    def test_h3_system(self, h3):
        system = cone_inequalities(h3)
        rows = {(q.coefficients, q.rhs) for q in system.inequalities}
        assert rows == {
            ((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0),
            ((1, -1, -1), 0), ((-1, 1, -1), 0), ((-1, -1, 1), 0),
        }

    def test_hrep_forces_equal_entries(self, hrep):
        rows = {q.coefficients for q in cone_inequalities(hrep).inequalities if q.kind == "check"}
        assert {(1, -1, 0), (-1, 1, 0), (0, 1, -1), (0, -1, 1)} == rows

    def test_identity_cone_is_trivial(self, i3):
        checks = [q for q in cone_inequalities(i3).inequalities if q.kind == "check"]
        assert sorted(q.coefficients for q in checks) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
        assert not cone_contains(i3, [0, 1, 0])

    def test_labels_are_readable(self, h3):
        labels = [q.label for q in cone_inequalities(h3).inequalities]
        assert "check 1: w1 <= w2 + w3" in labels
        assert "w1 >= 0" in labels


class TestConeMembership:

    def test_member(self, h3, hrep):
        assert cone_contains(h3, [1, 1, 0]).member
        assert cone_contains(hrep, [1, 1, 1]).member

    def test_violation_reports_inequality(self, h3):
        verdict = cone_contains(h3, [2, 1, 0])
        assert not verdict
        assert verdict.violated.label == "check 1: w1 <= w2 + w3"

    def test_negative_entry(self, h3):
        verdict = cone_contains(h3, [-1, 0, 0])
        assert verdict.violated.label == "w1 >= 0"

    def test_dimension_mismatch(self, h3):
        with pytest.raises(DimensionError):
            cone_contains(h3, [1, 1])

    def test_float_membership_matches_exact(self, h3):
        assert cone_contains_float(h3, [1.0, 1.0 + 1e-12, 0.0])
        assert not cone_contains_float(h3, [2.0, 1.0, 0.0])

    def test_codewords_lie_in_cone(self, hamming):
        for x in enumerate_codewords(hamming):
            assert cone_contains(hamming, x)


class TestPolytope:

    def test_weight_two_row(self, hrep):
        system = polytope_inequalities(hrep)
        first_row = [q for q in system.inequalities if q.label.startswith("check 1:")]
        assert sorted((q.coefficients, q.rhs) for q in first_row) == [((-1, 1, 0), 0), ((1, -1, 0), 0)]
        assert sum(1 for q in system.inequalities if q.kind == "bound") == 6

    def test_h3_odd_subsets(self, h3):
        checks = [q for q in polytope_inequalities(h3).inequalities if q.kind == "check"]
        assert len(checks) == 4
        assert ((1, 1, 1), 2) in {(q.coefficients, q.rhs) for q in checks}

    def test_membership(self, h3, hamming):
        assert polytope_contains(h3, [Fraction(1, 2), Fraction(1, 2), 0])
        assert not polytope_contains(h3, [1, 0, 0])
        assert not polytope_contains(h3, [Fraction(3, 2), Fraction(3, 2), 0])
        for x in enumerate_codewords(hamming):
            assert polytope_contains(hamming, x)

    def test_row_weight_guard(self):
        H = BinaryMatrix.from_rows([[1] * 6])
        with pytest.raises(GuardExceededError):
            polytope_inequalities(H, max_row_weight=5)

    def test_format_system(self, h3):
        text = format_system(cone_inequalities(h3))
        assert text.splitlines()[0] == "# 1x3 6 inequalities"
        assert "1 -1 -1 <= 0" in text


class TestUnscaledPseudocodewords:

    @pytest.mark.parametrize("omega,expected", [
        ([1, 1, 1], True),
        ([2, 2, 2], True),
        ([1, 2, 1], False),
    ])
    def test_hrep(self, hrep, omega, expected):
        assert is_unscaled_pseudocodeword(hrep, omega) is expected

    def test_h3(self, h3):
        assert is_unscaled_pseudocodeword(h3, [1, 1, 0])
        assert not is_unscaled_pseudocodeword(h3, [1, 1, 1])
        assert not is_unscaled_pseudocodeword(h3, [Fraction(1, 2), Fraction(1, 2), 0])


class TestClosure:
    """K(H) is a convex cone; its integral points in P(H) are exactly the codewords."""

    @staticmethod
    def _members(H, seed, samples=400):
        rng = np.random.default_rng(seed)
        candidates = ([int(v) for v in rng.integers(0, 5, size=H.n)] for _ in range(samples))
        return [tuple(Fraction(v) for v in w) for w in candidates if cone_contains(H, w)]

    @pytest.mark.parametrize("fixture", ["h3", "hamming", "ldpc"])
    def test_positive_scaling(self, request, fixture):
        H = request.getfixturevalue(fixture)
        members = self._members(H, seed=3)
        assert members
        for omega in members:
            for alpha in (Fraction(1, 3), Fraction(5, 2), Fraction(7)):
                assert cone_contains(H, [alpha * v for v in omega])

    @pytest.mark.parametrize("fixture", ["h3", "hamming", "ldpc"])
    def test_sums(self, request, fixture):
        H = request.getfixturevalue(fixture)
        members = self._members(H, seed=4)
        for first, second in zip(members, members[1:]):
            assert cone_contains(H, [a + b for a, b in zip(first, second)])

    @pytest.mark.parametrize("fixture", ["hamming", "ldpc"])
    def test_integral_points_are_codewords(self, request, fixture):
        H = request.getfixturevalue(fixture)
        codewords = set(enumerate_codewords(H))
        for x in itertools.product((0, 1), repeat=H.n):
            assert polytope_contains(H, x).member is (x in codewords)
