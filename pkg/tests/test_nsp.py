"""Tests for nullspace-property certification, the bridge map and the guarantee bounds."""
import itertools
from fractions import Fraction

import numpy as np
import pytest

import src.nsp as nsp_module
from src.cone import Membership
from src.errors import (
    GuardExceededError, HypothesisError, NegativeEntryError, NotInNullspaceError, SoundnessViolation
)
from src.matrices import SupportSet, real_nullspace_basis, syndrome_real
from src.nsp import (
    NormPair, NspQuery, NspVerdict, awgnc_premise, balancedness_check, bridge_map, bsc_pw_implies_nsp,
    check_nsp_k, check_nsp_support, l1l1_bound, l2l1_bound, linfl1_bound, maxfrac_premise,
    nsp_grid_oracle, sqrt_bounds, violates
)


def _support(indices, n):
    return SupportSet.of(indices, n)


class TestNspQuery:

    def test_negative_c(self, hrep):
        with pytest.raises(ValueError):
            NspQuery(hrep, Fraction(-1), True, k=1)

    def test_exactly_one_target(self, hrep):
        with pytest.raises(ValueError):
            NspQuery(hrep, Fraction(1), True)
        with pytest.raises(ValueError):
            NspQuery(hrep, Fraction(1), True, support=_support([0], 3), k=1)

    def test_k_out_of_range(self, hrep):
        with pytest.raises(ValueError):
            NspQuery(hrep, Fraction(1), True, k=4)

    def test_label(self, hrep):
        assert NspQuery(hrep, Fraction(1), True, k=1).label == "NSP<(k=1, C=1)"
        assert NspQuery(hrep, Fraction(1, 2), False, support=_support([0, 2], 3)).label == \
            "NSP<=(S=[0, 2], C=1/2)"


class TestCheckSupport:

    def test_h3_boundary_case(self, h3):
        S = _support([0], 3)
        strict = check_nsp_support(h3, S, 1, strict=True)
        assert strict.verdict is NspVerdict.FAILS
        assert strict.left == strict.right
        assert check_nsp_support(h3, S, 1, strict=False).holds

    def test_hrep_holds(self, hrep):
        report = check_nsp_support(hrep, _support([0], 3), 1, strict=True)
        assert report.holds
        assert report.lps_solved == 1

    def test_certificate_is_a_violating_nullspace_vector(self, hrep, hamming):
        for H, S, C in ((hrep, _support([0, 1], 3), 1), (hamming, _support([0, 1], 7), 1)):
            report = check_nsp_support(H, S, C, strict=True)
            if report.holds:
                continue
            assert not any(syndrome_real(H, report.certificate))
            assert violates(report.certificate, S, Fraction(C), strict=True)

    def test_zero_c(self, h3, hrep):
        S = _support([0, 1], 3)
        assert check_nsp_support(hrep, S, 0, strict=True).holds
        # H3 has the nullspace vector (1, -1, 0) living on {0, 1}.
        report = check_nsp_support(h3, S, 0, strict=True)
        assert not report.holds
        assert report.certificate[2] == 0
        assert check_nsp_support(h3, S, 0, strict=False).holds

    def test_full_rank(self, i3):
        assert check_nsp_support(i3, _support([0, 1, 2], 3), 5, strict=True).holds

    def test_to_dict(self, h3):
        payload = check_nsp_support(h3, _support([0], 3), 1, strict=True).to_dict()
        assert payload["query"] == "NSP<(S=[0], C=1)"
        assert payload["verdict"] == "fails"
        assert payload["support"] == [0]
        assert payload["left"]["exact"] == payload["right"]["exact"]


class TestCheckK:

    def test_hrep_k1(self, hrep):
        report = check_nsp_k(hrep, 1, 1, strict=True)
        assert report.holds
        assert report.lps_solved == 3

    def test_hrep_nonstrict_c2(self, hrep):
        assert check_nsp_k(hrep, 1, 2, strict=False).holds
        assert not check_nsp_k(hrep, 1, 2, strict=True).holds

    def test_hrep_k2_fails(self, hrep):
        report = check_nsp_k(hrep, 2, 1, strict=True)
        assert report.verdict is NspVerdict.FAILS
        assert report.support.indices == (0, 1)

    def test_k_zero_is_vacuous(self, h3):
        assert check_nsp_k(h3, 0, 1, strict=True).holds

    def test_guard(self, hamming):
        with pytest.raises(GuardExceededError):
            check_nsp_k(hamming, 3, 1, strict=True, max_lps=100)

    def test_parallel_matches_serial(self, hamming):
        serial = check_nsp_k(hamming, 2, 1, strict=True)
        parallel = check_nsp_k(hamming, 2, 1, strict=True, workers=2)
        assert serial.verdict is parallel.verdict
        assert serial.support == parallel.support
        assert serial.certificate == parallel.certificate


class TestGridOracle:
    """The LP decision agrees with direct enumeration of slice vertices."""

    @pytest.mark.parametrize("name", ["h3", "hrep", "hamming", "chain5"])
    def test_agreement(self, request, name):
        H = request.getfixturevalue(name)
        for size in (1, 2):
            for indices in itertools.combinations(range(H.n), size):
                S = _support(indices, H.n)
                for C in (Fraction(1, 2), Fraction(1), Fraction(2)):
                    for strict in (True, False):
                        expected = nsp_grid_oracle(H, S, C, strict)
                        assert check_nsp_support(H, S, C, strict).holds is expected, (indices, C, strict)

    def test_trivial_nullspace(self, i3):
        assert nsp_grid_oracle(i3, _support([0], 3), 10, strict=True)


class TestBridge:

    def test_hrep(self, hrep):
        result = bridge_map(hrep, [2, -2, 2])
        assert result.omega == (2, 2, 2)
        assert result.membership.member
        assert result.support_preserved

    def test_not_in_nullspace(self, hrep):
        with pytest.raises(NotInNullspaceError):
            bridge_map(hrep, [1, 0, 0])

    def test_random_nullspace_vectors(self, hamming, ldpc):
        rng = np.random.default_rng(3)
        for H in (hamming, ldpc):
            basis = real_nullspace_basis(H)
            for _ in range(50):
                coefficients = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in basis]
                nu = [sum((c * b[i] for c, b in zip(coefficients, basis)), Fraction(0)) for i in range(H.n)]
                assert bridge_map(H, nu).membership.member

    def test_violation_is_raised(self, hrep, monkeypatch):
        monkeypatch.setattr(nsp_module, "cone_contains", lambda H, omega: Membership(False))
        with pytest.raises(SoundnessViolation):
            bridge_map(hrep, [1, -1, 1])


class TestImplication:

    def test_premise_and_conclusion(self, hrep):
        report = bsc_pw_implies_nsp(hrep, 1)
        assert report.premise and report.conclusion
        assert report.min_bsc.value == 3

    def test_premise_false(self, h3):
        report = bsc_pw_implies_nsp(h3, 1)
        assert not report.premise
        assert report.satisfied

    def test_trivial_cone(self, i3):
        report = bsc_pw_implies_nsp(i3, 1)
        assert report.premise and report.conclusion
        assert report.to_dict()["min_bsc_pseudoweight"]["value"] is None


class TestPremises:

    def test_balancedness(self):
        assert balancedness_check([1, 1, 1], _support([0], 3))
        assert not balancedness_check([1, 1, 1], _support([0, 1], 3))
        assert not balancedness_check([2, 1, 1], _support([0], 3))
        with pytest.raises(NegativeEntryError):
            balancedness_check([1, -1, 1], _support([0], 3))

    def test_awgnc_premise(self, chain5, i3):
        assert awgnc_premise(chain5, 5)
        assert not awgnc_premise(chain5, 6)
        assert awgnc_premise(i3, 100)

    def test_maxfrac_premise(self, hrep):
        assert maxfrac_premise(hrep, 3)
        assert not maxfrac_premise(hrep, 4)


class TestSqrtBounds:

    def test_perfect_squares(self):
        assert sqrt_bounds(16) == (4, 4)
        assert sqrt_bounds(Fraction(9, 4)) == (Fraction(3, 2), Fraction(3, 2))

    def test_enclosure(self):
        low, high = sqrt_bounds(2)
        assert low * low < 2 < high * high
        assert high - low == Fraction(1, 2 ** 64)

    def test_negative(self):
        with pytest.raises(ValueError):
            sqrt_bounds(-1)


class TestGuaranteeBounds:

    def test_l1l1(self):
        bound = l1l1_bound(3, [3, 1, 1, 0], _support([0], 4))
        assert bound.factor == 4
        assert bound.tail_mass == 2
        assert bound.value == 8
        assert bound.norm_pair is NormPair.L1_L1

    def test_l1l1_needs_c_above_one(self):
        with pytest.raises(HypothesisError):
            l1l1_bound(1, [1, 0], _support([0], 2))

    @pytest.mark.parametrize("cprime,k,factor", [(16, 1, Fraction(1)), (64, 4, Fraction(1, 2))])
    def test_l2l1_exact(self, cprime, k, factor):
        e = [5] * k + [1, 1]
        bound = l2l1_bound(cprime, k, e, _support(range(k), k + 2))
        assert bound.exact
        assert bound.factor == factor
        assert bound.value == 2 * factor

    def test_l2l1_enclosure_is_an_upper_bound(self):
        bound = l2l1_bound(9, 2, [1, 1, 1], _support([0, 1], 3))
        assert not bound.exact
        # The true factor is 6 + 4·√2.
        assert bound.factor > 6
        assert ((bound.factor - 6) / 4) ** 2 >= 2
        assert float(bound.factor) == pytest.approx(6 + 4 * 2 ** 0.5, rel=1e-12)

    def test_l2l1_hypotheses(self):
        with pytest.raises(HypothesisError):
            l2l1_bound(4, 1, [1, 0], _support([0], 2))
        with pytest.raises(HypothesisError):
            l2l1_bound(100, 2, [1, 0], _support([0], 2))

    def test_linfl1(self):
        bound = linfl1_bound(8, 2, [3, 1, 1, 0], _support([0, 1], 4))
        assert bound.factor == Fraction(1, 2)
        assert bound.value == Fraction(1, 2)
        assert bound.to_dict()["norm_pair"] == "linf/l1"

    def test_linfl1_needs_cprime_above_2k(self):
        with pytest.raises(HypothesisError):
            linfl1_bound(4, 2, [1, 1, 0], _support([0, 1], 3))
