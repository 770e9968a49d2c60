"""Tests for the experiment runners with small trial counts."""
from fractions import Fraction

import pytest

import src.experiments as experiments
from src.channels import ChannelSpec
from src.experiments import (
    ExperimentConfig, Guards, MatrixCase, ResultRow, random_matrix_corpus, result_columns, run_experiment,
    total_violations
)


def _config(task, *cases, **overrides):
    return ExperimentConfig(task=task, cases=[MatrixCase(name, H) for name, H in cases], **overrides)


class TestExperimentConfig:

    def test_unknown_task(self, hrep):
        with pytest.raises(ValueError, match="Unknown task"):
            _config("nope", ("hrep", hrep))

    def test_needs_matrix(self):
        with pytest.raises(ValueError):
            ExperimentConfig(task="bridge")

    def test_trials(self, hrep):
        with pytest.raises(ValueError):
            _config("bridge", ("hrep", hrep), trials=0)

    def test_l1_guarantee_needs_c(self, hrep):
        with pytest.raises(ValueError):
            _config("guarantee", ("hrep", hrep), norm="l1")

    def test_sandwich_rejects_bec(self, hrep):
        with pytest.raises(ValueError):
            _config("sandwich", ("hrep", hrep), channel=ChannelSpec.parse("bec:0.2"))

    def test_guards_from_config(self):
        guards = Guards.from_config({"max_ray_columns": "8", "unrelated": 1})
        assert guards.max_ray_columns == 8
        assert guards.max_nsp_lps == Guards().max_nsp_lps


class TestRunners:

    def test_bridge(self, hamming):
        [row] = run_experiment(_config("bridge", ("hamming", hamming), trials=20))
        assert (row.trials, row.successes, row.violations) == (20, 20, 0)
        assert row.outcomes["nullspace_dimension"] == 4

    def test_bridge_draws_differ_per_matrix(self, hamming, monkeypatch):
        seen = []
        monkeypatch.setattr(experiments, "bridge_map", lambda H, nu: seen.append(tuple(nu)))
        run_experiment(_config("bridge", ("first", hamming), ("second", hamming), trials=5))
        assert len(seen) == 10
        assert seen[:5] != seen[5:]

    def test_equivalence(self, hrep):
        [row] = run_experiment(_config("equivalence", ("hrep", hrep), trials=5))
        assert row.outcomes == {"nsp_certified": True, "supports": 3, "ties": 0}
        assert (row.trials, row.successes, row.violations) == (15, 15, 0)

    def test_equivalence_skips_uncertified(self, h3):
        [row] = run_experiment(_config("equivalence", ("h3", h3), trials=5))
        assert row.skipped
        assert row.trials == 0

    def test_translation(self, hrep):
        [row] = run_experiment(_config("translate", ("hrep", hrep), trials=20))
        assert (row.trials, row.successes, row.violations) == (60, 60, 0)
        assert row.outcomes == {
            "supports": 3,
            "supports_corrected": 3,
            "certificate_mismatches": 0,
            "balanced_supports": 3,
            "chain_violations": 0,
        }

    def test_translation_draws_per_corrected_support(self, hrep):
        [row] = run_experiment(_config("translate", ("hrep", hrep), trials=7, k=2))
        assert row.outcomes["supports"] == 6
        assert row.outcomes["supports_corrected"] == 3
        assert row.trials == 3 * 7
        assert row.violations == 0

    @pytest.mark.parametrize("fixture,norm,extra,constant", [
        ("hrep", "l1", {"C": Fraction(2)}, "2"),
        ("chain5", "l2", {}, "5"),
        ("hrep", "linf", {}, "3"),
    ])
    def test_guarantee(self, request, fixture, norm, extra, constant):
        H = request.getfixturevalue(fixture)
        [row] = run_experiment(_config("guarantee", (fixture, H), trials=10, norm=norm, **extra))
        assert row.outcomes["constant"] == constant
        assert row.violations == 0
        assert row.trials == 10

    def test_guarantee_skips_without_premise(self, h3):
        [row] = run_experiment(_config("guarantee", ("h3", h3), trials=10, norm="l1", C=Fraction(2)))
        assert row.skipped
        assert row.outcomes["constant"] is None

    def test_peel_equivalence_on_random_matrices(self):
        [row] = run_experiment(ExperimentConfig(task="peel-equiv", trials=30))
        assert row.matrix_id == "random"
        assert row.violations == 0

    def test_sandwich(self, hamming):
        config = _config("sandwich", ("hamming", hamming), trials=20, channel=ChannelSpec.parse("bsc:0.1"))
        [row] = run_experiment(config)
        assert row.violations == 0
        assert row.successes <= row.trials == 20

    def test_halfweight(self, hamming):
        [row] = run_experiment(_config("halfweight", ("hamming", hamming)))
        assert row.violations == 0
        assert row.trials == 2 * row.outcomes["rays"]

    def test_ray_guard_skips(self, hamming):
        [row] = run_experiment(_config("halfweight", ("hamming", hamming), guards=Guards(max_ray_columns=5)))
        assert row.skipped

    def test_maxfrac_crosscheck(self, hamming, i3):
        rows = run_experiment(_config("maxfrac-check", ("hamming", hamming), ("i3", i3)))
        assert total_violations(rows) == 0
        assert rows[1].outcomes == {"by_rays": None, "by_lp": None}


class TestDeterminism:

    def test_repeat_runs_are_identical(self, hamming):
        first = run_experiment(_config("bridge", ("hamming", hamming), trials=10, seed=3))
        second = run_experiment(_config("bridge", ("hamming", hamming), trials=10, seed=3))
        assert [r.to_dict() for r in first] == [r.to_dict() for r in second]

    def test_worker_count_does_not_change_results(self, hrep, hamming):
        cases = (("hrep", hrep), ("hamming", hamming))
        serial = run_experiment(_config("translate", *cases, trials=12, k=2))
        parallel = run_experiment(_config("translate", *cases, trials=12, k=2, workers=2))
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]

    def test_corpus(self):
        first = random_matrix_corpus(5, seed=9)
        again = random_matrix_corpus(5, seed=9)
        assert [c.matrix for c in first] == [c.matrix for c in again]
        for case in first:
            assert 1 <= case.matrix.m <= 20 and 2 <= case.matrix.n <= 30


class TestResultRow:

    def test_timing_is_opt_in(self):
        row = ResultRow("bridge", "h3", 7, {"magnitude_max": 9}, trials=1, successes=1, wall_time=0.5)
        assert "wall_time" not in row.to_dict()
        assert row.to_dict(include_timing=True)["wall_time"] == 0.5

    def test_columns_follow_first_appearance(self):
        rows = [{"task": "a", "x": 1}, {"task": "b", "y": 2, "x": 3}]
        assert result_columns(rows) == ["task", "x", "y"]
