"""Tests for seculoc.campaign."""

import csv
import math

import pytest

from seculoc.campaign import (
    CampaignConfig,
    CampaignStats,
    MethodDeltaStats,
    emit_csv,
    run_campaign,
)

TINY = dict(n_deployments=5, n_corruptions=2, seed=7)


class TestConfig:
    def test_defaults_validate(self):
        CampaignConfig().validate()

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_anchors=3),
            dict(sigma=0.0),
            dict(tau=1.5),
            dict(delta_grid=()),
            dict(delta_grid=(-1.0,)),
            dict(methods=("nope",)),
            dict(methods=()),
            dict(p_fa=0.0),
            dict(attackers_per_trial=3),
            dict(attackers_per_trial=2, n_anchors=4),
            dict(k_samples=0),
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            CampaignConfig(**kwargs).validate()


class TestRunCampaign:
    def test_rows_cover_methods_and_grid(self):
        cfg = CampaignConfig(
            methods=("proposed", "no_detection"), delta_grid=(0.0, 15.0), **TINY
        )
        stats = run_campaign(cfg)
        assert [(r.method, r.delta) for r in stats.rows] == [
            ("proposed", 0.0), ("proposed", 15.0),
            ("no_detection", 0.0), ("no_detection", 15.0),
        ]

    def test_trial_accounting(self):
        cfg = CampaignConfig(methods=("proposed", "no_detection"), delta_grid=(0.0, 10.0), **TINY)
        stats = run_campaign(cfg)
        total = cfg.n_deployments * cfg.n_anchors * cfg.n_corruptions
        for r in stats.rows:
            assert r.trials + r.excluded_trials == total
            if r.method == "no_detection":
                assert r.excluded_trials == 0
                assert math.isnan(r.detection_rate)
            else:
                assert 0.0 <= r.detection_rate <= 1.0
                assert 0.0 <= r.false_alarm_rate <= 1.0
            assert r.rmse >= 0.0

    def test_two_attacker_trial_count(self):
        cfg = CampaignConfig(
            n_anchors=6, attackers_per_trial=2, methods=("proposed",),
            delta_grid=(5.0,), n_deployments=2, n_corruptions=2, seed=1,
        )
        stats = run_campaign(cfg)
        row = stats.rows[0]
        assert row.trials + row.excluded_trials == 2 * 15 * 2

    def test_bounds_only_for_proposed_single_attacker(self):
        cfg = CampaignConfig(methods=("proposed", "no_detection"), delta_grid=(8.0,), k_samples=1, **TINY)
        stats = run_campaign(cfg)
        prop = stats.get("proposed", 8.0)
        nod = stats.get("no_detection", 8.0)
        assert prop.bound_trials > 0
        assert 0.0 <= prop.lp_d <= prop.up_d <= 1.0
        assert math.isnan(nod.lp_d)

    def test_deterministic_across_worker_counts(self):
        cfg = CampaignConfig(
            methods=("proposed", "no_detection", "perfect_detection", "wls_glrt"),
            delta_grid=(0.0, 12.0), **TINY,
        )
        a = run_campaign(cfg, threads=1)
        b = run_campaign(cfg, threads=3)
        assert a.rows == b.rows
        assert a.resampled_deployments == b.resampled_deployments

    def test_benchmark_ordering_under_strong_attack(self):
        cfg = CampaignConfig(
            methods=("proposed", "no_detection", "perfect_detection"),
            delta_grid=(8.0, 15.0), n_deployments=30, n_corruptions=5, seed=3,
        )
        stats = run_campaign(cfg)
        for delta in (8.0, 15.0):
            prop = stats.get("proposed", delta).rmse
            nod = stats.get("no_detection", delta).rmse
            perf = stats.get("perfect_detection", delta).rmse
            assert perf <= prop * 1.05
            assert prop <= nod * 1.05

    def test_benign_rmse_close_to_perfect_detection(self):
        cfg = CampaignConfig(
            methods=("proposed", "perfect_detection"),
            delta_grid=(0.0,), n_deployments=60, n_corruptions=10, seed=8,
        )
        stats = run_campaign(cfg)
        gap = stats.get("proposed", 0.0).rmse - stats.get("perfect_detection", 0.0).rmse
        assert gap < 0.3


class TestEmitCsv:
    HEADER = (
        "method,delta_m,rmse_m,detection_rate,false_alarm_rate,"
        "lpd1,lpd2,lp_d,up_d,trials,excluded_trials"
    )

    def test_header_only_for_empty_stats(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv(CampaignStats(rows=[]), path)
        assert path.read_bytes() == (self.HEADER + "\n").encode()

    def test_one_method_three_deltas(self, tmp_path):
        cfg = CampaignConfig(methods=("no_detection",), delta_grid=(0.0, 5.0, 10.0), **TINY)
        path = tmp_path / "c.csv"
        emit_csv(run_campaign(cfg), path)
        lines = path.read_text().splitlines()
        assert lines[0] == self.HEADER
        assert len(lines) == 4

    def test_round_trip_parse_recovers_9_digits(self, tmp_path):
        row = MethodDeltaStats(
            method="proposed", delta=7.25, rmse=1.234567891234, detection_rate=0.987654321,
            false_alarm_rate=0.0123456789, lpd1=0.5, lpd2=0.25, lp_d=0.5, up_d=0.75,
            trials=123, excluded_trials=4,
        )
        path = tmp_path / "r.csv"
        emit_csv(CampaignStats(rows=[row]), path)
        with open(path, newline="") as fh:
            parsed = list(csv.DictReader(fh))[0]
        for name, want in [
            ("rmse_m", row.rmse), ("detection_rate", row.detection_rate),
            ("false_alarm_rate", row.false_alarm_rate), ("delta_m", row.delta),
        ]:
            got = float(parsed[name])
            assert got == pytest.approx(want, rel=1e-8)
        assert int(parsed["trials"]) == 123
        assert int(parsed["excluded_trials"]) == 4

    def test_nan_round_trips(self, tmp_path):
        row = MethodDeltaStats(
            method="no_detection", delta=0.0, rmse=0.5, detection_rate=math.nan,
            false_alarm_rate=math.nan, lpd1=math.nan, lpd2=math.nan, lp_d=math.nan,
            up_d=math.nan, trials=10, excluded_trials=0,
        )
        path = tmp_path / "n.csv"
        emit_csv(CampaignStats(rows=[row]), path)
        with open(path, newline="") as fh:
            parsed = list(csv.DictReader(fh))[0]
        assert math.isnan(float(parsed["detection_rate"]))

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "lf.csv"
        emit_csv(CampaignStats(rows=[]), path)
        assert b"\r" not in path.read_bytes()

    def test_unwritable_path_reports_location(self, tmp_path):
        bad = tmp_path / "missing_dir" / "x.csv"
        with pytest.raises(OSError, match="missing_dir"):
            emit_csv(CampaignStats(rows=[]), bad)
