"""Campaign front-end tests: registry coverage, determinism, config
handling, report structure and exit codes."""

from __future__ import annotations

import json

import pytest

from thetacb.cli import (
    REGISTRY,
    CampaignConfig,
    build_config,
    list_identities,
    main,
    parse_config_file,
    run_campaign,
)
from thetacb.identities import IdentityReport


class TestRegistry:
    def test_has_enough_identities(self):
        assert len(list_identities()) >= 15

    def test_contains_headline_identities(self):
        names = {name for name, _ in list_identities()}
        assert "elliptic_cb" in names
        assert "frenkel_turaev" in names
        assert {"classical_cb", "qcb", "abq1_cb", "abq2_cb", "abcq_cb"} <= names

    def test_descriptions_are_nonempty(self):
        assert all(desc for _, desc in list_identities())


class TestConfig:
    def test_parse_file(self):
        text = """
        # campaign settings
        identities = classical_cb, qcb
        m_max = 4
        tol = 1e-9
        seed = 11
        """
        values = parse_config_file(text)
        config = build_config(values, {})
        assert config.identities == ("classical_cb", "qcb")
        assert config.m_max == 4 and config.seed == 11
        assert config.tol == 1e-9

    def test_flags_override_file(self):
        values = parse_config_file("m_max = 4\nseed = 11")
        config = build_config(values, {"seed": "99", "trials": 2})
        assert config.seed == 99 and config.m_max == 4 and config.trials == 2

    def test_bad_lines_rejected(self):
        with pytest.raises(ValueError):
            parse_config_file("m_max 4")
        with pytest.raises(ValueError):
            parse_config_file("nope = 3")

    def test_invalid_values_rejected(self):
        with pytest.raises(ValueError):
            CampaignConfig(trials=0)
        with pytest.raises(ValueError):
            CampaignConfig(tol=-1.0)


class TestCampaign:
    def test_deterministic_report_bytes(self):
        config = CampaignConfig(identities=("classical_cb", "elliptic_cb"),
                                m_max=2, n_max=1, trials=2, seed=5)
        first = run_campaign(config).to_text()
        second = run_campaign(config).to_text()
        assert first == second

    def test_trial_counts_are_config_driven(self):
        config = CampaignConfig(identities=("qcb",), m_max=2, n_max=2,
                                trials=3, seed=1)
        report = run_campaign(config)
        assert report.summary["qcb"]["trials"] == 9 * 3
        assert len(report.records) == 27

    def test_records_parse_back_into_reports(self):
        config = CampaignConfig(identities=("abq1_cb",), m_max=1, n_max=1,
                                trials=1, seed=2)
        report = run_campaign(config)
        for rec in report.records:
            parsed = IdentityReport.from_record(rec)
            assert parsed.identity == "abq1_cb"
            assert parsed.verdict

    def test_zero_tolerance_fails_with_exit_one(self, tmp_path):
        out = tmp_path / "report.jsonl"
        code = main(["--identities", "classical_cb", "--m-max", "1",
                     "--n-max", "1", "--trials", "1", "--tol", "0",
                     "--out", str(out)])
        assert code == 1
        summary = json.loads(out.read_text().splitlines()[-1])
        assert summary["verdict"] == "fail"

    def test_pass_exit_zero_and_byte_identical_files(self, tmp_path):
        args = ["--identities", "qcb,classical_cb", "--m-max", "2",
                "--n-max", "2", "--trials", "1", "--seed", "9"]
        out1, out2 = tmp_path / "r1.jsonl", tmp_path / "r2.jsonl"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_unknown_identity_exits_two(self):
        assert main(["--identities", "not_a_thing"]) == 2

    def test_bad_config_file_exits_two(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense == 3")
        assert main(["--config", str(bad)]) == 2

    def test_config_file_drives_run(self, tmp_path):
        cfg = tmp_path / "campaign.cfg"
        cfg.write_text("identities = classical_cb\nm_max = 1\nn_max = 1\n"
                       "trials = 1\nseed = 4\n")
        out = tmp_path / "report.jsonl"
        assert main(["--config", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        summary = json.loads(lines[-1])
        assert summary["config"]["seed"] == 4
        assert summary["identities"]["classical_cb"]["failures"] == 0

    def test_extended_precision_campaign(self):
        config = CampaignConfig(identities=("matrix_pair",), m_max=1, n_max=1,
                                trials=1, seed=3, precision=30, tol=1e-12)
        report = run_campaign(config)
        assert report.all_pass

    def test_every_registered_identity_passes_smoke(self):
        config = CampaignConfig(m_max=1, n_max=1, trials=1, seed=12)
        report = run_campaign(config)
        assert set(report.summary) == set(REGISTRY)
        failing = {name: s for name, s in report.summary.items() if s["failures"]}
        assert not failing
