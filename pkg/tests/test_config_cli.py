"""Config ingestion, CLI dispatch, exit codes, emitted artifacts."""

import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from bowendim import SchemaError, count_words
from bowendim.cli import main
from bowendim.config import load_config

T_STAR3 = math.log(2) / math.log(3)


def write_cfg(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestLoadConfig:
    def test_bundled_name_resolves(self):
        cfg, system = load_config("cantor3")
        assert system.is_ncifs
        assert system.contraction.eta_block == pytest.approx(1 / 3)

    def test_packaged_config_files_load(self):
        import bowendim

        cfg_dir = Path(bowendim.__file__).parent / "configs"
        paths = sorted(cfg_dir.glob("*.json"))
        assert len(paths) >= 10
        for path in paths:
            _, system = load_config(str(path))
            assert system.horizon >= 2

    def test_full_cf_schedule_level2_count(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "cf.json",
            {
                "schema_version": 1,
                "system": {"kind": "cf", "horizon": 6, "digits": [1, 2]},
            },
        )
        _, system = load_config(path)
        assert count_words(1, 2, system.schedule) == 4

    def test_schema_violation_reports_field_path(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "bad.json",
            {"schema_version": 1, "system": {"kind": "mystery"}},
        )
        with pytest.raises(SchemaError) as exc:
            load_config(path)
        assert exc.value.path == "system.kind"

    def test_wrong_version_rejected(self, tmp_path):
        path = write_cfg(
            tmp_path, "v.json", {"schema_version": 99, "system": {}}
        )
        with pytest.raises(SchemaError) as exc:
            load_config(path)
        assert exc.value.path == "schema_version"

    def test_window_validated_against_horizon(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "w.json",
            {
                "schema_version": 1,
                "system": {"kind": "cf", "horizon": 6, "digits": [1, 2]},
                "params": {"window": [2, 50]},
            },
        )
        with pytest.raises(SchemaError) as exc:
            load_config(path)
        assert exc.value.path == "params.window"

    def test_explicit_matrix_forms(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "m1.json",
            {
                "schema_version": 1,
                "system": {"kind": "cf", "horizon": 6, "digits": [1, 2],
                            "matrices": [[1, 1], [1, 0]]},
            },
        )
        _, system = load_config(path)
        assert [count_words(1, n, system.schedule) for n in range(1, 5)] == [
            2, 3, 5, 8,
        ]
        path2 = write_cfg(
            tmp_path,
            "m2.json",
            {
                "schema_version": 1,
                "system": {
                    "kind": "cf", "horizon": 4, "digits": [1, 2],
                    "matrices": [
                        [[1, 1], [1, 0]], [[1, 0], [0, 1]], [[1, 1], [1, 1]],
                    ],
                },
            },
        )
        _, sys2 = load_config(path2)
        assert count_words(1, 4, sys2.schedule) == 6

    def test_banded_rule_matrices(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "band.json",
            {
                "schema_version": 1,
                "system": {
                    "kind": "similarity",
                    "horizon": 6,
                    "ratios": {"cycle": [[0.25, 0.25, 0.25]]},
                    "offsets": {"cycle": [[0.0, 0.35, 0.7]]},
                    "matrices": {"rule": "banded", "offsets": [0, 1]},
                },
            },
        )
        _, system = load_config(path)
        # each letter has exactly two followers under the band
        from bowendim import growth_stats

        stats = growth_stats(system.schedule)
        assert set(stats.g_lo) == {2} and set(stats.g_hi) == {2}


class TestCliExitCodes:
    def test_parse_error_is_2(self, tmp_path):
        path = write_cfg(tmp_path, "bad.json", {"schema_version": 1, "system": {"kind": "similarity", "horizon": 4, "ratios": 5}})
        assert main(["check", path, "--out", str(tmp_path / "o")]) == 2

    def test_contraction_rejection_is_3(self, tmp_path):
        path = write_cfg(
            tmp_path,
            "exp.json",
            {
                "schema_version": 1,
                "system": {
                    "kind": "similarity",
                    "horizon": 4,
                    "ratios": {"cycle": [[1.2, 0.3]]},
                    "offsets": {"cycle": [[0.0, 0.5]]},
                },
            },
        )
        assert main(["check", path, "--out", str(tmp_path / "o")]) == 3

    def test_hypotheses_failed_is_4(self, tmp_path, capsys):
        assert main(["report", "perm2", "--out", str(tmp_path / "o4"),
                     "--n-max", "8", "--t-bracket", "0.0", "0.9",
                     "--depth", "5", "--max-points", "64"]) == 4
        summary = json.loads((tmp_path / "o4" / "summary.json").read_text())
        assert summary["hypotheses"]["bowen_formula_supported"] is False

    def test_budget_is_5_with_partial_marker(self, tmp_path):
        code = main(
            ["dimension", "cf12", "--out", str(tmp_path / "o5"), "--budget", "64"]
        )
        assert code == 5
        summary = json.loads((tmp_path / "o5" / "summary.json").read_text())
        assert summary["partial"] is True

    def test_ok_is_0(self, tmp_path):
        assert main(
            ["dimension", "cantor3", "--out", str(tmp_path / "o0"), "--n-max", "12"]
        ) == 0


class TestCliArtifacts:
    def test_report_outputs(self, tmp_path):
        out = tmp_path / "rep"
        code = main(
            ["report", "cantor3", "--out", str(out), "--n-max", "16",
             "--depth", "8", "--max-points", "512"]
        )
        assert code == 0
        for name in ("summary.json", "pressure.csv", "points.csv", "pressure.svg"):
            assert (out / name).exists(), name
        summary = json.loads((out / "summary.json").read_text())
        lo, hi = summary["bracket"]
        assert lo <= T_STAR3 <= hi
        assert summary["hypotheses"]["justification"] == "autonomous-system"
        assert summary["balancing"] == "perfectly"
        assert summary["meta"]["seed"] == 0
        header = (out / "pressure.csv").read_text().splitlines()[0]
        assert header == "n,t,z_lo,z_hi,s_n_lo,s_n_hi"
        pheader = (out / "points.csv").read_text().splitlines()[0]
        assert pheader == "x,radius,word"
        svg = (out / "pressure.svg").read_text()
        assert "<svg" in svg and "t*" in svg and "polyline" in svg

    def test_points_csv_2d(self, tmp_path):
        out = tmp_path / "pts2"
        code = main(
            ["sample", "elliptic-q2", "--out", str(out), "--depth", "2",
             "--max-points", "4096"]
        )
        assert code == 0
        header = (out / "points.csv").read_text().splitlines()[0]
        assert header == "x,y,radius,word"

    def test_determinism_across_runs_and_threads(self, tmp_path):
        outs = []
        for name, threads in (("t1", "1"), ("t4", "4")):
            out = tmp_path / name
            env = dict(os.environ, BOWENDIM_THREADS=threads)
            subprocess.run(
                [sys.executable, "-m", "bowendim.cli", "report", "cf12",
                 "--out", str(out), "--n-max", "10", "--depth", "8",
                 "--max-points", "256", "--sample-strategy",
                 "random-admissible", "--seed", "11"],
                check=True, env=env, capture_output=True,
            )
            outs.append(out)
        for name in ("points.csv", "pressure.csv"):
            a = (outs[0] / name).read_bytes()
            b = (outs[1] / name).read_bytes()
            assert a == b, f"{name} differs across thread counts"

    def test_subsystem_command_modes(self, tmp_path):
        assert main(
            ["subsystem", "gdms2v", "--out", str(tmp_path / "sb"), "--mode",
             "blocks", "--ell", "3", "--p", "1"]
        ) == 0
        assert main(
            ["subsystem", "pinch2", "--out", str(tmp_path / "sp"), "--mode",
             "pinched", "--pinch-times", "2", "4", "6", "8", "10", "12"]
        ) == 0
        assert main(
            ["subsystem", "gdms2v", "--out", str(tmp_path / "su"), "--mode",
             "uniform"]
        ) == 0
        summary = json.loads((tmp_path / "su" / "summary.json").read_text())
        assert summary["p"] == 2

    def test_pressure_and_boxdim_commands(self, tmp_path):
        assert main(
            ["pressure", "cantor3", "--out", str(tmp_path / "pr"), "--t", "0.5"]
        ) == 0
        rows = (tmp_path / "pr" / "pressure.csv").read_text().splitlines()
        assert len(rows) > 2
        assert main(
            ["boxdim", "cantor3", "--out", str(tmp_path / "bx"), "--depth",
             "10", "--max-points", "2048"]
        ) == 0
        summary = json.loads((tmp_path / "bx" / "summary.json").read_text())
        assert summary["slope"] == pytest.approx(T_STAR3, abs=0.05)
