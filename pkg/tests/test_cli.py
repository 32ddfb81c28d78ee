import json
import math
import subprocess
import sys

import pytest

from majdepth.cli import main
from majdepth.geometry import read_points, validate_general_position


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_file(capsys, tmp_path, n=20, seed=3, name="pts.txt", extra=()):
    path = str(tmp_path / name)
    code, _, err = run_cli(
        capsys, "gen", "--n", str(n), "--seed", str(seed), "--out", path, *extra
    )
    assert code == 0 and path in err
    return path


class TestGen:
    def test_writes_deterministic_file(self, capsys, tmp_path):
        a = gen_file(capsys, tmp_path, name="a.txt")
        b = gen_file(capsys, tmp_path, name="b.txt")
        c = gen_file(capsys, tmp_path, seed=4, name="c.txt")
        assert open(a, "rb").read() == open(b, "rb").read()
        assert open(a, "rb").read() != open(c, "rb").read()

    def test_general_position_modes(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path, name="gp.txt", extra=("--general-position", "always"))
        assert validate_general_position(read_points(path)).clean
        loose = gen_file(capsys, tmp_path, name="ngp.txt", extra=("--general-position", "never"))
        pts = read_points(loose)
        assert len({p.x for p in pts}) == len(pts)

    def test_bad_distribution_is_a_usage_error(self, capsys, tmp_path):
        with pytest.raises(SystemExit):
            main(["gen", "--n", "5", "--distribution", "pareto", "--out", "x"])


class TestDepth:
    def test_all_methods_agree(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path)
        code, out, _ = run_cli(
            capsys,
            "depth", "--points", path, "--query", "1,2",
            "--method", "all", "--exact-majority", "--samples", "60",
        )
        assert code == 0
        report = json.loads(out)
        assert report["n"] == 20 and report["q"] == [1, 2]
        assert report["naive"] == report["sweep"] == report["dual_identity"]
        assert report["r"] == 60 and 0 <= report["r_prime"] <= 60
        assert report["epsilon_observed"] is not None

    def test_census_mode_is_exact(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path)
        code, out, _ = run_cli(
            capsys,
            "depth", "--points", path, "--query", "0,1",
            "--method", "all", "--exact-majority", "--exhaustive",
        )
        assert code == 0
        report = json.loads(out)
        assert report["r"] == math.comb(20, 2)
        assert report["d_prime"] == report["naive"]
        assert report["epsilon_observed"] == 0.0

    def test_single_method_leaves_others_null(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path)
        code, out, _ = run_cli(capsys, "depth", "--points", path, "--query", "5,5",
                               "--method", "naive")
        assert code == 0
        report = json.loads(out)
        assert report["naive"] is not None
        assert report["sweep"] is None and report["d_prime"] is None

    def test_pilot_workflow_reports_sample_size(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path, n=32)
        code, out, err = run_cli(
            capsys,
            "depth", "--points", path, "--query", "3,4",
            "--method", "estimate", "--exact-majority", "--epsilon", "0.2",
        )
        assert code == 0
        assert "pilot p_hat=" in err
        report = json.loads(out)
        assert report["r"] >= 1 and report["naive"] is None

    def test_bad_query_exits_2(self, capsys, tmp_path):
        path = gen_file(capsys, tmp_path)
        for query in ("abc", "1;2", "1,2,3", "1.5,2"):
            code, _, err = run_cli(capsys, "depth", "--points", path, "--query", query)
            assert code == 2 and "error:" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "depth", "--points", str(tmp_path / "nope.txt"), "--query", "0,0"
        )
        assert code == 2 and "error:" in err

    def test_dual_identity_rejects_degenerate_file(self, capsys, tmp_path):
        path = str(tmp_path / "col.txt")
        with open(path, "w") as fh:
            fh.write("4\n0 0\n1 1\n2 2\n5 0\n")
        code, _, err = run_cli(
            capsys, "depth", "--points", path, "--query", "3,1", "--method", "dual-identity"
        )
        assert code == 2 and "general position" in err
        # method=all downgrades the same failure to a stderr note
        code, out, err = run_cli(
            capsys, "depth", "--points", path, "--query", "3,1",
            "--method", "all", "--exact-majority", "--samples", "10",
        )
        assert code == 0 and "dual-identity skipped" in err
        assert json.loads(out)["dual_identity"] is None


class TestBench:
    def test_writes_csv_and_png(self, capsys, tmp_path):
        out = str(tmp_path / "hist.csv")
        code, _, err = run_cli(
            capsys,
            "bench", "--experiment", "level-histogram", "--sizes", "16", "--out", out,
        )
        assert code == 0
        assert open(out).read().startswith("n,i,n_i,cumulative\n")
        png = out[:-4] + ".png"
        assert open(png, "rb").read(4) == b"\x89PNG"
        assert out in err and png in err

    def test_no_plot_suppresses_png(self, capsys, tmp_path):
        out = str(tmp_path / "hist.csv")
        code, _, _ = run_cli(
            capsys,
            "bench", "--experiment", "level-histogram", "--sizes", "16",
            "--out", out, "--no-plot",
        )
        assert code == 0
        assert not (tmp_path / "hist.png").exists()

    def test_csv_bytes_stable_across_runs(self, capsys, tmp_path):
        payload = []
        for name in ("r1.csv", "r2.csv"):
            out = str(tmp_path / name)
            code, _, _ = run_cli(
                capsys,
                "bench", "--experiment", "crossing", "--sizes", "16,32",
                "--trials", "2", "--seed", "11", "--out", out, "--no-plot",
            )
            assert code == 0
            payload.append(open(out, "rb").read())
        assert payload[0] == payload[1]

    def test_jobs_flag_keeps_rows_identical(self, capsys, tmp_path):
        payload = []
        for name, jobs in (("serial.csv", "1"), ("pool.csv", "2")):
            out = str(tmp_path / name)
            code, _, _ = run_cli(
                capsys,
                "bench", "--experiment", "crossing", "--sizes", "16", "--trials", "4",
                "--seed", "12", "--jobs", jobs, "--out", out, "--no-plot",
            )
            assert code == 0
            payload.append(open(out, "rb").read())
        assert payload[0] == payload[1]

    def test_bad_sizes_exit_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "bench", "--experiment", "crossing", "--sizes", "16,x"
        )
        assert code == 2 and "error:" in err


class FakeResult:
    def __init__(self, passed):
        self.passed = passed


class TestVerify:
    def test_exit_codes_follow_results(self, capsys, tmp_path, monkeypatch):
        calls = {}

        def fake_run_acceptance(out_dir, seed, fault, plot):
            calls.update(out_dir=out_dir, seed=seed, fault=fault, plot=plot)
            return [FakeResult(True), FakeResult(calls["seed"] == 0)]

        monkeypatch.setattr("majdepth.cli.run_acceptance", fake_run_acceptance)
        code, _, _ = run_cli(
            capsys, "verify", "--out", str(tmp_path / "acc"), "--no-plot"
        )
        assert code == 0
        assert calls == dict(out_dir=str(tmp_path / "acc"), seed=0, fault=None, plot=False)
        code, _, _ = run_cli(capsys, "verify", "--seed", "1", "--no-plot")
        assert code == 1

    def test_fault_choices_are_validated(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify", "--inject-fault", "oracle-off"])


def test_module_entry_point(tmp_path):
    out = str(tmp_path / "pts.txt")
    proc = subprocess.run(
        [sys.executable, "-m", "majdepth", "gen", "--n", "8", "--out", out],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert read_points(out) and len(read_points(out)) == 8
