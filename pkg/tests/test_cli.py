import csv
import io
import json
import subprocess
import sys

import pytest

from mmcthermo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestInfo:
    def test_matched_default(self, capsys):
        code, out, _ = run(capsys, "info")
        assert code == 0
        lines = dict(line.split(": ") for line in out.strip().splitlines())
        assert lines["g_over_i_kT_per_nat"] == "1"
        assert lines["chemical_potential_kT"] == "2.30258509"
        assert lines["regime"] == "matched"

    def test_json_and_joules(self, capsys):
        code, out, _ = run(capsys, "info", "--temp", "300", "--format", "json")
        report = json.loads(out)
        assert code == 0 and report["schema_version"] == "1"
        assert report["g_over_i_J_per_nat"] == pytest.approx(1.380649e-23 * 300, rel=1e-15)

    def test_degenerate(self, capsys):
        code, out, err = run(capsys, "info", "--c-low", "0.05", "--c-high", "0.05")
        assert code == 2 and out == ""
        assert "zero information" in err and len(err.strip().splitlines()) == 1

    @pytest.mark.parametrize(
        "argv", [["--c-low", "0"], ["--c-low", "0.2", "--c-high", "0.1"], ["--m-low", "1.5"], ["--temp", "-4"]]
    )
    def test_invalid_parameters(self, capsys, argv):
        code, _, err = run(capsys, "info", *argv)
        assert code == 2 and "invalid parameters" in err

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--grid", "many"])
        assert exc.value.code == 2


class TestSweep:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "sweep")
        rows = parse_csv(out)
        assert code == 0
        assert out.splitlines()[0] == "m_L,p_L,g_over_i_kT,regime"
        assert len(rows) == 5 * 999
        assert all(float(r["g_over_i_kT"]) >= 1 for r in rows)
        row = next(r for r in rows if r["m_L"] == "0.5" and r["p_L"] == "0.9")
        assert row["g_over_i_kT"] == "3.55128073"
        assert row["regime"] == "low_runs_out"

    def test_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert main(["sweep", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json(self, capsys):
        code, out, _ = run(capsys, "sweep", "--m-low", "0.3,0.6", "--grid", "9", "--format", "json")
        report = json.loads(out)
        assert report["schema_version"] == "1" and len(report["rows"]) == 18

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 3 and "I/O error" in err


class TestVerify:
    def test_default_battery_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        report = json.loads(out)
        assert code == 0 and report["passed"]
        assert report["counts"]["fail"] == 0
        kinds = {c["kind"] for c in report["checks"]}
        assert kinds == {"theorem1", "monotonicity"}

    def test_degenerate_entry_skipped(self, capsys):
        code, out, _ = run(capsys, "verify", "--c-low", "0.05", "--c-high", "0.05")
        report = json.loads(out)
        assert code == 0
        skipped = [c for c in report["checks"] if c["status"] == "skipped-degenerate"]
        assert len(skipped) == 2

    def test_zero_tolerance_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--tol", "0", "--grid", "1000")
        report = json.loads(out)
        assert code == 1 and not report["passed"]
        assert all(c["worst_deviation"] > 0 for c in report["checks"] if c["kind"] == "theorem1")


class TestSimulate:
    def test_fixed_seed_identical(self, capsys):
        argv = ["simulate", "--seed", "77", "--n", "5000", "--p-low", "0.3"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b
        assert json.loads(a)["record"]["seed"] == 77

    def test_mismatched_run_exhausts_low(self, capsys):
        code, out, _ = run(capsys, "simulate", "--m-low", "0.5", "--p-low", "0.9", "--seed", "5")
        report = json.loads(out)
        assert code == 0
        assert report["record"]["exhausted"] == "low" == report["predicted_exhausted"]
        assert report["observed_exhaustion_use"] == report["record"]["depleted_at"]
        assert report["predicted_usable_molecules"] == pytest.approx(10_000 / 0.9)

    def test_large_fixed_fraction_within_sigma(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--n", "2000000", "--uses", "1000000",
            "--mode", "fixed_fraction", "--seed", "8",
        )
        report = json.loads(out)
        assert report["within_3_sigma"] is True
        diff = abs(report["empirical_mi_nats"] - report["theoretical_mi_nats"])
        assert diff <= 3 * report["mi_standard_error"]

    def test_zero_solute_reservoir(self, capsys):
        code, out, _ = run(capsys, "simulate", "--c-low", "0", "--p-low", "1", "--uses", "50", "--seed", "1",
                           "--mode", "fixed_fraction")
        report = json.loads(out)
        assert code == 0 and report["record"]["joint_counts"] == [[50, 0], [0, 0]]
        assert report["theoretical_mi_nats"] == 0.0

    def test_empty_reservoir_rejected(self, capsys):
        code, _, _ = run(capsys, "simulate", "--n", "3", "--m-low", "0.01")
        assert code == 2


class TestIntegrate:
    def test_default(self, capsys):
        code, out, _ = run(capsys, "integrate")
        rows = parse_csv(out)
        assert code == 0
        assert out.splitlines()[0] == "steps,G_quasistatic_kT,G_closed_kT,rel_error"
        assert rows[0]["steps"] == "1" and float(rows[0]["G_quasistatic_kT"]) == 0.0
        assert rows[-1]["steps"] == "100000" and float(rows[-1]["rel_error"]) <= 1e-3
        rel = [float(r["rel_error"]) for r in rows]
        assert all(a >= b for a, b in zip(rel, rel[1:]))

    def test_custom_steps(self, capsys):
        code, out, _ = run(capsys, "integrate", "--steps", "5,50", "--format", "json")
        report = json.loads(out)
        assert [r["steps"] for r in report["rows"]] == [5, 50]

    def test_bad_steps(self, capsys):
        code, _, _ = run(capsys, "integrate", "--steps", "0,10")
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mmcthermo", "info", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["regime"] == "matched"
