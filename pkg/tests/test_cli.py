import json
import subprocess
import sys

import pytest

from slitfactor import io
from slitfactor.analytic import Model
from slitfactor.cli import EXIT_INCONSISTENT, EXIT_IO, EXIT_OK, EXIT_USAGE, RunConfig, main, run
from slitfactor.stats import FactorReport, factorize, scan, slit_width_sweep


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "slitfactor.cli", *args], capture_output=True, text=True)


class TestCSV:
    def test_empty_is_header_only(self, tmp_path):
        path = tmp_path / "scan.csv"
        io.emit_csv(path, io.SCAN_COLUMNS, [])
        assert path.read_text() == "n,sigma\n"

    def test_one_point(self, tmp_path):
        path = tmp_path / "scan.csv"
        io.emit_csv(path, io.SCAN_COLUMNS, [(11, 0.0)])
        assert path.read_text() == "n,sigma\n11,0\n"

    def test_seventeen_digits(self):
        assert io.format_value(0.1) == "0.10000000000000001"
        assert io.format_value(7) == "7"

    def test_round_trip_exact(self, tmp_path):
        curve = scan(77)
        path = tmp_path / "scan.csv"
        io.emit_csv(path, io.SCAN_COLUMNS, curve.points)
        header, rows = io.read_csv(path)
        assert header == ["n", "sigma"]
        assert [tuple(r) for r in rows] == list(curve.points)

    def test_sweep_three_columns(self, tmp_path):
        curve = slit_width_sweep(141, 3, 0.15, 6)
        rows = [(f, x, s) for (f, s), (x, _) in zip(curve.points, curve.rescaled_points)]
        path = tmp_path / "sweep.csv"
        io.emit_csv(path, io.SWEEP_COLUMNS, rows)
        header, back = io.read_csv(path)
        assert header == ["fill", "rescaled", "sigma_s"]
        assert [tuple(r) for r in back] == rows
        assert path.read_text().endswith("\n")

    def test_ragged_records_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            io.emit_csv(tmp_path / "x.csv", io.SCAN_COLUMNS, [(1, 2, 3)])

    def test_io_error_surfaces(self, tmp_path):
        with pytest.raises(OSError):
            io.emit_csv(tmp_path / "missing" / "x.csv", io.SCAN_COLUMNS, [])


class TestReport:
    @pytest.mark.parametrize("N, divisors", [(105, [3, 5, 7]), (139, [139]), (56, [2, 2, 2, 7])])
    def test_divisors(self, tmp_path, N, divisors):
        path = tmp_path / "r.json"
        io.emit_factor_report(factorize(N), path)
        data = json.loads(path.read_text())
        assert list(data) == ["input", "divisors", "sigma_table", "threshold", "model", "oracle_agrees"]
        assert data["input"] == N and data["divisors"] == divisors and data["oracle_agrees"] is True

    def test_divisors_sorted_and_sigma_floats_exact(self, tmp_path):
        report = FactorReport(input=15, divisors=(5, 3), sigma_table=((3, 0.1), (5, 1 / 3)), threshold=1e-9,
                              oracle_agrees=True, model=Model.DELTA)
        data = json.loads(io.emit_factor_report(report, tmp_path / "r.json"))
        assert data["divisors"] == [3, 5]
        assert data["sigma_table"][1] == [5, 1 / 3]


class TestRun:
    def test_pattern_example(self, tmp_path):
        out = tmp_path / "fig1a.csv"
        assert main(["pattern", "--N", "143", "--n", "11", "--fill", "0", "--window", "-8:8", "--spp", "201",
                     "--out", str(out)]) == EXIT_OK
        header, rows = io.read_csv(out)
        assert header == ["chi", "intensity"] and len(rows) == 3217
        peaks = [max(i for c, i in rows if abs(c - (k + 0.5)) < 0.25) for k in range(-7, 7)]
        assert max(peaks) / min(peaks) < 1.01

    def test_factor_json(self, capsys):
        assert main(["factor", "--N", "143", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["divisors"] == [11, 13] and data["oracle_agrees"] is True

    def test_factor_plain(self, capsys):
        assert main(["factor", "--N", "56"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("56 = 2 x 2 x 2 x 7")

    def test_scan_prime(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--N", "139", "--model", "delta", "--out", str(out)]) == EXIT_OK
        _, rows = io.read_csv(out)
        assert len(rows) == 68 and all(s > 1e-9 for _, s in rows)

    def test_sweep_and_calibrate(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--N", "141", "--n", "3", "--steps", "5", "--out", str(out)]) == EXIT_OK
        _, rows = io.read_csv(out)
        assert rows[1][1] == pytest.approx(rows[1][0] * 47)
        out = tmp_path / "cal.csv"
        assert main(["calibrate", "--N", "55", "--n", "5", "--steps", "11", "--detune-max", "1e-3",
                     "--out", str(out)]) == EXIT_OK
        header, rows = io.read_csv(out)
        assert header == ["delta", "mean_intensity"]
        assert max(rows, key=lambda r: r[1])[0] == 0

    @pytest.mark.parametrize(
        "cfg, needle",
        [
            (RunConfig(command="explode", N=15), "unknown command"),
            (RunConfig(command="scan", N=14), "odd"),
            (RunConfig(command="pattern", N=15, n=4), "odd"),
            (RunConfig(command="pattern", N=15, n=5, window=(2.0, 1.0)), "LO < HI"),
            (RunConfig(command="sweep", N=15, n=7), "does not divide"),
            (RunConfig(command="calibrate", N=15, n=5, steps=10), "odd"),
            (RunConfig(command="factor", N=15, threshold=-1.0), "threshold"),
            (RunConfig(command="scan", N=15, threads=0), "threads"),
            (RunConfig(command="scan", N=15, model="fresnel", fill=0.0), "fill"),
        ],
    )
    def test_validation_errors(self, capsys, cfg, needle):
        assert run(cfg) == EXIT_USAGE
        assert needle in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path, capsys):
        cfg = RunConfig(command="scan", N=15, out=str(tmp_path / "nope" / "x.csv"))
        assert run(cfg) == EXIT_IO
        assert "cannot write output" in capsys.readouterr().err

    def test_inconsistency_exit(self, capsys):
        assert run(RunConfig(command="factor", N=143, threshold=0.05)) == EXIT_INCONSISTENT
        assert "internal consistency" in capsys.readouterr().err

    def test_oracle_disagreement_exit(self, capsys):
        cfg = RunConfig(command="factor", N=141, model="fresnel", fill=0.2, threshold=1e-4)
        assert run(cfg) == EXIT_INCONSISTENT
        assert "disagree" in capsys.readouterr().err

    def test_unknown_subcommand_via_process(self):
        proc = run_cli("explode", "--N", "15")
        assert proc.returncode == 2 and "invalid choice" in proc.stderr

    def test_thread_count_byte_identical(self, tmp_path):
        outputs = []
        for threads in (1, 2, 8):
            out = tmp_path / f"scan{threads}.csv"
            assert main(["scan", "--N", "95", "--threads", str(threads), "--out", str(out)]) == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
