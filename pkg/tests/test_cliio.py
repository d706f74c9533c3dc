import json

import numpy as np
import pytest

from fplreg import fileio
from fplreg.cli import main
from fplreg.errors import InvalidConfig
from fplreg.fplm import FitConfig, fit_fplm, predict
from fplreg.funcspace import Curve, Grid
from fplreg.simstudy import SimConfig, generate

UNIT = Grid(0.0, 1.0, 201)


def run_cli(*argv):
    return main(list(argv))


class TestCurveCsv:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        curves = [Curve(UNIT, rng.normal(size=201)) for _ in range(4)]
        path = tmp_path / "curves.csv"
        fileio.write_curves_csv(path, curves)
        back = fileio.read_curves_csv(path)
        assert len(back) == 4
        for a, b in zip(curves, back):
            assert a.grid == b.grid
            np.testing.assert_array_equal(a.values, b.values)

    def test_rejects_ragged_rows(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,0.5,1.0\n1.0,2.0\n")
        with pytest.raises(InvalidConfig):
            fileio.read_curves_csv(path)

    def test_rejects_nonuniform_grid(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,0.1,1.0\n1.0,2.0,3.0\n")
        with pytest.raises(InvalidConfig):
            fileio.read_curves_csv(path)


class TestModelFile:
    def test_round_trip_predicts_identically(self, tmp_path):
        data, _ = generate(SimConfig(n=40, seed=1))
        model = fit_fplm(data, FitConfig(m=2, bandwidth_multiplier=2.0))
        path = tmp_path / "model.json"
        fileio.save_model(path, model)
        loaded = fileio.load_model(path)
        rng = np.random.default_rng(2)
        for _ in range(50):
            x = Curve(UNIT, rng.normal(size=201))
            t = data.T[rng.integers(0, 40)]
            a = predict(model, x, t)
            b = predict(loaded, x, t)
            assert b == pytest.approx(a, rel=1e-12)

    def test_unknown_version_rejected(self, tmp_path):
        data, _ = generate(SimConfig(n=10, seed=3))
        model = fit_fplm(data, FitConfig(m=1, bandwidth_multiplier=2.0))
        path = tmp_path / "model.json"
        fileio.save_model(path, model)
        doc = json.loads(path.read_text())
        doc["format_version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(InvalidConfig):
            fileio.load_model(path)


class TestSimulateCommand:
    def test_deterministic_outputs(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        for d in (d1, d2):
            assert run_cli(
                "simulate", "--n", "100", "--seed", "7", "--out-dir", str(d)
            ) == 0
        for name in ("X.csv", "T.csv", "b_true.csv", "manifest.json"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_row_count(self, tmp_path):
        run_cli("simulate", "--n", "100", "--seed", "7", "--out-dir", str(tmp_path))
        lines = (tmp_path / "X.csv").read_text().splitlines()
        assert len(lines) == 101  # grid header plus one row per curve

    def test_noiseless_truth_consistency(self, tmp_path):
        run_cli(
            "simulate", "--n", "20", "--seed", "2", "--noise-sd", "0",
            "--out-dir", str(tmp_path),
        )
        data, truth = fileio.load_dataset(tmp_path / "manifest.json")
        np.testing.assert_array_equal(
            data.Y, truth.linear_values + truth.g_values
        )


class TestFitCommand:
    @pytest.fixture()
    def simdir(self, tmp_path):
        run_cli("simulate", "--n", "60", "--seed", "7", "--out-dir", str(tmp_path))
        return tmp_path

    def test_fit_is_deterministic(self, simdir):
        m1, m2 = simdir / "m1.json", simdir / "m2.json"
        for out in (m1, m2):
            code = run_cli(
                "fit", "--manifest", str(simdir / "manifest.json"),
                "--m", "2", "--bandwidth-multiplier", "2", "--out-model", str(out),
            )
            assert code == 0
        assert m1.read_bytes() == m2.read_bytes()

    def test_rank_overflow_exit_code(self, simdir, capsys):
        code = run_cli(
            "fit", "--manifest", str(simdir / "manifest.json"),
            "--m", "61", "--out-model", str(simdir / "m.json"),
        )
        assert code == 3
        assert "rank" in capsys.readouterr().err

    def test_summary_includes_errors(self, simdir, capsys):
        run_cli(
            "fit", "--manifest", str(simdir / "manifest.json"),
            "--m", "2", "--out-model", str(simdir / "m.json"),
        )
        out = capsys.readouterr().out
        assert "mse1" in out and "mse2" in out and "mse3" in out


class TestPredictCommand:
    def test_round_trip_predictions(self, tmp_path):
        run_cli("simulate", "--n", "30", "--seed", "9", "--out-dir", str(tmp_path))
        run_cli(
            "fit", "--manifest", str(tmp_path / "manifest.json"),
            "--m", "2", "--out-model", str(tmp_path / "model.json"),
        )
        code = run_cli(
            "predict", "--model", str(tmp_path / "model.json"),
            "--x-curves", str(tmp_path / "X.csv"),
            "--t-curves", str(tmp_path / "T.csv"),
            "--out", str(tmp_path / "pred.csv"),
        )
        assert code == 0
        lines = (tmp_path / "pred.csv").read_text().splitlines()
        assert lines[0] == "linear,g,total,empty_neighborhood"
        assert len(lines) == 31
        first = lines[1].split(",")
        assert float(first[0]) + float(first[1]) == pytest.approx(float(first[2]))
        assert first[3] == "0"

    def test_zero_covariate_zero_linear_part(self, tmp_path):
        run_cli("simulate", "--n", "20", "--seed", "10", "--out-dir", str(tmp_path))
        run_cli(
            "fit", "--manifest", str(tmp_path / "manifest.json"),
            "--m", "1", "--out-model", str(tmp_path / "model.json"),
        )
        zeros = tmp_path / "zeros.csv"
        grid_row = (tmp_path / "X.csv").read_text().splitlines()[0]
        zeros.write_text(grid_row + "\n" + ",".join(["0.0"] * 201) + "\n")
        t_first = (tmp_path / "T.csv").read_text().splitlines()
        tfile = tmp_path / "t1.csv"
        tfile.write_text("\n".join(t_first[:2]) + "\n")
        run_cli(
            "predict", "--model", str(tmp_path / "model.json"),
            "--x-curves", str(zeros), "--t-curves", str(tfile),
            "--out", str(tmp_path / "pred.csv"),
        )
        row = (tmp_path / "pred.csv").read_text().splitlines()[1].split(",")
        assert float(row[0]) == 0.0


class TestBenchmarkCommand:
    def test_byte_identical_across_runs_and_jobs(self, tmp_path):
        args = [
            "benchmark", "--n", "30", "--replications", "3", "--seed", "5",
            "--m-grid", "1,2", "--multipliers", "1,4",
        ]
        outs = []
        for name, jobs in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "2")):
            out = tmp_path / name
            assert run_cli(*args, "--jobs", jobs, "--out-csv", str(out)) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_grid_shape(self, tmp_path):
        out = tmp_path / "t.csv"
        run_cli(
            "benchmark", "--n", "20", "--replications", "1", "--seed", "1",
            "--out-csv", str(out),
        )
        lines = out.read_text().splitlines()
        assert lines[0] == "m,multiplier,mse1,mse2,mse3,completed,missing"
        assert len(lines) == 26  # header + 5x5 grid

    def test_single_replication_matches_library(self, tmp_path):
        from fplreg.simstudy import run_benchmark

        out = tmp_path / "t.csv"
        run_cli(
            "benchmark", "--n", "25", "--replications", "1", "--seed", "3",
            "--m-grid", "2", "--multipliers", "2", "--out-csv", str(out),
        )
        table = run_benchmark(SimConfig(n=25, seed=3), [2], [2.0], 1)
        cell = table.cells[0]
        row = out.read_text().splitlines()[1].split(",")
        assert float(row[2]) == cell.mse1
        assert float(row[4]) == cell.mse3


class TestCrossvalCommand:
    def test_single_candidate(self, tmp_path, capsys):
        run_cli("simulate", "--n", "24", "--seed", "4", "--out-dir", str(tmp_path))
        code = run_cli(
            "crossval", "--manifest", str(tmp_path / "manifest.json"),
            "--m-grid", "2", "--multipliers", "2", "--folds", "3",
            "--out-csv", str(tmp_path / "cv.csv"),
        )
        assert code == 0
        assert "selected m = 2" in capsys.readouterr().out
        lines = (tmp_path / "cv.csv").read_text().splitlines()
        assert lines[0] == "m,multiplier,cv_error"
        assert len(lines) == 2

    def test_deterministic(self, tmp_path, capsys):
        run_cli("simulate", "--n", "30", "--seed", "4", "--out-dir", str(tmp_path))
        capsys.readouterr()
        sel = []
        for name in ("cv1.csv", "cv2.csv"):
            run_cli(
                "crossval", "--manifest", str(tmp_path / "manifest.json"),
                "--m-grid", "1,2,3", "--multipliers", "1,2", "--folds", "4",
                "--seed", "11", "--out-csv", str(tmp_path / name),
            )
            sel.append(capsys.readouterr().out)
        assert sel[0] == sel[1]
        assert (tmp_path / "cv1.csv").read_bytes() == (tmp_path / "cv2.csv").read_bytes()


class TestExitCodes:
    def test_missing_manifest_is_user_error(self, tmp_path, capsys):
        code = run_cli(
            "fit", "--manifest", str(tmp_path / "nope.json"),
            "--m", "1", "--out-model", str(tmp_path / "m.json"),
        )
        assert code == 4  # unreadable file surfaces as I/O failure

    def test_bad_manifest_is_user_error(self, tmp_path):
        bad = tmp_path / "manifest.json"
        bad.write_text("{not json")
        code = run_cli(
            "fit", "--manifest", str(bad),
            "--m", "1", "--out-model", str(tmp_path / "m.json"),
        )
        assert code == 2
