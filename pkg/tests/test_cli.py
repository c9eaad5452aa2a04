"""End-to-end runs of the command-line tool."""
import csv
import io
import json

import pytest

from gridspectra import __version__
from gridspectra.commands import EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from gridspectra.main import run
from gridspectra.services import shiftsolver
from gridspectra.services.errors import SolverError


def _table(text):
    return list(csv.reader(io.StringIO(text)))


class TestSpectrum:
    def test_path_of_three(self, capsys):
        code = run(["spectrum", "--dims", "3", "--laplacian", "combinatorial", "--format", "csv"])
        assert code == EXIT_OK
        rows = _table(capsys.readouterr().out)
        assert rows[0] == ["index", "z", "lambda", "delta"]
        assert sorted(round(float(r[2]), 10) for r in rows[1:]) == [0.0, 1.0, 3.0]

    def test_json_to_file(self, tmp_path, capsys):
        out = tmp_path / "spectrum.json"
        code = run(["spectrum", "--dims", "2,3", "--weights", "1,2", "--laplacian", "normalized",
                    "--format", "json", "--out", str(out), "--threads", "1"])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        doc = json.loads(out.read_text())
        assert doc["spec"] == {"dims": [2, 3], "weights": [1.0, 2.0]}
        assert len(doc["eigenvalues"]) == 6

    def test_identical_runs_give_identical_files(self, tmp_path):
        outputs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert run(["spectrum", "--dims", "3,3", "--weights", "1,2", "--laplacian", "random-walk",
                        "--format", "json", "--out", str(out)]) == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_weight_length_mismatch(self, capsys):
        code = run(["spectrum", "--dims", "3", "--weights", "1,2", "--laplacian", "combinatorial"])
        assert code == EXIT_USAGE
        assert "--weights" in capsys.readouterr().err

    def test_unparseable_dims(self, capsys):
        assert run(["spectrum", "--dims", "3,a"]) == EXIT_USAGE
        assert "--dims" in capsys.readouterr().err

    def test_unknown_kind(self):
        assert run(["spectrum", "--dims", "3", "--laplacian", "signless"]) == EXIT_USAGE

    def test_solver_failure_exit_code(self, monkeypatch, capsys):
        def broken(*args, **kwargs):
            raise SolverError("shift equation has no sign change", z=(1, 1), best_residual=0.5)

        monkeypatch.setattr(shiftsolver, "solve_all", broken)
        code = run(["spectrum", "--dims", "3,3", "--laplacian", "normalized"])
        assert code == EXIT_FAILURE
        assert "z=[1, 1]" in capsys.readouterr().err


class TestEigenvector:
    def test_closed_form(self, capsys):
        assert run(["eigenvector", "--dims", "2,2", "--z", "1;1", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["vector"] == pytest.approx([0.5, -0.5, -0.5, 0.5], abs=1e-15)
        assert doc["lambda"] == pytest.approx(4.0)

    def test_raw_index_is_reduced(self, capsys):
        assert run(["eigenvector", "--dims", "5", "--z", "7", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["z"] == [3]

    def test_zero_vector_index(self, capsys):
        assert run(["eigenvector", "--dims", "5", "--z", "5"]) == EXIT_USAGE
        assert "zero vector" in capsys.readouterr().err

    def test_normalized_with_unit_length(self, capsys):
        code = run(["eigenvector", "--dims", "3,4", "--weights", "1,2", "--laplacian", "normalized",
                    "--z", "1,2", "--normalize", "--format", "json"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert sum(v * v for v in doc["vector"]) == pytest.approx(1.0)
        assert doc["normalized"] is True

    def test_non_canonical_shift_index(self):
        assert run(["eigenvector", "--dims", "3", "--laplacian", "normalized", "--z", "3"]) == EXIT_USAGE


class TestVerify:
    def test_normalized_rectangle(self, capsys):
        code = run(["verify", "--dims", "2,3", "--laplacian", "normalized", "--tol", "1e-7",
                    "--format", "json"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True
        assert doc["max_deviation"] <= 1e-7

    @pytest.mark.parametrize("grid", [["--dims", "2,3"], ["--dims", "3,4", "--weights", "1,2"]])
    def test_random_walk(self, grid, capsys):
        code = run(["verify", *grid, "--laplacian", "randomwalk", "--tol", "1e-7", "--threads", "1",
                    "--format", "json"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True
        assert doc["gram_max"] <= 1e-7

    def test_failure_still_writes_the_report(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        code = run(["verify", "--dims", "3,4", "--weights", "1,2", "--laplacian", "normalized",
                    "--tol", "1e-300", "--out", str(out)])
        assert code == EXIT_FAILURE
        assert _table(out.read_text())[1][-1] == "false"
        assert "verification failed" in capsys.readouterr().err

    @pytest.mark.parametrize("tol", ["0", "-1", "abc"])
    def test_bad_tolerance(self, tol):
        assert run(["verify", "--dims", "3", "--tol", tol]) == EXIT_USAGE

    def test_dense_cap_from_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("GRIDSPECTRA_DENSE_CAP", "4")
        assert run(["verify", "--dims", "3,3", "--format", "json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["max_deviation"] is None


class TestDistributions:
    def test_analyze(self, capsys):
        code = run(["analyze", "--dims", "4,4", "--laplacian", "normalized", "--bins", "8",
                    "--format", "json", "--paired"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert sum(doc["histogram"]["counts"]) == 16
        assert len(doc["paired"]) == 16
        assert 0 <= doc["ks_statistic"] <= 1

    def test_limit_cdf(self, capsys):
        assert run(["limit-cdf", "--d", "1", "--resolution", "256", "--samples", "3"]) == EXIT_OK
        rows = _table(capsys.readouterr().out)
        assert [float(r[0]) for r in rows[1:]] == [0.0, 2.0, 4.0]
        assert float(rows[2][1]) == pytest.approx(0.5)
        assert float(rows[3][1]) == 1.0

    def test_limit_cdf_normalized(self, capsys):
        assert run(["limit-cdf", "--d", "2", "--laplacian", "normalized", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["samples"][-1] == [2.0, 1.0]

    def test_shift_profile(self, capsys):
        assert run(["shift-profile", "--d", "2", "--layers", "4,6", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert [r["z"] for r in doc["rows"]] == [[2, 3], [4, 5]]

    def test_shift_profile_rejects_small_grids(self):
        assert run(["shift-profile", "--d", "2", "--layers", "1"]) == EXIT_USAGE


class TestSurface:
    def test_missing_subcommand(self):
        assert run([]) == EXIT_USAGE

    def test_missing_dims(self, capsys):
        assert run(["spectrum"]) == EXIT_USAGE
        assert "--dims" in capsys.readouterr().err

    def test_version(self, capsys):
        assert run(["--version"]) == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_bad_threads_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("GRIDSPECTRA_THREADS", "many")
        assert run(["spectrum", "--dims", "3,3", "--laplacian", "normalized"]) == EXIT_USAGE
        assert "GRIDSPECTRA_THREADS" in capsys.readouterr().err

    def test_bad_log_level_environment(self, monkeypatch):
        monkeypatch.setenv("GRIDSPECTRA_LOG_LEVEL", "LOUD")
        assert run(["spectrum", "--dims", "3"]) == EXIT_USAGE

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert run(["spectrum", "--dims", "3", "--out", str(blocker / "out.csv")]) == EXIT_FAILURE
