"""Test the command-line interface."""

import json
from unittest.mock import patch

import pytest

from phase_injectivity.certifiers import verify_certificate
from phase_injectivity.config import CERTIFICATE_TOL
from phase_injectivity.main import run

EXAMPLE_M2N3 = {
    "m": 2,
    "n": 3,
    "mode": "rational",
    "vectors": [
        [["1/1", "0/1"], ["0/1", "0/1"]],
        [["0/1", "0/1"], ["1/1", "0/1"]],
        [["1/1", "0/1"], ["1/1", "0/1"]],
    ],
}


@pytest.fixture
def frame_file(tmp_path):
    """Write the (2, 3) frame (1, 0), (0, 1), (1, 1)."""
    path = tmp_path / "m2n3.json"
    path.write_text(json.dumps(EXAMPLE_M2N3))
    return path


def _stdout_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestExitCodes:
    """Tests for exit codes."""

    def test_no_arguments(self):
        """Test a missing subcommand is a usage error."""
        assert run([]) == 2

    def test_missing_m(self):
        """Test --m is required for degree."""
        assert run(["degree"]) == 2

    def test_missing_frame_source(self):
        """Test certify needs --frame or --m and --n."""
        assert run(["certify", "--m", "2"]) == 2

    def test_exact_test_unsupported_shape(self):
        """Test exact-test on a shape without a construction."""
        assert run(["exact-test", "--m", "4", "--n", "11", "--seed", "0"]) == 2

    def test_malformed_frame(self, tmp_path):
        """Test a malformed frame file."""
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(["certify", "--frame", str(path)]) == 3

    def test_missing_frame_file(self, tmp_path):
        """Test a frame file that does not exist."""
        assert run(["kernel", "--frame", str(tmp_path / "absent.json")]) == 3

    def test_version(self, capsys):
        """Test --version."""
        assert run(["--version"]) == 0
        assert "phase-injectivity" in capsys.readouterr().out


class TestCombinatoricsCommands:
    """Tests for degree, hmw-bound and parity-table."""

    def test_degree(self, capsys):
        """Test the degree report for m = 3."""
        assert run(["degree", "--m", "3"]) == 0
        payload = _stdout_json(capsys)
        assert payload["degree"] == "3"
        assert payload["is_odd"] is True

    def test_hmw_bound(self, capsys):
        """Test the bound for m = 5."""
        assert run(["hmw-bound", "--m", "5"]) == 0
        payload = _stdout_json(capsys)
        assert payload["hmw_bound"] == 14
        assert payload["4m-5"] == 15

    def test_parity_table_csv(self, tmp_path, capsys):
        """Test the table is written to --csv."""
        path = tmp_path / "table.csv"
        assert run(["parity-table", "--m-min", "2", "--m-max", "5", "--csv", str(path)]) == 0
        lines = path.read_text().splitlines()
        assert lines[0].startswith("m,degree,v2")
        assert len(lines) == 5
        assert capsys.readouterr().out == ""


class TestFrameCommands:
    """Tests for commands reading a frame."""

    def test_certify(self, frame_file, capsys):
        """Test certify returns a verified certificate for (2, 3)."""
        assert run(["certify", "--frame", str(frame_file)]) == 0
        payload = _stdout_json(capsys)
        assert payload["verdict"] == "NonInjective"
        assert payload["verification"]["passed"] is True
        assert payload["frame"]["m"] == 2

    def test_certify_timing(self, frame_file, capsys):
        """Test --timing adds wall-clock time."""
        assert run(["certify", "--frame", str(frame_file), "--timing"]) == 0
        assert "wall_clock_seconds" in _stdout_json(capsys)

    def test_kernel(self, frame_file, capsys):
        """Test the exact kernel of the (2, 3) frame."""
        assert run(["kernel", "--frame", str(frame_file), "--exact"]) == 0
        payload = _stdout_json(capsys)
        assert payload["dimension"] == 1
        assert payload["basis"] == [["0/1", "0/1", "0/1", "1/1"]]

    def test_fcp(self, frame_file, capsys):
        """Test three real vectors in R^2 have the finite complement property."""
        assert run(["fcp", "--frame", str(frame_file)]) == 0
        assert _stdout_json(capsys)["finite_complement_property"] is True

    def test_witness_from_certificate(self, frame_file, tmp_path, capsys):
        """Test the witness of Q = [[0, i], [-i, 0]] collides."""
        cert = tmp_path / "cert.json"
        cert.write_text(json.dumps({"coords": ["0/1", "0/1", "0/1", "1/1"]}))
        assert run(["witness", "--frame", str(frame_file), "--certificate", str(cert)]) == 0
        payload = _stdout_json(capsys)
        assert payload["verification"]["passed"] is True
        assert payload["max_measurement_gap"] < 1e-9
        assert payload["witness"]["phase_distance"] > 0.1

    def test_witness_rejected_certificate(self, frame_file, tmp_path, capsys):
        """Test a certificate outside L fails the self-check."""
        cert = tmp_path / "cert.json"
        cert.write_text(json.dumps({"coords": ["1/1", "0/1", "0/1", "0/1"]}))
        assert run(["witness", "--frame", str(frame_file), "--certificate", str(cert)]) == 1
        payload = _stdout_json(capsys)
        assert payload["witness"] is None
        assert payload["verification"]["reason"] == "linear residual too large at row 0"

    def test_gen_then_exact_test_is_reproducible(self, tmp_path, capsys):
        """Test exact-test output is byte-identical across runs."""
        path = tmp_path / "frame.json"
        assert run(["gen", "--m", "2", "--n", "4", "--seed", "7", "--out", str(path)]) == 0
        capsys.readouterr()
        assert run(["exact-test", "--frame", str(path), "--exact"]) == 0
        first = capsys.readouterr().out
        assert run(["exact-test", "--frame", str(path), "--exact"]) == 0
        assert capsys.readouterr().out == first
        assert json.loads(first)["verdict"] == "Injective"


    def test_certify_tol_reaches_reverification(self, frame_file, capsys):
        """Test --tol is the tolerance used to re-verify the emitted certificate."""
        with patch("phase_injectivity.main.verify_certificate", wraps=verify_certificate) as spy:
            assert run(["certify", "--frame", str(frame_file), "--tol", "1e-6"]) == 0
        assert spy.call_args.args[2] == 1e-6
        assert _stdout_json(capsys)["verification"]["passed"] is True

    def test_tol_never_stricter_than_default(self, frame_file, capsys):
        """Test a --tol below the certificate tolerance falls back to it."""
        with patch("phase_injectivity.main.verify_certificate", wraps=verify_certificate) as spy:
            assert run(["exact-test", "--frame", str(frame_file), "--tol", "1e-12"]) == 0
        assert spy.call_args.args[2] == CERTIFICATE_TOL
        capsys.readouterr()

    def test_gen_writes_seed(self, tmp_path, capsys):
        """Test the emitted frame file records its seed."""
        path = tmp_path / "frame.json"
        assert run(["gen", "--m", "2", "--n", "4", "--seed", "7", "--out", str(path)]) == 0
        metadata = json.loads(path.read_text())["metadata"]
        assert metadata["seed"] == 7
        assert metadata["sampling"] == "gaussian"

    def test_gen_records_generated_seed(self, capsys):
        """Test a generated seed is written into the frame and reported on stderr."""
        assert run(["gen", "--m", "2", "--n", "3"]) == 0
        captured = capsys.readouterr()
        seed = json.loads(captured.out)["metadata"]["seed"]
        assert isinstance(seed, int)
        assert captured.err.strip().endswith(f"seed {seed}")

class TestExperimentCommands:
    """Tests for the harness commands."""

    def test_montecarlo(self, tmp_path, capsys):
        """Test counts on stdout and the per-trial CSV."""
        path = tmp_path / "trials.csv"
        args = ["montecarlo", "--m", "2", "--n", "4", "--trials", "3", "--seed", "0", "--method", "exact"]
        assert run([*args, "--csv", str(path)]) == 0
        payload = _stdout_json(capsys)
        assert payload["counts"]["Injective"] == 3
        assert "wall_clock_seconds" not in payload
        assert len(path.read_text().splitlines()) == 4

    def test_invariance(self, capsys):
        """Test the invariance command on (2, 4)."""
        args = ["invariance", "--m", "2", "--n", "4", "--trials", "2", "--seed", "1", "--transforms", "2"]
        assert run(args) == 0
        assert _stdout_json(capsys)["passed"] is True
