"""End-to-end tests of the command-line entry point."""
import json
import logging

import pytest

import src.main as cli
from src.errors import SoundnessViolation
from src.experiments import ResultRow


@pytest.fixture(autouse=True)
def reset_package_logger():
    yield
    logger = logging.getLogger("src")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(
        "experiments:\n"
        "  seed: 7\n"
        "  trials: 20\n"
        "output:\n"
        "  format: csv\n"
        f"  directory: {tmp_path}\n"
        "logging:\n"
        "  level: WARNING\n"
        "  file: null\n"
        "  console_colors: false\n"
    )
    return str(path)


@pytest.fixture
def run(config_file, capsys):
    """Run the CLI with the test config; returns (exit code, stdout)."""
    def _run(*argv):
        code = cli.main(["--config", config_file, *argv])
        return code, capsys.readouterr().out
    return _run


def _matrix(data_dir, name):
    return str(data_dir / name)


class TestSingleInstanceCommands:

    def test_certify_nsp_holds(self, run, data_dir):
        code, out = run("certify-nsp", "--matrix", _matrix(data_dir, "hrep.txt"), "--k", "1", "--strict")
        payload = json.loads(out)
        assert code == 0
        assert payload["verdict"] == "holds"
        assert payload["query"] == "NSP<(k=1, C=1)"
        assert payload["lps_solved"] == 3

    def test_certify_nsp_fails_with_certificate(self, run, data_dir):
        code, out = run("certify-nsp", "--matrix", _matrix(data_dir, "h3.txt"), "--support", "1", "--strict")
        payload = json.loads(out)
        assert code == 0
        assert payload["verdict"] == "fails"
        assert payload["support"] == [0]
        assert len(payload["certificate"]) == 3

    def test_pseudoweight(self, run, data_dir):
        code, out = run("pseudoweight", "--vector", "2,1,1", "--matrix", _matrix(data_dir, "h3.txt"))
        payload = json.loads(out)
        assert code == 0
        assert payload["awgnc"]["exact"] == "8/3"
        assert payload["bsc"]["exact"] == "2"
        assert payload["bec"]["exact"] == "3"
        assert payload["cone_member"] is True

    def test_min_pseudoweight(self, run, data_dir):
        code, out = run("min-pseudoweight", "--matrix", _matrix(data_dir, "hrep.txt"), "--kind", "bsc")
        assert code == 0
        assert json.loads(out)["bsc"]["value"]["exact"] == "3"

    def test_decode_cs(self, run, data_dir):
        code, out = run("decode-cs", "--matrix", _matrix(data_dir, "hrep.txt"), "--syndrome", "1,1", "--k", "1")
        payload = json.loads(out)
        assert code == 0
        assert payload["cs_lpd"]["status"] == "success"
        assert payload["cs_lpd"]["estimate"] == ["0", "1", "0"]
        assert payload["cs_opt"]["estimate"] == ["0", "1", "0"]

    def test_decode_cc_llr(self, run, data_dir):
        code, out = run("decode-cc", "--matrix", _matrix(data_dir, "hrep.txt"), "--llr=-1,1,1")
        payload = json.loads(out)
        assert code == 0
        assert payload["cc_lpd"]["estimate"] == ["0", "0", "0"]
        assert payload["zero_codeword"] is True

    def test_decode_cc_channel_is_reproducible(self, run, data_dir):
        argv = ("decode-cc", "--matrix", _matrix(data_dir, "hamming74.alist"), "--channel", "bsc:0.1", "--seed", "3")
        first = run(*argv)
        second = run(*argv)
        assert first == second
        assert json.loads(first[1])["channel"]["seed"] == 3

    def test_nsp_implication(self, run, data_dir):
        code, out = run("nsp-implication", "--matrix", _matrix(data_dir, "hrep.txt"), "--k", "1")
        payload = json.loads(out)
        assert code == 0
        assert payload["premise"] is True
        assert payload["conclusion"] is True
        assert payload["min_bsc_pseudoweight"]["value"]["exact"] == "3"

    def test_nsp_implication_without_premise(self, run, data_dir):
        code, out = run("nsp-implication", "--matrix", _matrix(data_dir, "h3.txt"), "--k", "1")
        payload = json.loads(out)
        assert code == 0
        assert (payload["premise"], payload["satisfied"]) == (False, True)


class TestSweeps:

    def test_translate(self, run, data_dir):
        code, out = run(
            "translate", "--matrix", _matrix(data_dir, "hrep.txt"), "--trials", "20", "--out-format", "json"
        )
        [row] = json.loads(out)
        assert code == 0
        assert (row["trials"], row["successes"], row["violations"]) == (60, 60, 0)
        assert row["parameters"]["trials_per_support"] == 20
        assert "wall_time" not in row

    def test_csv_output_file_is_byte_identical(self, run, data_dir, tmp_path):
        matrix = _matrix(data_dir, "hrep.txt")
        assert run("translate", "--matrix", matrix, "--out", "a.csv")[0] == 0
        assert run("translate", "--matrix", matrix, "--out", "b.csv", "--workers", "2")[0] == 0
        first, second = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
        assert first == second
        assert first.startswith(b"task,matrix_id,seed,parameters,trials,successes,violations,skipped")

    def test_timing_column_is_opt_in(self, run, data_dir):
        _, out = run("halfweight", "--matrix", _matrix(data_dir, "h3.txt"), "--out-format", "json", "--timing")
        assert "wall_time" in json.loads(out)[0]

    def test_seed_from_environment(self, run, data_dir, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV, "5")
        _, out = run("bridge-check", "--matrix", _matrix(data_dir, "hrep.txt"), "--out-format", "json")
        assert json.loads(out)[0]["seed"] == 5
        _, out = run("bridge-check", "--matrix", _matrix(data_dir, "hrep.txt"), "--seed", "9", "--out-format", "json")
        assert json.loads(out)[0]["seed"] == 9

    def test_violations_exit_with_two(self, run, data_dir, monkeypatch):
        row = ResultRow("translate", "hrep", 7, {}, trials=1, successes=0, violations=1)
        monkeypatch.setattr(cli, "run_experiment", lambda config: [row])
        code, _ = run("translate", "--matrix", _matrix(data_dir, "hrep.txt"))
        assert code == 2


class TestErrors:

    def test_not_in_nullspace(self, run, data_dir):
        code, out = run("bridge-check", "--matrix", _matrix(data_dir, "hrep.txt"), "--vector", "1,0,0")
        assert code == 1
        assert out == ""

    def test_bridge_soundness_violation(self, run, data_dir, monkeypatch):
        def broken(H, nu):
            raise SoundnessViolation("forced")
        monkeypatch.setattr(cli, "bridge_map", broken)
        code, _ = run("bridge-check", "--matrix", _matrix(data_dir, "hrep.txt"), "--vector", "1,-1,1")
        assert code == 2

    def test_usage_errors(self, run, data_dir):
        assert run()[0] == 1
        assert run("certify-nsp", "--matrix", _matrix(data_dir, "h3.txt"))[0] == 1
        assert run("certify-nsp", "--matrix", _matrix(data_dir, "h3.txt"), "--k", "9")[0] == 1

    def test_missing_files(self, run, tmp_path):
        assert run("min-pseudoweight", "--matrix", str(tmp_path / "missing.txt"))[0] == 1
        assert cli.main(["--config", str(tmp_path / "missing.yaml"), "halfweight", "--matrix", "x"]) == 1

    def test_bad_channel(self, run, data_dir):
        code, _ = run("sandwich", "--matrix", _matrix(data_dir, "hrep.txt"), "--channel", "bsc:0.7")
        assert code == 1

    def test_log_records_carry_the_command(self, config_file, data_dir, capsys):
        matrix = _matrix(data_dir, "hrep.txt")
        assert cli.main(["--config", config_file, "sandwich", "--matrix", matrix, "--channel", "bsc:0.7"]) == 1
        assert "[sandwich] ERROR" in capsys.readouterr().err
