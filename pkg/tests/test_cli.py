import io
import json

import pytest

from dahapoly.cli import read_config, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_koornwinder_of_zero_is_one():
    code, out, _ = call("koornwinder", "E", "--n", "2", "--lambda", "0,0")
    assert code == 0 and out.strip() == "1"


def test_koornwinder_json_has_leading_term():
    code, out, _ = call("koornwinder", "E", "--lambda", "1,0", "--format", "json")
    assert code == 0
    assert "[1, 0]" in out or "[1,0]" in out


def test_lattice_report():
    code, out, _ = call("structure", "lattice", "--n", "4", "--r", "4", "--lambda", "-3,0,-9,13")
    assert code == 0
    assert '"quot": [3,2,0,0]' in out
    assert '"std": [9,6,0,0]' in out
    data = json.loads(out)
    assert data["indices"] == [4, 3, 1, 2]


def test_chain_certificate_exits_zero():
    code, out, _ = call("structure", "certify", "--chain", "tq-irr")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_modified_build_replay():
    code, out, _ = call("modified", "build", "--n", "4", "--spec", "tq:k=1,r=2,branch=0",
                        "--lambda", "1,1,0,0", "--start", "0,1,0,1", "--word", "3,1,2")
    assert code == 0
    assert out.splitlines()[1].split() == ["-1", "[0,", "0,", "1,", "1]"]


@pytest.mark.parametrize("argv", [
    ["koornwinder", "E"],
    ["koornwinder", "E", "--lambda", "0,x"],
    ["koornwinder", "E", "--n", "2", "--lambda", "0,0,0"],
    ["structure", "lattice", "--r", "1"],
    ["nonsense"],
])
def test_usage_errors_exit_two(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_rank_mismatch_message_goes_to_stderr():
    code, out, err = call("koornwinder", "E", "--n", "3", "--lambda", "1,0")
    assert code == 2 and out == "" and err


def test_output_is_deterministic_across_runs_and_threads():
    argv = ["structure", "basis", "--case", "ab", "--spec", "ab:i=1,r=2,sign=+", "--window", "1"]
    first = call(*argv)[1]
    assert first and first == call(*argv)[1]
    assert call(*argv, "--threads", "2")[1] == first


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "session.cfg"
    cfg.write_text("# session\nn = 3\nformat = json\nthreads = 2\n")
    conf = read_config(str(cfg))
    assert conf["n"] == 3 and conf["threads"] == 2
    code, out, _ = call("koornwinder", "E", "--config", str(cfg), "--lambda", "0,0,0")
    assert code == 0 and json.loads(out)["lambda"] == [0, 0, 0]
    code, out, _ = call("koornwinder", "E", "--config", str(cfg), "--n", "2", "--format", "pretty",
                        "--lambda", "0,0")
    assert code == 0 and out.strip() == "1"


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert call("params", "--config", str(cfg))[0] == 2


def test_params_catalog():
    code, out, _ = call("params", "--n", "2")
    assert code == 0 and "tq" in out


def test_verify_subset_passes():
    code, out, _ = call("verify", "5,6")
    assert code == 0
    assert out.count("PASS") == 2


def test_verify_reports_known_discrepancy():
    code, out, _ = call("verify", "10")
    assert code == 1
    assert "criterion 10 FAIL" in out
