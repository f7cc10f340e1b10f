import json
import subprocess
import sys

import pytest

from conftest import DATA
from shardlat.cli import RunConfig, UsageError, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_gamma(capsys):
    assert run(capsys, "gamma", "--n", "4") == (0, "1 8\n", "")
    assert run(capsys, "gamma", "--n", "6")[1] == "1 52 136\n"


def test_build_json(capsys):
    code, out, err = run(capsys, "build", "--type", "A", "--n", "4")
    data = json.loads(out)
    assert code == 0 and len(data["elements"]) == 24
    assert sum(1 for u, v in data["covers"] if u == data["rank"].index(0)) == 11
    assert "rank profile 1 11 11 1" in err


def test_build_text(capsys):
    code, out, _ = run(capsys, "build", "--type", "B", "--n", "2", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "rank 0: -2|-1|0|1|2"


def test_export_dot_matches_golden_file(capsys, tmp_path):
    target = tmp_path / "a3.dot"
    code, _, _ = run(capsys, "export", "--type", "A", "--n", "3", "--format", "dot", "--out", str(target))
    assert code == 0
    assert target.read_text() == (DATA / "a3_hasse.dot").read_text()
    code, out, _ = run(capsys, "export", "--n", "3", "--format", "dot")
    assert out == target.read_text()


def test_export_classes(capsys):
    code, out, _ = run(capsys, "export", "--n", "4", "--format", "dot", "--classes")
    assert code == 0 and out.count("fontcolor") == 24
    assert run(capsys, "export", "--type", "B", "--n", "2", "--classes")[0] == 2


def test_mobius(capsys):
    code, out, _ = run(capsys, "mobius", "--type", "A", "--n", "4")
    data = json.loads(out)
    assert code == 0 and data["mobius"] == -13 and data["abs"] == 13 and data["falling"] == 13
    code, out, _ = run(capsys, "mobius", "--n", "3", "--lo", "21|3", "--hi", "321")
    assert json.loads(out)["mobius"] == -1


def test_mobius_chain_cap(capsys):
    data = json.loads(run(capsys, "mobius", "--n", "4", "--max-chains", "5")[1])
    assert data["abs"] == 13 and data["falling"] is None


def test_verify_all_passes_on_a5(capsys):
    code, out, _ = run(capsys, "verify", "all", "--type", "A", "--n", "5", "--jobs", "1")
    recs = records(out)
    assert code == 0
    assert {r["suite"] for r in recs} == {"el", "sbd", "shards", "cones", "lattice", "nc"}
    assert all(r["status"] == "pass" for r in recs)


def test_verify_skips_what_does_not_apply(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "nc", "--type", "B", "--n", "2")
    assert code == 0 and {r["status"] for r in records(out)} == {"skip"}


def test_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "verify", "el", "--type", "D", "--n", "4", "--jobs", "1")
    recs = records(out)
    assert code == 1
    assert any(r["status"] == "fail" and r["witness"] for r in recs)


def test_verify_output_is_deterministic(capsys):
    first = run(capsys, "verify", "shards", "--type", "B", "--n", "3")[1]
    assert run(capsys, "verify", "shards", "--type", "B", "--n", "3")[1] == first


@pytest.mark.parametrize("argv", [
    ["build", "--type", "B", "--n", "9"],
    ["build", "--type", "D", "--n", "1"],
    ["build", "--n", "4", "--max-elements", "10"],
    ["verify", "nonsense"],
    ["verify", "el", "--suite", "sbd"],
    ["mobius", "--n", "3", "--lo", "321", "--hi", "1|2|3"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("shardlat: error:")


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig("build", "E", 3, max_elements=10)
    with pytest.raises(UsageError):
        RunConfig("build", "A", 3, max_elements=10, jobs=0)


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "shardlat", "gamma", "--n", "5"],
                          capture_output=True, text=True, check=True)
    assert done.stdout == "1 22 16\n"
