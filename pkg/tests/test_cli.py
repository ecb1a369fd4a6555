"""The ``kh`` command: output formats and exit codes."""

import json

import pytest

from khcob.cli import main
from khcob.fixtures import movie_path

TREFOIL = "[(1,5,2,4),(3,1,4,6),(5,3,6,2)]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_json_single_grading(capsys):
    code, out, _ = run(capsys, "--json", "homology", "--pd", TREFOIL, "--grading", "3,7")
    assert code == 0
    rec = json.loads(out)
    assert rec["summands"] == [2] and rec["torsion"] == [2] and rec["n_plus"] == 3


def test_homology_table_from_braid(capsys):
    code, out, _ = run(capsys, "homology", "--braid", "1,1,1", "--json")
    rows = {(r["h"], r["q"]): r["summands"] for r in json.loads(out)["table"]}
    assert code == 0 and rows == {(0, 1): [0], (0, 3): [0], (2, 5): [0], (3, 7): [2], (3, 9): [0]}


def test_homology_generators_and_matrices(capsys):
    code, out, _ = run(capsys, "homology", "--knot", "3_1", "--grading", "0,3",
                       "--generators", "--dump-matrix", "--json")
    rec = json.loads(out)
    assert code == 0 and len(rec["generators"]) == 1
    assert len(rec["d_out"]) == 3 and len(rec["d_out"][0]) == 2


def test_text_output(capsys):
    code, out, _ = run(capsys, "homology", "--braid", "1,1,1", "--grading", "3,7")
    assert code == 0 and out.strip() == "Kh^{3,7} = Z/2"


def test_movie_run_kj(capsys):
    code, out, _ = run(capsys, "movie", "run", str(movie_path("6_1_disk_a")), "--kj", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["chi"] == 1 and rec["kj"]["grading"] == [0, 1]


def test_movie_run_matrix(capsys):
    code, out, _ = run(capsys, "movie", "run", "6_1_disk_a", "--matrix", "0", "-1", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["matrix"]["target"] == [0, 0] and rec["matrix"]["rows"] == 1


def test_compare_t46(capsys):
    code, out, _ = run(capsys, "--json", "compare", "t46_a0", "t46_a1")
    assert code == 0 and json.loads(out)["verdict"] == "distinct"


@pytest.mark.parametrize("name,entries", [("3_1", [1]), ("4_1", [2]), ("6_3", [])])
def test_seifert(capsys, name, entries):
    code, out, _ = run(capsys, "seifert", name, "--json")
    rec = json.loads(out)
    assert code == 0 and rec["entries"] == entries


def test_seifert_mirror(capsys):
    code, out, _ = run(capsys, "seifert", "6_1", "--mirror", "--json")
    assert code == 0 and json.loads(out)["entries"] == [2, 0]


def test_ribbon(capsys):
    code, out, _ = run(capsys, "ribbon", "6_1_disk_a", "6_1_disk_b", "--json")
    assert code == 0 and json.loads(out)["classes"] == 2


@pytest.mark.parametrize("argv,code,error", [
    (["homology", "--pd", "[(1,2,3)]"], 2, "malformed_pd"),
    (["seifert", "9_99"], 2, "unknown_fixture"),
    (["compare", "missing.json", "missing.json"], 2, "bad_input_file"),
    (["--max-generators", "4", "homology", "--braid", "1,1,1", "--grading", "0,3"], 1, "too_large"),
])
def test_errors_are_records(capsys, argv, code, error):
    got, out, err = run(capsys, *argv)
    assert got == code and out == ""
    assert json.loads(err.strip().splitlines()[-1])["error"] == error


def test_usage_error_exits_2(capsys):
    assert run(capsys, "homology", "--grading", "1")[0] == 2


def test_limit_is_restored(capsys):
    from khcob import homology

    before = homology.MAX_GENERATORS
    run(capsys, "--max-generators", "4", "homology", "--braid", "1", "--grading", "0,1")
    assert homology.MAX_GENERATORS == before


def test_bad_movie_json(tmp_path, capsys):
    p = tmp_path / "bad.movie.json"
    p.write_text("{not json")
    assert run(capsys, "movie", "run", str(p))[0] == 2
    p.write_text(json.dumps({"start": {"braid": [1, 1, 1]}, "moves": [{"kind": "r3", "at": [["c0", 0]]}]}))
    code, _, err = run(capsys, "movie", "run", str(p))
    rec = json.loads(err.strip().splitlines()[-1])
    assert code == 2 and rec["error"] == "movie_error" and rec["stage"] == 0


def test_console_script_installed():
    import shutil
    import subprocess

    exe = shutil.which("kh")
    assert exe
    res = subprocess.run([exe, "--json", "homology", "--braid", "1,1", "--grading", "0,0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["crossings"] == 2
