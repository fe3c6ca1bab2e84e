import json
import subprocess
import sys

import pytest

from sqapn.cli import EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VIOLATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_verify_example(capsys):
    code, rep = run(capsys, "verify", "--m", "3", "--k", "1", "--a", "1", "--b", "1", "--c", "0")
    assert code == EXIT_OK and rep["consistent"]
    assert rep["ddt"]["max_uniformity"] == 2 and rep["image"]["kind"] == "bijective" and rep["core"] == 1
    assert rep["kernel_sizes"] == {"2": 511}
    assert rep["config"]["command"] == "verify"


def test_verify_non_example(capsys):
    code, rep = run(capsys, "verify", "--m", "3", "--k", "1", "--a", "1", "--b", "0", "--c", "0")
    assert code == EXIT_OK and rep["consistent"]
    assert rep["condition"]["has_root"] and not rep["projective"]["bijective"]


def test_verify_m4_k2(capsys):
    code, rep = run(capsys, "verify", "--m", "4", "--k", "2", "--a", "1", "--b", "0", "--c", "1")
    assert code == EXIT_OK
    assert rep["ddt"]["max_uniformity"] == 4 and rep["image"]["label"] == "5-to-1" and rep["core"] == 2


def test_usage_errors(capsys):
    assert main(["verify", "--m", "3", "--k", "3", "--a", "1"]) == EXIT_USAGE
    assert main(["verify", "--m", "3", "--k", "1", "--a", "0"]) == EXIT_USAGE
    assert main(["verify", "--m", "3", "--k", "1", "--a", "1", "--poly", "1111"]) == EXIT_USAGE
    assert main(["gold", "--n", "9", "--i", "3"]) == EXIT_USAGE
    assert main(["skew", "--m", "2", "--k", "1", "--poly", "1,1", "--op", "mul"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--m", "3"])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_resource_errors(capsys):
    assert main(["gold", "--n", "17", "--i", "1"]) == EXIT_RESOURCE
    assert main(["search", "--m", "9", "--k", "1", "--level", "full"]) == EXIT_RESOURCE
    code, rep = run(capsys, "search", "--m", "4", "--k", "2", "--level", "full", "--budget", "0")
    assert code == EXIT_RESOURCE and rep["summary"]["partial"]


def test_search_and_determinism(capsys, tmp_path):
    outs = []
    for w in ("1", "2"):
        csv, js = tmp_path / f"s{w}.csv", tmp_path / f"s{w}.json"
        assert main(["search", "--m", "3", "--k", "1", "--level", "full", "--workers", w,
                     "--csv", str(csv), "--json", str(js)]) == EXIT_OK
        outs.append((csv.read_bytes(), js.read_bytes()))
    assert outs[0] == outs[1]
    rep = json.loads(outs[0][1])
    assert rep["summary"] == {"total": 448, "condition_pass": 146, "verified_du_equals_2^d": 146,
                              "violations": 0, "partial": False}
    assert len(outs[0][0].decode().splitlines()) == 449


def test_search_first(capsys):
    code, rep = run(capsys, "search", "--m", "3", "--k", "1", "--level", "full", "--first")
    assert code == EXIT_OK and rep["found"] and rep["row"]["du"] == "2"
    code, rep = run(capsys, "search", "--m", "3", "--k", "1", "--first", "--limit", "0")
    assert code == EXIT_OK and rep == {"config": rep["config"], "found": False, "searched": 0}


def test_export_roundtrip(capsys, tmp_path):
    out = tmp_path / "f.txt"
    assert main(["export", "--m", "3", "--k", "1", "--a", "1", "--b", "1", "--c", "0", "--out", str(out)]) == EXIT_OK
    assert len(out.read_text().splitlines()) == 512
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["du"] == 2 and side["verified"] and side["image_class"] == "bijective"
    assert {"m", "k", "a", "b", "c", "reduction", "tool_version"} <= set(side)
    capsys.readouterr()
    code, rep = run(capsys, "ddt", "--in", str(out))
    assert code == EXIT_OK and rep["max_uniformity"] == 2 and rep["n"] == 9


def test_export_refuses_failing(capsys, tmp_path):
    out = tmp_path / "bad.txt"
    args = ["export", "--m", "3", "--k", "1", "--a", "1", "--b", "0", "--c", "0", "--out", str(out)]
    assert main(args) == EXIT_VIOLATION and not out.exists()
    assert main(args + ["--force"]) == EXIT_OK
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["verified"] is False and len(out.read_text().splitlines()) == 512
    capsys.readouterr()


def test_ddt_abort_and_walsh(capsys, tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gold", "--n", "6", "--i", "1", "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    code, rep = run(capsys, "ddt", "--in", str(out), "--abort-above", "0", "--workers", "2")
    assert code == EXIT_OK and rep["early_aborted"]
    code, rep = run(capsys, "walsh", "--in", str(out), "--mask", "1", "--mask", "3f")
    assert code == EXIT_OK and [m["v"] for m in rep["masks"]] == ["1", "3f"]
    for m in rep["masks"]:
        assert sum(int(v) ** 2 * c for v, c in m["values"].items()) == 1 << 12


def test_skew_ops(capsys):
    base = ["skew", "--m", "2", "--k", "1"]
    code, rep = run(capsys, *base, "--poly", "2,1", "--poly2", "2,1", "--op", "mul")
    assert code == EXIT_OK and rep["product"] == ["3", "1", "1"]
    code, rep = run(capsys, *base, "--poly", "3,1,1", "--poly2", "2,1", "--op", "divr")
    assert rep["quotient"] == ["2", "1"] and rep["remainder"] == []
    code, rep = run(capsys, *base, "--poly", "3,1,1", "--poly2", "2,1", "--op", "divl")
    assert code == EXIT_OK and len(rep["remainder"]) <= 1
    code, rep = run(capsys, *base, "--poly", "2,1", "--poly2", "3,1", "--op", "gcrd")
    assert rep["gcrd"] == ["1"]
    code, rep = run(capsys, *base, "--poly", "2,1", "--poly2", "3,1", "--op", "lclm")
    assert len(rep["lclm"]) == 3 and rep["lclm"][-1] == "1"
    code, rep = run(capsys, "skew", "--m", "3", "--k", "1", "--poly", "1,0,1,1", "--op", "lindiv")
    assert rep["right"] is None and rep["left"] is None


@pytest.mark.parametrize("m", ["3", "4"])
def test_compare(capsys, m):
    code, rep = run(capsys, "compare", "--m", m, "--k", "1")
    assert code == EXIT_OK and rep["all_equal"]
    assert rep["families"]["bartoli_stanica_literal_q"]["degenerate"]
    assert rep["families"]["li_kaleyski_2_printed"]["block_witness"] is None


def test_gold(capsys):
    code, rep = run(capsys, "gold", "--n", "9", "--i", "1", "--check-aut")
    assert code == EXIT_OK and rep["du"] == 2 and rep["automorphisms"] == {"checked": 4599, "failures": 0}


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sqapn", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("sqapn ")
