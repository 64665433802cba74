"""
Command Line Tests
------------------

"""

import json
import os

import pytest

import segrec.cli
from segrec.cli import build_parser, configure_logging, main
from segrec.structure import DegenerateRealization

rootpath = os.path.join(os.path.abspath(os.path.dirname(__file__)), "fixtures")


def fixture(name):
    return os.path.join(rootpath, name)


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    monkeypatch.delenv("SEGREC_LOG", raising=False)
    yield
    configure_logging({})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_lists_names(capsys):
    code, out, _ = run(capsys, "arr", "catalog")
    assert code == 0
    assert out.split() == ["generic{}".format(n) for n in range(2, 9)]


def test_unknown_catalog_entry(capsys):
    code, _, err = run(capsys, "arr", "catalog", "cyclic9")
    assert code == 2
    assert "Unknown catalog entry" in err


def test_catalog_to_reduction(tmp_path, capsys):
    lines = tmp_path / "generic3.json"
    assert main(["arr", "catalog", "generic3", "-o", str(lines)]) == 0
    code, out, _ = run(capsys, "reduce", "unit", "--wiring", str(lines))
    assert code == 0
    data = json.loads(out)
    assert len(data["vertices"]) == 75
    assert data["wiring"] == {"n": 3, "swaps": [2, 1, 2]}


def test_from_lines_and_validate(tmp_path, capsys):
    lines = tmp_path / "lines.json"
    main(["arr", "catalog", "generic3", "-o", str(lines)])
    code, out, _ = run(capsys, "arr", "from-lines", "--lines", str(lines))
    assert code == 0
    assert json.loads(out) == {"n": 3, "swaps": [2, 1, 2]}
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "swaps": [1, 1]}')
    code, out, err = run(capsys, "arr", "validate", "--wiring", str(bad))
    assert code == 1
    assert json.loads(out)["valid"] is False
    assert err


def test_equiv_with_reflection(tmp_path, capsys):
    w1, w2 = tmp_path / "w1.json", tmp_path / "w2.json"
    w1.write_text('{"n": 3, "swaps": [2, 1, 2]}')
    w2.write_text('{"n": 3, "swaps": [1, 2, 1]}')
    assert run(capsys, "arr", "equiv", str(w1), str(w2))[0] == 1
    assert run(capsys, "arr", "equiv", str(w1), str(w2), "--reflection")[0] == 0


def test_random_is_seeded(capsys):
    first = run(capsys, "arr", "random", "4", "--seed", "7")[1]
    second = run(capsys, "arr", "random", "4", "--seed", "7")[1]
    assert first == second
    assert len(json.loads(first)["lines"]) == 4


def test_verify_realization(tmp_path, capsys):
    graph = fixture("c4_graph.json")
    realization = fixture("c4_realization.json")
    code, out, _ = run(capsys, "verify", "--graph", graph, "--realization", realization)
    assert code == 0
    assert json.loads(out)["equal"] is True

    with open(realization) as f:
        data = json.load(f)
    del data["objects"][0]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", "--graph", graph, "--realization", str(broken))
    assert code == 1
    assert json.loads(out)["diff"]["missingVertices"] == ["v0"]
    assert "missing vertex v0" in err


def test_realize_verify_and_check(tmp_path, capsys):
    lines = tmp_path / "lines.json"
    reduction = tmp_path / "reduction.json"
    realization = tmp_path / "realization.json"
    main(["arr", "catalog", "generic2", "-o", str(lines)])
    assert main(["reduce", "unit", "--wiring", str(lines), "-o", str(reduction)]) == 0
    assert main(["realize", "unit", "--lines", str(lines), "-o", str(realization)]) == 0
    code, out, _ = run(capsys, "verify", "--graph", str(reduction), "--realization", str(realization))
    assert code == 0
    code, out, _ = run(capsys, "check", "lemmas", "--graph", str(reduction), "--realization", str(realization))
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_check_lemmas_needs_reduction(capsys):
    code, _, err = run(
        capsys, "check", "lemmas", "--graph", fixture("c4_graph.json"), "--realization", fixture("c4_realization.json")
    )
    assert code == 2
    assert "reduction document" in err


def test_encode_formats(capsys):
    code, out, _ = run(capsys, "encode", "unit", "--graph", fixture("k2_graph.json"))
    assert code == 0
    assert out.startswith("(set-logic QF_NRA)\n")
    assert out.count("(declare-fun ") == 8
    code, out, _ = run(capsys, "encode", "polyline", "-k", "1", "--graph", fixture("k2_graph.json"), "--format", "json")
    assert code == 0
    assert len(json.loads(out)["variables"]) == 12


def test_encode_stretch(tmp_path, capsys):
    wiring = tmp_path / "w.json"
    wiring.write_text('{"n": 3, "swaps": [2, 1, 2]}')
    code, out, _ = run(capsys, "encode", "stretch", "--wiring", str(wiring))
    assert code == 0
    assert "(declare-fun m1 () Real)" in out


def test_search_and_render(tmp_path, capsys):
    found = tmp_path / "found.json"
    code = main(["search", "unit", "--graph", fixture("c4_graph.json"), "--restarts", "4", "--iters", "2000", "-o", str(found)])
    assert code == 0
    code, out, _ = run(capsys, "verify", "--graph", fixture("c4_graph.json"), "--realization", str(found))
    assert code == 0
    code, out, _ = run(capsys, "render", "--realization", str(found), "--title", "C4")
    assert code == 0
    assert out.startswith("<?xml")
    assert "<title>C4</title>" in out


def test_search_budget_exhausted(capsys):
    code, _, err = run(capsys, "search", "unit", "--graph", fixture("k2_graph.json"), "--restarts", "1", "--iters", "1")
    assert code == 3
    assert "No certified placement" in err


def test_degenerate_realization_exits_3(tmp_path, monkeypatch, capsys):
    def degenerate(*args, **kwargs):
        raise DegenerateRealization("Important crossing at x=1 leaves the square.")

    lines = tmp_path / "lines.json"
    main(["arr", "catalog", "generic2", "-o", str(lines)])
    monkeypatch.setattr(segrec.cli, "realize_unit", degenerate)
    code, _, err = run(capsys, "realize", "unit", "--lines", str(lines))
    assert code == 3
    assert "leaves the square" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--graph", "missing.json", "--realization", "-"],
        ["reduce", "unit", "--wiring", "nowhere.json"],
        ["render", "--realization", "-", "-o", "/nonexistent/dir/out.svg"],
    ],
)
def test_bad_paths(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n "swaps": [2, 1,')
    code, _, err = run(capsys, "reduce", "unit", "--wiring", str(bad))
    assert code == 2
    assert "line 2" in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(["reduce", "polyline"])
    assert excinfo.value.code == 2


def test_log_level_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SEGREC_LOG", "info")
    code, _, err = run(capsys, "reduce", "unit", "--wiring", fixture("k2_graph.json").replace("k2_graph", "missing"))
    assert code == 2
    wiring = tmp_path / "w.json"
    wiring.write_text('{"n": 2, "swaps": [1]}')
    code, _, err = run(capsys, "reduce", "unit", "--wiring", str(wiring))
    assert code == 0
    assert "INFO segrec" in err
    monkeypatch.setenv("SEGREC_LOG", "loud")
    assert run(capsys, "arr", "catalog")[0] == 2
