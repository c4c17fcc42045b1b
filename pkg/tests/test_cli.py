import json
import subprocess
import sys
from pathlib import Path

import pytest

from rca.cli import main
from rca.graph import parse_instance
from rca.oracle import parse_set_cover

CORPUS = Path(__file__).parent / "corpus"
NO_INSTANCES = {"single-path"}
YES_INSTANCES = [p for p in sorted(CORPUS.glob("*.rca")) if p.stem not in NO_INSTANCES]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_yes(capsys):
    code, out, _ = run(capsys, "solve", CORPUS / "diamond-walk.rca")
    assert (code, out) == (0, "yes\n")


def test_solve_no(capsys):
    code, out, _ = run(capsys, "solve", CORPUS / "single-path.rca")
    assert (code, out) == (1, "no\n")


def test_solve_refuses_oversized_oracle_instance(capsys, tmp_path, monkeypatch):
    lines = ["rca 1", "undirected", "n 8"]
    lines += [f"e {a} {b}" for a in range(8) for b in range(a + 1, 8)]
    lines += ["s 0", "t 7", "p 4", "k 0", "kind path", "alpha none"]
    path = tmp_path / "big.rca"
    path.write_text("\n".join(lines) + "\n")
    monkeypatch.setenv("RCA_ORACLE_BUDGET", "1000")
    code, _, err = run(capsys, "solve", path)
    assert code == 2
    assert "refused" in err


def test_solve_parse_error_names_line(capsys, tmp_path):
    path = tmp_path / "bad.rca"
    path.write_text("rca 1\ndirected\nn 2\ne 1 1\n")
    code, _, err = run(capsys, "solve", path)
    assert code == 2
    assert "line 4" in err


def test_solve_json_record(capsys):
    code, out, _ = run(capsys, "solve", "--json", CORPUS / "diamond-walk.rca")
    rec = json.loads(out)
    assert code == 0
    assert set(rec) == {"decision", "sharedEdges", "routes", "solverUsed", "horizon"}
    assert rec["decision"] == "yes"
    assert rec["solverUsed"] == "k-subset-flow"
    assert rec["horizon"] == 4
    assert rec["sharedEdges"] == []
    assert sorted(rec["routes"]) == ["0 1@0 3@2", "0 2@1 3@3"]


def test_solve_json_shortcut(capsys):
    # dist(s,t) = 2 fits the budget k = 2
    code, out, _ = run(capsys, "solve", "--json", CORPUS / "detour.rca")
    rec = json.loads(out)
    assert (code, rec["solverUsed"]) == (0, "shortest-path")


@pytest.mark.parametrize("inst", YES_INSTANCES, ids=lambda p: p.stem)
def test_witness_round_trip(capsys, tmp_path, inst):
    code, out, _ = run(capsys, "solve", "--witness", inst)
    assert code == 0
    routes = tmp_path / "w.routes"
    routes.write_text(out)
    code, verdict, _ = run(capsys, "verify", inst, routes)
    assert (code, verdict) == (0, "accept\n")


def test_verify_truncated_route(capsys, tmp_path):
    routes = tmp_path / "r"
    routes.write_text("0 1 3\n0 2\n")
    code, out, _ = run(capsys, "verify", CORPUS / "diamond-walk.rca", routes)
    assert code == 1
    assert out.startswith("reject endpoint")


def test_verify_over_budget_lists_edges(capsys, tmp_path):
    routes = tmp_path / "r"
    routes.write_text("0 1 3\n0 1 3\n")
    code, out, _ = run(capsys, "verify", CORPUS / "diamond-walk.rca", routes)
    assert code == 1
    assert out.startswith("reject budget")
    assert out.rstrip().endswith(": 0 2")


def test_verify_malformed_route(capsys, tmp_path):
    routes = tmp_path / "r"
    routes.write_text("0 1 3\n0 two 3\n")
    code, _, err = run(capsys, "verify", CORPUS / "diamond-walk.rca", routes)
    assert code == 2
    assert "line 2" in err


def test_generate_setcover(capsys, tmp_path):
    out = tmp_path / "sc.rca"
    code, _, _ = run(capsys, "generate", "setcover-dag", CORPUS / "cover3.sc", "-o", out)
    assert code == 0
    sc = parse_set_cover((CORPUS / "cover3.sc").read_text())
    inst = parse_instance(out.read_text())
    assert inst.p == sc.universe + len(sc.family)
    assert inst.k == sc.budget
    names = (tmp_path / "sc.rca.names").read_text().splitlines()
    assert names[:2] == ["s 0", "t 1"]


def test_generate_pchc_path(capsys):
    code, out, _ = run(capsys, "generate", "pchc-path", CORPUS / "k4.graph")
    assert code == 0
    inst = parse_instance(out)
    assert (inst.p, inst.kind, inst.graph.n) == (3, "path", 15)


def test_generate_pchc_trail(capsys):
    code, out, _ = run(capsys, "generate", "pchc-trail", CORPUS / "k4.graph")
    inst = parse_instance(out)
    assert code == 0
    assert (inst.kind, inst.p, inst.k) == ("trail", 8, 0)
    assert len(set(inst.graph.edges)) == inst.graph.m


def test_generate_is_deterministic(capsys, tmp_path):
    outputs = []
    for i in range(2):
        out = tmp_path / f"g{i}.rca"
        run(capsys, "generate", "pchc-path-directed", CORPUS / "k4.graph", "--pad", 2, "-o", out)
        outputs.append((out.read_bytes(), Path(str(out) + ".names").read_bytes()))
    assert outputs[0] == outputs[1]


def test_generate_surfaces_precondition(capsys):
    code, _, err = run(capsys, "generate", "pchc-trail", CORPUS / "dicycle3.graph")
    assert code == 2
    assert "pchc-trail" in err


def test_generate_dp23hc(capsys, tmp_path):
    names = tmp_path / "map"
    code, out, _ = run(capsys, "generate", "dp23hc-trail", CORPUS / "dicycle3.graph", "--names", names)
    assert code == 0
    assert parse_instance(out).p == 4
    assert "x 0" in names.read_text().splitlines()


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", CORPUS / "detour.rca")
    assert code == 0
    assert out.splitlines()[0] == "minShared 2"
    assert len(out.splitlines()) == 2 + 3


def test_oracle_refusal(capsys, monkeypatch):
    monkeypatch.setenv("RCA_ORACLE_BUDGET", "2")
    code, _, err = run(capsys, "oracle", CORPUS / "path-undirected.rca")
    assert code == 2 and "refused" in err


def test_expand_single_arc(capsys, tmp_path):
    path = tmp_path / "one.rca"
    path.write_text("rca 1\ndirected\nn 2\ne 0 1\ns 0\nt 1\np 1\nk 0\nkind walk\nalpha none\n")
    code, out, _ = run(capsys, "expand", path, "--tau", 2)
    assert code == 0
    assert "n 6" in out.splitlines()
    assert sum(1 for ln in out.splitlines() if ln.startswith("e ")) == 4


def test_expand_default_horizon(capsys):
    _, out, _ = run(capsys, "expand", CORPUS / "diamond-walk.rca")
    assert "tau=4" in out.splitlines()[0]  # DAG: n


def test_expand_undirected_header(capsys):
    _, out, _ = run(capsys, "expand", CORPUS / "bounce.rca", "--tau", 2)
    assert out.startswith("# time-expanded network")
    assert "bidirected" in out


def test_module_entry_point_pipe():
    inst = str(CORPUS / "detour.rca")
    solved = subprocess.run(
        [sys.executable, "-m", "rca", "solve", "--witness", inst], capture_output=True, text=True
    )
    assert solved.returncode == 0
    checked = subprocess.run(
        [sys.executable, "-m", "rca", "verify", inst, "-"],
        input=solved.stdout,
        capture_output=True,
        text=True,
    )
    assert (checked.returncode, checked.stdout) == (0, "accept\n")
