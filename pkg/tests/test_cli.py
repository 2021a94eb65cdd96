import json
import os

from click.testing import CliRunner

from cuttree.cli import main
from cuttree.structure import tree_from_json

from conftest import FIXDIR


def fix(name: str) -> str:
    return os.path.join(FIXDIR, name)


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_maxflow_fig1():
    r = run("maxflow", "-i", fix("fig1.json"), "-s", "g", "-t", "w")
    assert r.exit_code == 0
    assert r.output.strip() == "7"


def test_maxflow_flow_out(tmp_path):
    out = tmp_path / "flow.json"
    r = run("maxflow", "-i", fix("fig1.json"), "-s", "g", "-t", "w", "--flow-out", str(out))
    assert r.exit_code == 0
    blob = json.loads(out.read_text())
    assert blob["value"] == 7
    assert all(e["flow"] > 0 for e in blob["edges"])


def test_maxflow_unknown_vertex_exits_1():
    r = run("maxflow", "-i", fix("fig1.json"), "-s", "g", "-t", "zz")
    assert r.exit_code == 1
    assert "unknown vertex" in r.output


def test_mincut_fig2():
    r = run("mincut", "-i", fix("fig2.json"), "-s", "u", "-t", "p")
    assert r.exit_code == 0
    blob = json.loads(r.output)
    assert blob == {"capacity": 12, "side": ["q", "r", "s", "t", "u", "v", "w"]}


def test_tree_path3_json():
    r = run("tree", "-i", fix("path3.json"))
    assert r.exit_code == 0
    blob = json.loads(r.output)
    assert len(blob["nodes"]) == 3
    assert len(blob["edges"]) == 2


def test_tree_dot_format():
    r = run("--format", "dot", "tree", "-i", fix("path3.json"))
    assert r.exit_code == 0
    assert r.output.startswith("graph structure_tree {")


def test_tree_roundtrip_bytes(tmp_path):
    out = tmp_path / "tree.json"
    r = run("tree", "-i", fix("fig2.json"), "-o", str(out))
    assert r.exit_code == 0
    blob = out.read_text()
    assert tree_from_json(blob).to_json() == blob


def test_ghtree_fig2():
    r = run("ghtree", "-i", fix("fig2.json"))
    assert r.exit_code == 0
    blob = json.loads(r.output)
    assert len(blob["nodes"]) == 22
    assert all(n["image_of"] for n in blob["nodes"])


def test_strip_sep_ladder():
    r = run("strip", "sep", "-i", fix("ladder.json"), "-x", "end:left", "-y", "end:right")
    assert r.exit_code == 0
    assert r.output.strip() == "2"


def test_strip_sep_vertices():
    r = run("strip", "sep", "-i", fix("ladder.json"), "-x", "col:0/bottom", "-y", "col:0/top")
    assert r.exit_code == 0
    assert r.output.strip() == "3"


def test_strip_sep_bad_endpoint_exits_1():
    r = run("strip", "sep", "-i", fix("ladder.json"), "-x", "left", "-y", "end:right")
    assert r.exit_code == 1
    r = run("strip", "sep", "-i", fix("ladder.json"), "-x", "col:0/rail9", "-y", "end:right")
    assert r.exit_code == 1
    assert "unknown vertex" in r.output


def test_strip_tree_surrogates():
    r = run("strip", "tree", "-i", fix("ladder.json"), "-n", "2", "-w", "4")
    assert r.exit_code == 0
    blob = json.loads(r.output)
    assert len(blob["end_surrogates"]) == 2


def test_verify_small_fixture_exits_0():
    r = run("verify", "-i", fix("path3.json"))
    assert r.exit_code == 0
    lines = [ln for ln in r.output.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert lines and all(ln.startswith("PASS") for ln in lines)


def test_verify_oracle_limit_exits_1(tmp_path):
    big = {
        "vertices": [f"v{i}" for i in range(17)],
        "edges": [{"u": f"v{i}", "v": f"v{i+1}", "c": 1} for i in range(16)],
    }
    p = tmp_path / "big.json"
    p.write_text(json.dumps(big))
    r = run("verify", "-i", str(p))
    assert r.exit_code == 1
    assert "oracle limit" in r.output


def test_dimacs_input(tmp_path):
    p = tmp_path / "net.max"
    p.write_text("p max 3 2\na 1 2 4\na 2 3 2\n")
    r = run("maxflow", "-i", str(p), "-s", "1", "-t", "3")
    assert r.exit_code == 0
    assert r.output.strip() == "2"


def test_malformed_input_exits_1(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    r = run("maxflow", "-i", str(p), "-s", "a", "-t", "b")
    assert r.exit_code == 1


def test_report_writes_artifacts(tmp_path):
    outdir = tmp_path / "rep"
    r = run("report", "-i", fix("path3.json"), "-s", "a", "-t", "c", "-o", str(outdir))
    assert r.exit_code == 0
    names = sorted(os.listdir(outdir))
    assert names == ["connectivity.csv", "network.png", "tree.png", "tree_edges.csv"]
    header = (outdir / "connectivity.csv").read_text().splitlines()[0]
    assert header == "u,v,lambda"
    rows = (outdir / "tree_edges.csv").read_text().splitlines()
    assert rows[0] == "a,b,capacity,cut_side"
    assert len(rows) == 3  # two tree edges
