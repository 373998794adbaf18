from __future__ import annotations

import json
import subprocess
import sys

import pytest

from oddimm import __version__
from oddimm.cli import run
from oddimm.generators import complete_graph, from_name
from oddimm.immersion import verify_immersion, witness_from_json
from oddimm.multigraph import format_graph, parse_graph
from oddimm.oddmorph import VertexColouring, format_colouring, parse_colouring
from oddimm.twidth import parse_decomposition, verify_tree_decomposition


@pytest.fixture
def files(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def graph(name: str, spec: str) -> str:
        return write(name, format_graph(from_name(spec)))

    write.graph = graph
    write.dir = tmp_path
    return write


@pytest.fixture
def cli(capsys):
    def call(*argv: str) -> tuple[int, str, str]:
        code = run(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return call


def _identity(n: int) -> str:
    return format_colouring(VertexColouring(n, {v: v for v in range(1, n + 1)}))


def test_verify_odd_golden(cli, files):
    code, out, _ = cli("verify-odd", "--graph", files.graph("k4.txt", "K4"), "--colouring", files("id.txt", _identity(4)))
    assert (code, out) == (0, "VALID\n")


def test_verify_odd_negative_carries_reason(cli, files):
    colouring = files("c.txt", "p colouring 3 2\nc 1 1\nc 2 2\nc 3 1\n")
    code, out, _ = cli("verify-odd", "--graph", files.graph("p3.txt", "P3"), "--colouring", colouring)
    assert code == 1
    first, detail = out.splitlines()
    assert first.startswith("INVALID ")
    assert isinstance(json.loads(detail), dict)


def test_search_odd(cli, files):
    g = files.graph("p4.txt", "P4")
    out_path = str(files.dir / "f.txt")
    code, out, _ = cli("search-odd", "--graph", g, "-t", "2", "--out", out_path)
    assert code == 0 and out == ""
    assert cli("verify-odd", "--graph", g, "--colouring", out_path)[0] == 0
    code, out, _ = cli("search-odd", "--graph", files.graph("c6.txt", "C6"), "-t", "2")
    assert (code, out) == (1, "NONE\n")


def test_find_and_verify_immersion(cli, files):
    g = files.graph("c5.txt", "C5")
    code, out, _ = cli("find-immersion", "--graph", g, "--pattern-name", "K3")
    assert code == 0
    w = witness_from_json(out, from_name("C5"))
    assert verify_immersion(w)
    wpath = files("w.json", out)
    assert cli("verify-immersion", "--graph", g, "--witness", wpath)[:2] == (0, "VALID\n")
    star = files.graph("star.txt", "K1,3")
    assert cli("find-immersion", "--graph", star, "--pattern", files.graph("k3.txt", "K3"))[:2] == (1, "NONE\n")


def test_verify_immersion_rejects_wrong_host(cli, files):
    _, out, _ = cli("find-immersion", "--graph", files.graph("c5.txt", "C5"), "--pattern-name", "K3")
    wpath = files("w.json", out)
    code, out, _ = cli("verify-immersion", "--graph", files.graph("c4.txt", "C4"), "--witness", wpath)
    assert code == 1 and out.startswith("INVALID ")


def test_extract_immersion_k21(cli, files):
    g = files.graph("k21.txt", "K21")
    trace = str(files.dir / "trace.jsonl")
    code, out, _ = cli("extract-immersion", "--graph", g, "--colouring", files("id.txt", _identity(21)), "-t", "2", "--trace", trace)
    assert code == 0
    assert verify_immersion(witness_from_json(out, complete_graph(21)))
    assert (files.dir / "trace.jsonl").exists()


def test_extract_immersion_rejects_too_few_colours(cli, files):
    code, _, err = cli("extract-immersion", "--graph", files.graph("k4.txt", "K4"), "--colouring", files("id.txt", _identity(4)), "-t", "2")
    assert code == 2 and "colours" in err


def test_treewidth_and_verify_td(cli, files):
    g = files.graph("k33.txt", "K3,3")
    td = str(files.dir / "td.txt")
    code, out, _ = cli("treewidth", "--graph", g, "--out", td)
    assert (code, out) == (0, "treewidth 3\n")
    n, dec = parse_decomposition((files.dir / "td.txt").read_text())
    assert n == 6 and verify_tree_decomposition(from_name("K3,3"), dec)
    assert cli("verify-td", "--graph", g, "--td", td)[:2] == (0, 'VALID\n{"width": 3}\n')
    bad = files("bad.txt", "s td 2 2 6\nb 1 1 2\nb 2 3 4\ne 1 2\n")
    code, out, _ = cli("verify-td", "--graph", g, "--td", bad)
    assert code == 1 and out.startswith("INVALID ")


def test_treewidth_cap_exits_three(cli, files):
    assert cli("treewidth", "--graph", files.graph("k6.txt", "K6"), "--cap", "4")[0] == 3


def test_homcount_methods_agree(cli, files):
    f, g = files.graph("c6.txt", "C6"), files.graph("two.txt", "2K3")
    assert cli("homcount", "--source", f, "--target", g)[:2] == (0, "132\n")
    assert cli("homcount", "--source", f, "--target", g, "--method", "brute")[:2] == (0, "132\n")


def test_distinguish_golden(cli, files):
    g, h = files.graph("2k3.txt", "2K3"), files.graph("c6.txt", "C6")
    code, out, _ = cli("distinguish", "--g", g, "--h", h, "--family", "trees", "--max-size", "8")
    assert (code, out) == (1, "INDISTINGUISHABLE (bound=8)\n")
    code, out, _ = cli("distinguish", "--g", g, "--h", h, "--family", "all", "--max-size", "3", "--jobs", "2")
    assert code == 0
    first, detail = out.splitlines()
    assert first == "DISTINGUISHED"
    assert json.loads(detail) == {"counts": [12, 0], "edges": [[1, 2], [1, 3], [2, 3]], "n": 3}


def test_distinguish_file_list(cli, files):
    g, h = files.graph("2k3.txt", "2K3"), files.graph("c6.txt", "C6")
    member = files.graph("p2.txt", "P2")
    args = ["distinguish", "--g", g, "--h", h, "--family", "file-list", "--max-size", "6"]
    assert cli(*args, "--member", member)[0] == 1
    assert cli(*args)[0] == 2


def test_check_tw_bound(cli, files):
    code, out, _ = cli("check-tw-bound", "--graph", files.graph("k5.txt", "K5"), "--colouring", files("id.txt", _identity(5)))
    assert code == 0
    first, detail = out.splitlines()
    assert first == "HOLDS"
    assert json.loads(detail) == {"t": 5, "tight": True, "treewidth": 4}
    colouring = files("c.txt", "p colouring 3 2\nc 1 1\nc 2 2\nc 3 1\n")
    code, out, _ = cli("check-tw-bound", "--graph", files.graph("p3.txt", "P3"), "--colouring", colouring)
    assert code == 1 and out.startswith("INVALID ")


@pytest.mark.parametrize("name", ["K5", "C6", "P4", "K2,3", "2K3", "K3+P2", "E3"])
def test_generate_round_trips(cli, name):
    code, out, _ = cli("generate", name)
    assert code == 0
    assert format_graph(parse_graph(out)) == out
    assert parse_graph(out) == from_name(name)


def test_generate_unknown_name(cli):
    code, _, err = cli("generate", "Q9")
    assert code == 2 and err.startswith("error:")


# -- errors and exit codes ----------------------------------------------------------------


def test_parse_error_names_file_and_line(cli, files):
    bad = files("bad.txt", "p graph 3 2\ne 1 2\ne 1 7\n")
    code, _, err = cli("treewidth", "--graph", bad)
    assert code == 2
    assert f"{bad}:3" in err and "out of range" in err


def test_missing_file(cli, files):
    assert cli("treewidth", "--graph", str(files.dir / "nope.txt"))[0] == 2


def test_usage_errors(cli):
    with pytest.raises(SystemExit) as info:
        run(["treewidth"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 2


def test_budget_flag_and_environment(cli, files, monkeypatch):
    g = files.graph("k33.txt", "K3,3")
    assert cli("find-immersion", "--graph", g, "--pattern-name", "K4", "--budget", "3")[0] == 3
    monkeypatch.setenv("ODDMORPH_BUDGET", "3")
    assert cli("find-immersion", "--graph", g, "--pattern-name", "K4")[0] == 3
    # the flag wins over the environment
    assert cli("find-immersion", "--graph", g, "--pattern-name", "K4", "--budget", "1000000")[0] == 0
    monkeypatch.setenv("ODDMORPH_BUDGET", "lots")
    assert cli("find-immersion", "--graph", g, "--pattern-name", "K4")[0] == 2


def test_trace_lines_are_json(cli, files):
    g = files.graph("k84.txt", "K84")
    trace = files.dir / "trace.jsonl"
    code, _, _ = cli("extract-immersion", "--graph", g, "--colouring", files("id.txt", _identity(84)), "-t", "3", "--trace", str(trace))
    assert code == 0
    for line in trace.read_text().splitlines():
        assert "op" in json.loads(line)


def test_colouring_round_trip(cli, files):
    out_path = files.dir / "f.txt"
    cli("search-odd", "--graph", files.graph("k4.txt", "K4"), "-t", "4", "--out", str(out_path))
    text = out_path.read_text()
    assert format_colouring(parse_colouring(text)) == text


def test_module_entry_point_version():
    done = subprocess.run([sys.executable, "-m", "oddimm", "--version"], capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert done.stdout.strip() == f"oddimm {__version__}"
