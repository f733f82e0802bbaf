import io
import subprocess
import sys

import pytest

from etcensus.cli import main, parse_orders
from etcensus.graph import from_graph6


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_orders():
    assert parse_orders("1..4,9") == [1, 2, 3, 4, 9]
    assert parse_orders("7") == [7]


@pytest.mark.parametrize("bad", ["0", "5..3", "x", ""])
def test_parse_orders_rejects(bad, capsys):
    code, _, err = run(["census", "--order", bad], capsys)
    assert code == 1


def test_census_order_10(capsys):
    code, out, _ = run(["census", "--order", "10"], capsys)
    lines = out.split()
    assert code == 0 and len(lines) == 13
    for s in lines:
        assert from_graph6(s).n == 10


def test_census_order_1(capsys):
    code, out, _ = run(["census", "--order", "1"], capsys)
    assert code == 0 and out.split() == ["@"]


def test_census_bipartite_14(capsys):
    code, out, _ = run(["census", "--bipartite-only", "--order", "14"], capsys)
    assert code == 0 and len(out.split()) == 13


def test_census_files(tmp_path, capsys):
    g6, csv, tab = tmp_path / "g.g6", tmp_path / "g.csv", tmp_path / "t.csv"
    code, _, _ = run(["census", "--order", "4..6", "--out", str(g6), "--csv", str(csv),
                      "--table", str(tab), "--workers", "1"], capsys)
    assert code == 0
    assert len(g6.read_text().split()) == 3 + 4 + 6
    rows = csv.read_text().splitlines()
    assert rows[0] == "n,graph6,connected,regular,bipartite,worthy,vt,et,at,hat,semisym,aut_order"
    assert len(rows) == 14
    assert tab.read_text().splitlines()[1:] == ["4,3,2,2,2,2,1", "5,4,2,2,2,2,2", "6,6,4,4,4,4,2"]


def test_census_deterministic(tmp_path, capsys):
    outs = []
    for w in ("1", "2"):
        code, out, _ = run(["census", "--order", "8", "--workers", w], capsys)
        outs.append(out)
    assert outs[0] == outs[1]


def test_capacity_exit_code(capsys):
    code, _, err = run(["census", "--order", "12", "--max-degree", "5"], capsys)
    assert code == 3
    assert "(6, 6)" in err


def test_missing_catalogue(tmp_path, capsys):
    code, _, err = run(["census", "--order", "3", "--catalogue", str(tmp_path / "no.txt")], capsys)
    assert code == 2
    assert "catalogue build" in err


def test_classify(capsys, monkeypatch):
    code, out, _ = run(["classify"], capsys, stdin="IsP@OkWHG\nA_\n", monkeypatch=monkeypatch)
    assert code == 0
    head, pet, k2 = out.splitlines()
    cols = head.split(",")
    pet = dict(zip(cols, pet.split(",")))
    k2 = dict(zip(cols, k2.split(",")))
    assert (pet["et"], pet["vt"], pet["at"], pet["semisym"]) == ("1", "1", "1", "0")
    assert (k2["bipartite"], k2["worthy"]) == ("1", "1")


def test_classify_empty(capsys, monkeypatch):
    code, out, _ = run(["classify"], capsys, stdin="", monkeypatch=monkeypatch)
    assert code == 0 and out == ""


def test_classify_malformed(capsys, monkeypatch):
    code, out, err = run(["classify"], capsys, stdin="A_\n!!\n", monkeypatch=monkeypatch)
    assert code == 1
    assert "line 2" in err
    assert len(out.splitlines()) == 2


def test_construct_folkman(capsys):
    code, out, _ = run(["construct", "folkman", "--k", "3"], capsys)
    assert code == 0
    assert "order: 36" in out and "valency: 12" in out
    assert from_graph6(out.splitlines()[0]).n == 36


def test_construct_gq(capsys):
    code, out, _ = run(["construct", "gq", "--q", "3", "--complement"], capsys)
    assert code == 0
    assert "order: 80" in out and "valency: 36" in out and "worthy: 1" in out


def test_construct_bad_q(capsys):
    code, _, _ = run(["construct", "gq", "--q", "4"], capsys)
    assert code == 1


def test_catalogue_build_summary(capsys, tmp_path):
    out_path = tmp_path / "c.txt"
    code, out, _ = run(["catalogue", "build", "--max-degree", "5", "--out", str(out_path)], capsys)
    assert code == 0
    for k, c in [(5, 5), (4, 5), (3, 2), (2, 1), (1, 1)]:
        assert f"degree {k}: {c} groups" in out
    code, out, _ = run(["catalogue", "verify", str(out_path), "--rebuild", "5"], capsys)
    assert code == 0 and "MISMATCH" not in out


def test_catalogue_verify_detects_tampering(capsys, tmp_path):
    path = tmp_path / "c.txt"
    run(["catalogue", "build", "--max-degree", "4", "--out", str(path)], capsys)
    text = path.read_text()
    # drop the last degree-4 entry
    cut = text.rstrip().rsplit("\n\n", 1)[0] + "\n"
    path.write_text(cut)
    code, out, _ = run(["catalogue", "verify", str(path)], capsys)
    assert code == 4


def test_verify_table_small(capsys):
    code, out, _ = run(["verify-table", "--orders", "1..5,47"], capsys)
    assert code == 0
    assert out.count("MATCH") == 5
    assert "n=47: SKIPPED" in out


def test_verify_table_mismatch(capsys, monkeypatch):
    from etcensus import published

    monkeypatch.setitem(published.PUBLISHED_ROWS, 3, (9, 9, 9, 9, 9, 9))
    code, out, _ = run(["verify-table", "--orders", "3"], capsys)
    assert code == 4 and "MISMATCH" in out


def test_oracle_command(capsys, tmp_path):
    path = tmp_path / "et.csv"
    code, out, _ = run(["oracle", "--n", "6", "--emit-et", str(path)], capsys)
    assert code == 0
    assert out.splitlines()[1] == "6,6,4,4,4,4,2"
    assert len(path.read_text().splitlines()) == 7


def test_usage_errors(capsys):
    assert run(["census"], capsys)[0] == 1
    assert run(["nonsense"], capsys)[0] == 1
    assert run(["oracle", "--n", "10"], capsys)[0] == 1


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "etcensus.cli", "classify"], input="A_\n",
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].startswith("2,A_,1,1,1,1")
