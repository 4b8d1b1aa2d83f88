import csv
import io
import json

import pytest

from freevertex.cli import main
from freevertex.formats import parse_certificate, parse_dimacs


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def go(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return go


def test_gen_counts(run):
    code, out, _ = run("gen", "fano", "--out", "fano.hg")
    assert code == 0 and json.loads(out) == {"kind": "fano", "vertices": 7, "edges": 7}
    code, out, _ = run("gen", "prop-family", "--s", "2", "--out", "p2.cnf")
    assert json.loads(out)["variables"] == 6 and json.loads(out)["clauses"] == 5


def test_gen_deterministic(run, tmp_path):
    run("gen", "random-regular", "--n", "20", "--k", "4", "--seed", "7", "--out", "a.hg")
    run("gen", "random-regular", "--n", "20", "--k", "4", "--seed", "7", "--out", "b.hg")
    assert (tmp_path / "a.hg").read_bytes() == (tmp_path / "b.hg").read_bytes()


def test_gen_stdout(run):
    code, out, err = run("gen", "random-nae", "--n", "6", "--m", "4", "--seed", "1")
    assert code == 0 and parse_dimacs(out).var_count == 6 and "clauses" in err


def test_gen_errors(run):
    assert run("gen", "random-nae", "--n", "5", "--m", "7")[0] == 2
    assert run("gen", "random-regular")[0] == 2
    assert run("gen", "random-nae", "--n", "2", "--m", "1")[0] == 3
    assert run("gen", "fano-complement", "--format", "cnf")[0] == 2


def test_solve_modes(run, tmp_path):
    run("gen", "fano", "--out", "fano.hg")
    run("gen", "fano-complement", "--out", "fc.hg")
    run("gen", "prop-family", "--s", "2", "--out", "p2.cnf")
    assert run("solve", "--mode", "two-color", "fano.hg")[0] == 5
    code, out, _ = run("solve", "--mode", "free-vertex", "fc.hg")
    assert code == 0 and json.loads(out)["values"].count("-") == 1
    code, out, _ = run("solve", "--mode", "nae-free", "p2.cnf")
    assert code == 0 and parse_certificate(out).free_var == 3


def test_solve_trace_goes_to_stderr(run):
    run("gen", "prop-family", "--s", "2", "--out", "p2.cnf")
    code, out, err = run("solve", "--mode", "nae-free", "p2.cnf", "--trace")
    assert code == 0 and err.startswith("STEP 0 CASE ")
    assert "STEP" not in out


def test_solve_precondition(run):
    run("gen", "fano", "--format", "cnf", "--out", "fano.cnf")
    code, _, err = run("solve", "--mode", "nae-free", "fano.cnf")
    assert code == 4 and "fewer clauses than variables" in err


def test_solve_parse_error(run, tmp_path):
    (tmp_path / "bad.hg").write_text("h 3 2\n0 1 2\n")
    assert run("solve", "--mode", "free-vertex", "bad.hg")[0] == 2


def test_fallback_oracle(run, monkeypatch):
    import freevertex.cli as cli
    from freevertex.errors import InternalInvariant

    def broken(i):
        raise InternalInvariant("forced")

    monkeypatch.setattr(cli, "solve_free", broken)
    run("gen", "prop-family", "--s", "2", "--out", "p2.cnf")
    assert run("solve", "--mode", "nae-free", "p2.cnf")[0] == 6
    code, out, err = run("solve", "--mode", "nae-free", "p2.cnf", "--fallback-oracle")
    d = json.loads(out)
    assert code == 0 and d["fallback"] is True and d["free"] == 3 and "discrepancy" in err
    code, _, _ = run("solve", "--mode", "nae-free", "p2.cnf", "--fallback-oracle", "--limit", "3")
    assert code == 6


def test_verify(run, tmp_path):
    run("gen", "fano-complement", "--out", "fc.hg")
    run("gen", "random-regular", "--n", "8", "--seed", "1", "--out", "r8.hg")
    run("solve", "--mode", "free-vertex", "fc.hg", "--out", "c.json")
    assert run("verify", "fc.hg", "c.json")[0] == 0
    d = json.loads((tmp_path / "c.json").read_text())
    d["values"][d["free"]] = "1"
    (tmp_path / "bad.json").write_text(json.dumps(d))
    code, _, err = run("verify", "fc.hg", "bad.json")
    assert code == 1 and "is colored" in err
    assert run("verify", "r8.hg", "c.json")[0] == 2


def test_oracle_queries(run, tmp_path):
    run("gen", "fano", "--format", "cnf", "--out", "fano.cnf")
    run("gen", "fano-complement", "--out", "fc.hg")
    run("gen", "prop-family", "--s", "1", "--out", "p1.cnf")
    assert json.loads(run("oracle", "fano.cnf", "sat")[1])["result"] is False
    assert json.loads(run("oracle", "fc.hg", "free-sets", "--size", "2")[1])["free_sets"] == []
    assert json.loads(run("oracle", "p1.cnf", "free-vars")[1])["free"] == [0]
    (tmp_path / "col.json").write_text('{"kind": "coloring", "values": [1,1,2,2,1,2,1], "free": null}')
    code, out, _ = run("oracle", "fc.hg", "fixed", "--coloring", "col.json")
    assert code == 0 and isinstance(json.loads(out)["fixed"], list)
    assert run("oracle", "fano.cnf", "sat", "--limit", "5")[0] == 7


def test_oracle_env_limit(run, monkeypatch):
    run("gen", "fano", "--format", "cnf", "--out", "fano.cnf")
    monkeypatch.setenv("FREEVERTEX_LIMIT", "4")
    assert run("oracle", "fano.cnf", "sat")[0] == 7


def test_bench_empty(run, tmp_path):
    (tmp_path / "c.json").write_text("[]")
    code, out, _ = run("bench", "c.json")
    assert code == 0 and out == "index,kind,params,seed,mode,size,edges,seconds,depth,cases,verified\n"


def test_bench_rows_ordered(run, tmp_path):
    spec = [{"kind": "random-regular", "params": {"n": 20}, "seeds": [0, 100]},
            {"kind": "random-lemma", "params": {"n": 10}, "seeds": [0, 5]},
            {"kind": "fano"}]
    (tmp_path / "c.json").write_text(json.dumps(spec))
    code, out, err = run("bench", "c.json", "--jobs", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 106
    assert [int(r["index"]) for r in rows] == list(range(106))
    assert all(r["verified"] == "true" for r in rows)
    assert "106 rows" in err


def test_bench_depth_linear(run, tmp_path):
    (tmp_path / "c.json").write_text(json.dumps(
        [{"kind": "prop-family", "params": {"s": s}} for s in range(1, 65)]))
    code, out, _ = run("bench", "c.json")
    depths = [int(r["depth"]) for r in csv.DictReader(io.StringIO(out))]
    assert code == 0 and depths == [2 * s - 1 for s in range(1, 65)]


def test_bench_unverified_row(run, tmp_path):
    (tmp_path / "c.json").write_text(json.dumps([{"kind": "fano", "mode": "free-vertex"}]))
    code, out, _ = run("bench", "c.json")
    assert code == 6 and out.strip().endswith("false")


def test_bench_bad_spec(run, tmp_path):
    (tmp_path / "c.json").write_text('[{"kind": "nope"}]')
    assert run("bench", "c.json")[0] == 2
