import gzip

import pytest

from gbd.cli import run
from gbd.store import Store

H1 = "d" * 32


@pytest.fixture
def db(tmp_path, monkeypatch):
    path = tmp_path / "cli.db"
    monkeypatch.setenv("GBD_DB", str(path))
    return path


def test_no_database_path_is_usage_error(monkeypatch, capsys):
    monkeypatch.delenv("GBD_DB", raising=False)
    assert run(["get", ""]) == 1
    err = capsys.readouterr().err
    assert "--db" in err and "GBD_DB" in err


def test_unknown_command_is_usage_error(db, capsys):
    assert run(["frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_command_is_usage_error(db, capsys):
    assert run([]) == 1


def test_bad_flag_value_is_usage_error(db, capsys):
    assert run(["init", ".", "--jobs", "0"]) == 1
    assert run(["init", ".", "--jobs", "many"]) == 1


def test_help_exits_zero(db, capsys):
    assert run(["--help"]) == 0
    assert run(["get", "--help"]) == 0


def test_data_errors_exit_two(db, tmp_path, capsys):
    assert run(["hash", str(tmp_path / "missing.cnf")]) == 2
    assert run(["import", str(tmp_path / "missing.csv")]) == 2
    assert run(["get", "broken (("]) == 2
    assert run(["group", "2bad"]) == 2
    assert run(["set", "nogroup", "v", H1]) == 2


def test_db_flag_overrides_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GBD_DB", str(tmp_path / "env.db"))
    flag_db = tmp_path / "flag.db"
    assert run(["--db", str(flag_db), "group", "family"]) == 0
    assert flag_db.exists()
    assert not (tmp_path / "env.db").exists()


def test_hash_prints_digest_only(db, tmp_path, capsys):
    path = tmp_path / "one.cnf"
    path.write_bytes(b"p cnf 1 1\n1 0\n")
    assert run(["hash", str(path)]) == 0
    assert capsys.readouterr().out == "a451306aa6a2be8fd7cd44dc5f9511ae\n"


def test_full_workflow(db, tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.cnf").write_bytes(b"p cnf 3 2\n1 -3 0\n2 3 -1 0\n")
    (corpus / "a_dup.cnf").write_bytes(b"c v\np cnf 3 2\n1  -3 0\n2 3 -1 0")
    (corpus / "b.cnf.gz").write_bytes(gzip.compress(b"p cnf 2 1\n-1 -2 0\n"))

    assert run(["init", str(corpus), "--jobs", "2"]) == 0
    assert run(["bootstrap"]) == 0
    assert run(["group", "family"]) == 0

    from gbd.hashing import gbd_hash

    hashes = capsys.readouterr() and [
        row.hash for row in Store(db).query_rows("")
    ]
    assert len(hashes) == 2
    two_clause = gbd_hash(b"p cnf 3 2\n1 -3 0\n2 3 -1 0\n")
    assert two_clause in hashes
    assert run(["set", "family", "planning", two_clause]) == 0

    assert run(["get", "family = planning", "-r", "family", "clauses"]) == 0
    out = capsys.readouterr().out
    assert out == f"{two_clause} planning 2\n"

    # resolved attribute order follows the -r list
    assert run(["get", "", "-r", "variables"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 2
    assert all(len(line.split()) == 2 for line in lines)
    assert lines == sorted(lines)


def test_get_csv_format(db, capsys):
    store = Store(db)
    store.create_group("family")
    store.set_value("family", H1, "crypto")
    assert run(["--format", "csv", "get", "", "-r", "family"]) == 0
    out = capsys.readouterr().out
    assert out == f"hash,family\n{H1},crypto\n"


def test_get_output_is_deterministic(db, capsys):
    store = Store(db)
    store.create_group("tag", multi_valued=True)
    for value in ("zz", "aa", "mm"):
        store.set_value("tag", H1, value)
    outputs = []
    for _ in range(2):
        assert run(["get", "", "-r", "tag"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] == f"{H1} aa,mm,zz\n"


def test_group_listing(db, capsys):
    assert run(["group", "score", "--kind", "numeric", "--default", "0"]) == 0
    assert run(["group", "tag", "--multi"]) == 0
    capsys.readouterr()
    assert run(["group"]) == 0
    out = capsys.readouterr().out
    assert "score numeric default=0" in out
    assert "tag text multi" in out
    assert "local text multi" in out


def test_dedup_output(db, capsys):
    store = Store(db)
    store.register_instance("/a", H1)
    store.register_instance("/b", H1)
    store.register_instance("/c", "e" * 32)
    assert run(["dedup"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines() == [f"{H1} /a /b", f"{'e' * 32} /c"]
    assert "nominal=3 actual=2" in captured.err


def test_import_command(db, tmp_path, capsys):
    csv_path = tmp_path / "in.csv"
    csv_path.write_text(f"hash,family\n{H1},planning\n")
    assert run(["import", str(csv_path)]) == 0
    assert Store(db).get_values("family", H1) == ["planning"]
