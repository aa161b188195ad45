import re

import pytest

from akem.cli import main
from conftest import DATA

TOY = DATA / "toy"


def toy_args(*extra):
    return ["--kb", str(TOY / "kb.tsv"), "--embeddings", str(TOY / "embeddings.txt"), *extra]


def test_link_matches_golden(tmp_path):
    out = tmp_path / "links.tsv"
    code = main(["link", *toy_args("--model", str(TOY / "model.bin"),
                                   "--queries", str(TOY / "queries.tsv"), "--out", str(out))])
    assert code == 0
    assert out.read_bytes() == (TOY / "expected_links.tsv").read_bytes()


def test_link_to_stdout(capsys):
    assert main(["link", *toy_args("--model", str(TOY / "model.bin"), "--queries", str(TOY / "queries.tsv"))]) == 0
    assert capsys.readouterr().out == (TOY / "expected_links.tsv").read_text(encoding="utf-8")


def test_train_reproduces_fixture_model(tmp_path, capsys):
    out = tmp_path / "model.bin"
    assert main(["train", "--labeled", str(TOY / "train.tsv"), *toy_args("--out", str(out))]) == 0
    assert out.read_bytes() == (TOY / "model.bin").read_bytes()
    assert "gold coverage 10/10" in capsys.readouterr().err


def test_global_flags_either_side_of_subcommand(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    common = toy_args("--model", str(TOY / "model.bin"), "--queries", str(TOY / "queries.tsv"))
    assert main(["--alpha", "0.9", "link", *common, "--out", str(a)]) == 0
    assert main(["link", *common, "--alpha", "0.9", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_empty_query_file(tmp_path, capsys):
    queries = tmp_path / "q.tsv"
    queries.write_text("", encoding="utf-8")
    assert main(["link", *toy_args("--model", str(TOY / "model.bin"), "--queries", str(queries))]) == 0
    assert capsys.readouterr().out == ""


def test_evaluate(tmp_path, capsys):
    pred = tmp_path / "pred.tsv"
    lines = (TOY / "expected_links.tsv").read_text(encoding="utf-8").splitlines()
    pred.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
    assert main(["evaluate", "--gold", str(TOY / "expected_links.tsv"), "--pred", str(pred), "--per-query"]) == 0
    out = capsys.readouterr().out
    assert "Precision\t1.0000" in out
    assert f"Recall\t{6 / 7:.4f}" in out
    assert "q5\t0.0000\t0.0000\t0.0000" in out


def test_features_dump(capsys):
    assert main(["features", *toy_args("--queries", str(TOY / "queries.tsv"))]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == ["query_id", "mention", "entity_id"] + [f"f{i}" for i in range(1, 10)]
    assert len(lines) > 1
    for line in lines[1:]:
        values = line.split("\t")[3:]
        assert len(values) == 9
        assert all(re.fullmatch(r"-?\d+\.\d{9}", v) for v in values)


def test_build_kb(capsys):
    assert main(["build-kb", "--kb", str(TOY / "kb.tsv")]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert all(len(r) == 3 for r in rows)
    assert ["白马银花", "e07"] in [r[:2] for r in rows]
    assert rows == sorted(rows)


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(["link", "--kb", "x"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["link", *toy_args("--model", str(TOY / "model.bin"),
                                   "--queries", str(TOY / "queries.tsv"), "--alpha", "2")]) == 1
    assert main(["link", *toy_args("--model", str(TOY / "model.bin"),
                                   "--queries", str(TOY / "queries.tsv"), "--workers", "0")]) == 1


def test_missing_kb_names_path(tmp_path, capsys):
    missing = tmp_path / "nope.tsv"
    assert main(["build-kb", "--kb", str(missing)]) == 2
    assert str(missing) in capsys.readouterr().err


@pytest.mark.parametrize("content", [b"", b"AKEMMODL garbage", (TOY / "model.bin").read_bytes()[:-1]])
def test_corrupt_model(tmp_path, capsys, content):
    model = tmp_path / "m.bin"
    model.write_bytes(content)
    code = main(["link", *toy_args("--model", str(model), "--queries", str(TOY / "queries.tsv"))])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_malformed_queries(tmp_path, capsys):
    queries = tmp_path / "q.tsv"
    queries.write_text("q1\n", encoding="utf-8")
    assert main(["link", *toy_args("--model", str(TOY / "model.bin"), "--queries", str(queries))]) == 2
    assert "1" in capsys.readouterr().err
