import json
import subprocess
import sys

import pytest

from helpers import any_matches, golden_rows
from sentsimp.cli import main
from sentsimp.dsl import default_rules_text

GOOD = "(S (NP (NP (DT the) (NN role)) (PP (IN of) (NP (NN X)))) (VP (VBZ matters)) (. .))"


@pytest.fixture
def rules_file(tmp_path):
    path = tmp_path / "table2.rules"
    path.write_text(default_rules_text())
    return str(path)


def _run(capsys, argv, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_jsonl_fields(tmp_path, rules_file, capsys):
    src = tmp_path / "in.ptb"
    src.write_text(GOOD + "\n" + GOOD + "\n")
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, str(src)])
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert {tuple(sorted(r)) for r in records} == {
        ("id", "isBase", "provenance", "sentence", "tokenCount", "tree")
    }
    assert [r["id"] for r in records] == [0, 0, 1, 1]
    assert records[1]["provenance"] == [{"rule": "np_pp_postmod", "path": [0]}]
    assert records[0]["isBase"] and not records[1]["isBase"]


def test_sentences_format_blocks(rules_file, capsys, monkeypatch):
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--format", "sentences", "--echo-input"],
                        GOOD + "\n" + GOOD + "\n", monkeypatch)
    assert code == 0
    blocks = out.split("\n\n")
    assert len(blocks) == 2
    assert blocks[0].splitlines() == ["> The role of X matters.", "The role of X matters.", "The role matters."]


def test_trees_format_and_no_base(rules_file, capsys, monkeypatch):
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--format", "trees", "--no-base"],
                        GOOD + "\n", monkeypatch)
    assert out == "(S (NP (DT the) (NN role)) (VP (VBZ matters)) (. .))\n"


def test_per_sentence_errors_exit_2(rules_file, capsys, monkeypatch):
    code, out, err = _run(capsys, ["simplify", "--rules", rules_file], GOOD + "\n(S (NP x\n" + GOOD + "\n",
                          monkeypatch)
    assert code == 2
    records = [json.loads(line) for line in out.splitlines()]
    assert {"id": 1, "error": records[2]["error"], "kind": "MalformedTree"} in records
    assert [r["id"] for r in records] == [0, 0, 1, 2, 2]
    assert "sentence 1" in err


def test_truncation_is_an_error(rules_file, capsys, monkeypatch):
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--max-generated", "1"], GOOD + "\n",
                        monkeypatch)
    assert code == 2
    assert json.loads(out.splitlines()[-1])["kind"] == "GenerationCapReached"


def test_missing_rules_fatal(capsys, monkeypatch):
    code, out, err = _run(capsys, ["simplify", "--rules", "missing.rules"], GOOD, monkeypatch)
    assert code == 1 and out == "" and "missing.rules" in err


def test_malformed_rules_fatal(tmp_path, capsys, monkeypatch):
    bad = tmp_path / "bad.rules"
    bad.write_text("rule r\n  match NP [ $a:NP $b:PP ]\n  keep [ $a ]\n")
    code, _, err = _run(capsys, ["simplify", "--rules", str(bad)], GOOD, monkeypatch)
    assert code == 1 and "neither kept" in err


def test_unreadable_input_fatal(rules_file, capsys):
    code, _, err = _run(capsys, ["simplify", "--rules", rules_file, "/nonexistent/in.ptb"])
    assert code == 1 and "cannot read input" in err


def test_stats_file(tmp_path, rules_file, capsys, monkeypatch):
    stats_path = tmp_path / "stats.json"
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--stats", str(stats_path)],
                        GOOD + "\n" + GOOD + "\n", monkeypatch)
    stats = json.loads(stats_path.read_text())
    assert stats["sentencesIn"] == 2 and stats["outputsTotal"] == len(out.splitlines()) == 4
    assert stats["outputsPerSentence"] == {"2": 2}
    assert stats["ruleFireCounts"] == {"np_pp_postmod": 2}
    assert stats["tokensIn"] == 12 and stats["rulesLoaded"] == 12
    assert len(stats["wallTimePerSentence"]) == 2


def test_tags_and_collapse(rules_file, capsys, monkeypatch):
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--tags", "precise", "--format", "sentences"],
                        GOOD + "\n", monkeypatch)
    assert out.splitlines() == ["The role of X matters."]
    dup = "(S (NP (NP (NN x)) (PP (IN of) (NP (NN y)))) (VP (VBZ z) (PP (IN of) (NP (NN y)))))"
    _, full, _ = _run(capsys, ["simplify", "--rules", rules_file, "--format", "sentences"], dup + "\n", monkeypatch)
    _, collapsed, _ = _run(capsys, ["simplify", "--rules", rules_file, "--format", "sentences",
                                    "--collapse-duplicates"], dup + "\n", monkeypatch)
    assert len(set(full.splitlines())) == len(collapsed.splitlines())


def test_golden_corpus_jsonl_np_replace(tmp_path, rules_file, capsys):
    src = tmp_path / "golden.ptb"
    src.write_text("\n".join(row["tree"] for row in golden_rows()) + "\n")
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, "--np-replace", str(src)])
    assert code == 0
    assert {json.loads(line)["id"] for line in out.splitlines()} == set(range(12))


def test_golden_corpus_jsonl_has_expected_sentences(tmp_path, rules_file, capsys):
    rows = golden_rows()
    src = tmp_path / "golden.ptb"
    src.write_text("\n".join(row["tree"] for row in rows) + "\n")
    code, out, _ = _run(capsys, ["simplify", "--rules", rules_file, str(src)])
    records = [json.loads(line) for line in out.splitlines()]
    for i, row in enumerate(rows):
        sentences = [r["sentence"] for r in records if r["id"] == i]
        assert all(any_matches(e, sentences) for e in row["expected"]), row["rule"]


def test_jobs_output_identical(tmp_path, rules_file, capsys):
    src = tmp_path / "golden.ptb"
    src.write_text("\n".join(row["tree"] for row in golden_rows()) + "\n")
    _, serial, _ = _run(capsys, ["simplify", "--rules", rules_file, str(src)])
    _, parallel, _ = _run(capsys, ["simplify", "--rules", rules_file, "--jobs", "2", str(src)])
    assert serial == parallel


def test_validate_rules_ok(rules_file, capsys):
    code, out, _ = _run(capsys, ["validate-rules", rules_file])
    assert code == 0 and out.splitlines()[-1] == "12/12 rules OK"


@pytest.mark.parametrize("body, needle", [
    ("  match NP [ $a:NP $b:PP ]\n  keep [ $a $c ]\n  del { $b }\n", "unbound variable $c"),
    ("  match NP [ $a:NP $b:PP ]\n  keep [ $a ]\n", "neither kept"),
])
def test_validate_rules_failures(tmp_path, capsys, body, needle):
    path = tmp_path / "bad.rules"
    path.write_text("rule bad mode=optional\n" + body)
    code, out, _ = _run(capsys, ["validate-rules", str(path)])
    assert code == 1 and needle in out and "FAIL bad" in out


def test_bench_small_and_seeded(capsys):
    code, out, _ = _run(capsys, ["bench", "--sizes", "10,20,40", "--repeats", "1", "--seed", "7"])
    assert code == 0
    assert "fitted exponent" in out and "not gated" in out
    assert [line.split()[0] for line in out.splitlines()[1:4]] == ["10", "20", "40"]


def test_bench_rejects_bad_sizes(capsys):
    with pytest.raises(SystemExit):
        main(["bench", "--sizes", "10"])


def test_module_entry_point(rules_file):
    proc = subprocess.run([sys.executable, "-m", "sentsimp", "validate-rules", rules_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_repeat_runs_byte_identical(tmp_path, rules_file):
    src = tmp_path / "golden.ptb"
    src.write_text("\n".join(row["tree"] for row in golden_rows()) + "\n")
    cmd = [sys.executable, "-m", "sentsimp", "simplify", "--rules", rules_file, "--format", "jsonl", str(src)]
    first = subprocess.run(cmd, capture_output=True).stdout
    assert first and first == subprocess.run(cmd, capture_output=True).stdout
