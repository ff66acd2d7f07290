import io
import json

import pytest

from banglatc.cli import main
from banglatc.corpus import generate_synthetic_corpus, load_corpus, write_corpus


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    write_corpus(generate_synthetic_corpus(2, 3, 15), root)
    return root


def test_help_for_every_command(capsys):
    for cmd in ["train", "predict", "evaluate", "learning-curve", "bench", "generate-corpus"]:
        with pytest.raises(SystemExit) as exc:
            main([cmd, "--help"])
        assert exc.value.code == 0
        assert "usage" in capsys.readouterr().out


def test_train_and_predict(corpus_dir, tmp_path, capsys):
    model = tmp_path / "m.json"
    code, out, err = run(["train", corpus_dir, "--classifier", "nb", "-o", model], capsys)
    assert code == 0 and err == ""
    assert "vocabulary size" in out
    assert json.loads(model.read_text("utf-8"))["type"] == "nb"
    doc = sorted((corpus_dir / "খেলা").iterdir())[0]
    code, out, _ = run(["predict", model, doc], capsys)
    assert code == 0 and out.strip() == "খেলা"
    code, out, _ = run(["predict", model, doc, "--scores"], capsys)
    assert len(out.splitlines()) == 4


def test_predict_reads_stdin(corpus_dir, tmp_path, capsys, monkeypatch):
    model = tmp_path / "m.json"
    run(["train", corpus_dir, "--classifier", "svm", "--kernel", "linear", "-o", model], capsys)
    text = (sorted((corpus_dir / "বাণিজ্য").iterdir())[0]).read_text("utf-8")
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, out, _ = run(["predict", model], capsys)
    assert code == 0 and out.strip() == "বাণিজ্য"


def test_single_category_model(tmp_path, capsys, monkeypatch):
    root = tmp_path / "c"
    (root / "একা").mkdir(parents=True)
    (root / "একা" / "1.txt").write_text("কলম খাতা", encoding="utf-8")
    run(["train", root, "-o", tmp_path / "m.json"], capsys)
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    code, out, _ = run(["predict", tmp_path / "m.json"], capsys)
    assert code == 0 and out.strip() == "একা"


def test_errors_are_one_line(tmp_path, capsys):
    code, out, err = run(["train", tmp_path / "nowhere", "-o", tmp_path / "m.json"], capsys)
    assert code != 0 and str(tmp_path / "nowhere") in err
    assert len(err.strip().splitlines()) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("[]", encoding="utf-8")
    code, _, err = run(["predict", bad, bad], capsys)
    assert code != 0 and err.startswith("banglatc: error:")


def test_output_dir_checked_before_training(corpus_dir, tmp_path, capsys):
    code, _, err = run(["train", corpus_dir, "-o", tmp_path / "no" / "m.json"], capsys)
    assert code != 0 and "output directory" in err


def test_evaluate_json_is_byte_identical(corpus_dir, tmp_path, capsys):
    args = ["evaluate", corpus_dir, "--folds", "3", "--seed", "5", "--classifiers", "all"]
    code, out, _ = run(args + ["--json", tmp_path / "a.json"], capsys)
    assert code == 0
    assert out.count("Macro Average") == 4
    run(args + ["--json", tmp_path / "b.json", "--threads", "1"], capsys)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    doc = json.loads((tmp_path / "a.json").read_text("utf-8"))
    assert doc["folds"] == 3 and doc["seed"] == 5 and list(doc["reports"]) == ["nb", "knn", "c45", "svm"]


def test_config_precedence(corpus_dir, tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[banglatc]\nfolds = 3\nclassifiers = nb\nseed = 9\n", encoding="utf-8")
    run(["evaluate", corpus_dir, "--config", cfg, "--json", tmp_path / "a.json"], capsys)
    doc = json.loads((tmp_path / "a.json").read_text("utf-8"))
    assert (doc["folds"], doc["seed"], list(doc["reports"])) == (3, 9, ["nb"])
    run(["evaluate", corpus_dir, "--config", cfg, "--folds", "5", "--json", tmp_path / "b.json"], capsys)
    assert json.loads((tmp_path / "b.json").read_text("utf-8"))["folds"] == 5
    cfg.write_text("[banglatc]\nbogus = 1\n", encoding="utf-8")
    code, _, err = run(["evaluate", corpus_dir, "--config", cfg], capsys)
    assert code != 0 and "bogus" in err


def test_learning_curve_and_bench(corpus_dir, tmp_path, capsys):
    code, out, _ = run(["learning-curve", corpus_dir, "--classifiers", "nb", "--steps", "2",
                        "--step-size", "10"], capsys)
    assert code == 0 and out.splitlines() == ["classifier,train_size,macro_f1"] + out.splitlines()[1:]
    assert len(out.splitlines()) == 3
    code, out, _ = run(["bench", corpus_dir, "--classifiers", "nb,c45", "--repeats", "1"], capsys)
    assert code == 0 and len(out.splitlines()) == 3


def test_generate_corpus_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["generate-corpus", a, "--seed", "4", "--docs-per-category", "5"], capsys)[0] == 0
    run(["generate-corpus", b, "--seed", "4", "--docs-per-category", "5"], capsys)
    assert load_corpus(a) == load_corpus(b)
    code, _, err = run(["generate-corpus", a], capsys)
    assert code != 0 and "not empty" in err


def test_commands_leave_corpus_untouched(corpus_dir, tmp_path, capsys):
    before = {p: p.read_bytes() for p in corpus_dir.rglob("*") if p.is_file()}
    run(["evaluate", corpus_dir, "--folds", "2", "--classifiers", "nb"], capsys)
    run(["stats", corpus_dir], capsys)
    run(["vectorize", corpus_dir, "-o", tmp_path / "v.txt"], capsys)
    assert {p: p.read_bytes() for p in corpus_dir.rglob("*") if p.is_file()} == before


def test_stats_and_vectorize(corpus_dir, tmp_path, capsys):
    code, out, _ = run(["stats", corpus_dir], capsys)
    assert out.splitlines()[-1] == "total\t45"
    run(["vectorize", corpus_dir, "-o", tmp_path / "v.txt"], capsys)
    lines = (tmp_path / "v.txt").read_text("utf-8").splitlines()
    assert len(lines) == 45 and all(":" in line for line in lines)
