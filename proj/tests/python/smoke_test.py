#!/usr/bin/env python3
"""Smoke tests for the esurf python module and the CLI binary.

Run by ctest with PYTHONPATH pointing at the build tree; argv[1] is the path
to the esurf CLI executable (optional, CLI checks are skipped without it).
"""

import os
import subprocess
import sys
import tempfile

import esurf


def test_tokenize():
    assert [t.text for t in esurf.tokenize("He left, because it rained.")] == [
        "He", "left", ",", "because", "it", "rained", ".",
    ]
    assert esurf.tokenize("") == []
    assert [t.text for t in esurf.tokenize("don't stop")] == ["don't", "stop"]


def test_char_subsequences():
    assert set(esurf.char_subsequences("to")) == {"to", "^t", "o$", "^to", "to$", "^to$"}
    assert set(esurf.char_subsequences("a")) == {"^a", "a$", "^a$"}
    assert esurf.char_subsequences("Cat") == esurf.char_subsequences("cat")


def test_corpus_round_trip():
    docs = esurf.load_pipe_marked("#doc d\nHe left | because it rained .\n")
    assert len(docs) == 1
    assert docs[0].sentences[0].gold_boundaries == {2}
    rendered = esurf.write_pipe_marked(docs)
    again = esurf.load_pipe_marked(rendered)
    assert again[0].sentences[0].gold_boundaries == {2}

    aligned = esurf.load_edu_lines(
        "#doc d\nHe left,\nbecause it rained.\n",
        "#doc d\nHe left, because it rained.\n",
    )
    assert aligned[0].sentences[0].gold_boundaries == {3}


def test_training_pipeline():
    train_docs = esurf.generate_synthetic_corpus(60, 42)
    held_docs = esurf.generate_synthetic_corpus(15, 977, "held")

    windows = esurf.extract_all_windows(train_docs, True)
    assert all(w.label is not None for w in windows[:10])
    space = esurf.build_feature_space(train_docs, windows, esurf.FilterBounds(2, 0.5))
    assert len(space) > 50

    samples = []
    for w in windows:
        s = esurf.LabeledVector()
        s.vec = esurf.vectorize(w, space)
        s.label = bool(w.label)
        samples.append(s)

    params = esurf.ForestParams()
    params.n_trees = 40
    params.seed = 42
    model = esurf.train_forest(samples, params, space)
    assert model.n_trees == 40

    segs = [esurf.segment_document(d, model) for d in held_docs]
    report = esurf.boundary_metrics(segs, held_docs)
    assert report.f1 >= 0.95, f"held-out f1 too low: {report.f1}"

    # persistence round trip
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "model.esurf")
        model.save(path)
        back = esurf.ForestModel.load(path)
        for d in held_docs[:3]:
            for w in esurf.extract_all_windows([d], False):
                v = esurf.vectorize(w, back.space)
                assert back.predict_proba(v) == model.predict_proba(v)

    # balanced evaluation path
    balanced = esurf.balanced_sample(windows, 7)
    n_pos = sum(1 for w in balanced if w.label)
    assert n_pos * 2 == len(balanced)
    preds = [(model.classify(esurf.vectorize(w, space)), bool(w.label)) for w in balanced]
    cls = esurf.classification_metrics(preds)
    assert cls.accuracy >= 0.95


def test_error_mapping():
    try:
        esurf.load_pipe_marked("#doc d\nx | \n")
    except esurf.CorpusError:
        pass
    else:
        raise AssertionError("expected CorpusError")

    try:
        esurf.ForestModel.load("/nonexistent/model.esurf")
    except esurf.ModelIoError:
        pass
    else:
        raise AssertionError("expected ModelIoError")


def test_cli_binary(cli_path):
    with tempfile.TemporaryDirectory() as tmp:
        corpus = os.path.join(tmp, "corpus.txt")
        model = os.path.join(tmp, "model.esurf")
        out_path = os.path.join(tmp, "segmented.txt")

        def run(*args):
            return subprocess.run([cli_path, *args], capture_output=True, text=True)

        assert run("gen-synthetic", "--docs", "25", "--seed", "42",
                   "--output", corpus).returncode == 0
        r = run("train", "--corpus", corpus, "--model", model, "--trees", "20",
                "--seed", "42")
        assert r.returncode == 0, r.stderr
        assert "feature space: D=" in r.stdout

        plain = os.path.join(tmp, "plain.txt")
        with open(corpus, encoding="utf-8") as f:
            text = f.read().replace(" | ", " ")
        with open(plain, "w", encoding="utf-8") as f:
            f.write(text)
        assert run("segment", "--model", model, "--input", plain,
                   "--output", out_path).returncode == 0
        with open(out_path, encoding="utf-8") as f:
            assert " | " in f.read()

        r = run("evaluate", "--model", model, "--gold", corpus)
        assert r.returncode == 0, r.stderr
        assert "f1=" in r.stdout

        # in-process runner agrees with the subprocess
        code, stdout, _ = esurf.run_cli(["evaluate", "--model", model, "--gold", corpus])
        assert code == 0
        assert stdout == r.stdout


def main():
    test_tokenize()
    test_char_subsequences()
    test_corpus_round_trip()
    test_training_pipeline()
    test_error_mapping()
    if len(sys.argv) > 1 and os.path.exists(sys.argv[1]):
        test_cli_binary(sys.argv[1])
        print("smoke ok (module + cli)")
    else:
        print("smoke ok (module only; no cli path given)")


if __name__ == "__main__":
    main()
