import hashlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scriptgmm import classifier
from scriptgmm.classifier import (
    ScriptModelSet,
    best_label,
    classify,
    evaluate,
    frames_of,
    report_from_predictions,
    sweep_orders,
    train,
)
from scriptgmm.errors import DimensionMismatch, EmptyScript, ModelFormatError, UnknownLabel
from scriptgmm.features import WordFeatures, extract_word_features
from scriptgmm.gmm import GmmModel
from scriptgmm.synthcorpus import SynthClassSpec, default_four_class, generate

SIDE = 16


def words_for(spec, count, seed=42, side=SIDE):
    return [extract_word_features(img.pixels.astype(float)) for img in generate(spec, side, count, seed)]


@pytest.fixture(scope="module")
def small_corpus():
    """Four directional classes at side 16: 40 train + 40 test words each."""
    train_set, test_set = {}, {}
    for spec in default_four_class():
        words = words_for(spec, 80)
        train_set[spec.label], test_set[spec.label] = words[0::2], words[1::2]
    return train_set, test_set


@pytest.fixture(scope="module")
def small_models(small_corpus):
    return train(small_corpus[0], 4, seed=42)


def point_model(center, var=1e-2):
    center = np.asarray(center, dtype=float)
    return GmmModel([1.0], [center], [np.full_like(center, var)])


# -- frames -----------------------------------------------------------------


def test_frames_shape_and_order(rng):
    vecs = rng.random((6, 9))
    frames = frames_of(WordFeatures(vecs))
    assert frames.shape == (6, 9)
    np.testing.assert_array_equal(frames[0], vecs[0])
    np.testing.assert_array_equal(frames[-1], vecs[5])
    np.testing.assert_array_equal(frames_of(WordFeatures(vecs)), frames)


def test_frames_of_zero_word():
    assert not frames_of(WordFeatures(np.zeros((6, 5)))).any()


# -- train ------------------------------------------------------------------


def test_train_bookkeeping():
    specs = default_four_class()[:2]
    corpus = {s.label: words_for(s, 100) for s in specs}
    models = train(corpus, 8, seed=1)
    assert models.labels == sorted(s.label for s in specs)
    assert all(m.m == 8 and m.dim == SIDE for m in models.models.values())
    assert models.warnings == ()


def test_train_reduces_order_to_frame_count():
    specs = default_four_class()[:2]
    corpus = {specs[0].label: words_for(specs[0], 5), specs[1].label: words_for(specs[1], 40)}
    models = train(corpus, 128, seed=1)
    assert models.models[specs[0].label].m == 30
    assert models.models[specs[1].label].m == 128
    assert len(models.warnings) == 1 and "30" in models.warnings[0]


def test_train_deterministic_bytes(small_corpus):
    digests = {hashlib.sha256(train(small_corpus[0], 4, seed=7).to_json().encode()).hexdigest() for _ in range(2)}
    assert len(digests) == 1


def test_train_errors(rng):
    good = [WordFeatures(rng.random((6, 5))) for _ in range(3)]
    with pytest.raises(EmptyScript):
        train({"a": good, "b": []}, 2, seed=0)
    with pytest.raises(DimensionMismatch):
        train({"a": good, "b": [WordFeatures(rng.random((6, 7)))] * 3}, 2, seed=0)


def test_model_set_json_roundtrip(small_models):
    back = ScriptModelSet.from_json(small_models.to_json())
    assert back.labels == small_models.labels and back.side == small_models.side
    assert all(back.models[k] == small_models.models[k] for k in back.labels)
    assert back.to_json() == small_models.to_json()


@pytest.mark.parametrize("text", ["{", '{"format_version": 9}', '{"format_version": 1, "side": 4}', "[]"])
def test_model_set_json_rejects(text):
    with pytest.raises(ModelFormatError):
        ScriptModelSet.from_json(text)


def test_model_set_needs_two_scripts():
    with pytest.raises(ValueError, match="at least 2 scripts"):
        ScriptModelSet(3, 1, {"a": point_model([0, 0, 0])})


# -- classify ---------------------------------------------------------------


def test_dominating_model_wins(rng):
    word = WordFeatures(rng.random((6, 4)))
    center = frames_of(word).mean(axis=0)
    models = ScriptModelSet(
        4, 1, {"near": point_model(center, 0.1), "far_a": point_model(center + 5), "far_b": point_model(center - 5)}
    )
    label, scores = classify(models, word)
    assert label == "near"
    assert scores["near"] > max(scores["far_a"], scores["far_b"])


def test_identical_models_tie_to_first_label(rng):
    m = point_model(np.zeros(4), 0.5)
    models = ScriptModelSet(4, 1, {"zeta": m, "alpha": m, "mid": m})
    label, scores = classify(models, WordFeatures(rng.random((6, 4))))
    assert label == "alpha"
    assert len(set(scores.values())) == 1


def test_scores_ignore_insertion_order(rng):
    a, b = point_model(np.zeros(4)), point_model(np.ones(4))
    word = WordFeatures(rng.random((6, 4)))
    r1 = classify(ScriptModelSet(4, 1, {"a": a, "b": b}), word)
    r2 = classify(ScriptModelSet(4, 1, {"b": b, "a": a}), word)
    assert r1 == r2


def test_classify_dimension_mismatch(small_models, rng):
    with pytest.raises(DimensionMismatch):
        classify(small_models, WordFeatures(rng.random((6, SIDE + 1))))


@given(
    st.dictionaries(st.text("abcxyz", min_size=1, max_size=3), st.floats(-1e6, 1e6), min_size=2, max_size=6),
    st.floats(-1e3, 1e3),
)
def test_argmax_shift_invariance(scores, c):
    shifted = {k: v + c for k, v in scores.items()}
    # shifting can merge near-ties through rounding; only compare clear winners
    ordered = sorted(scores.values(), reverse=True)
    if ordered[0] - ordered[1] > 1e-6 * max(1.0, abs(ordered[0])):
        assert best_label(shifted) == best_label(scores)


# -- evaluate ---------------------------------------------------------------


def test_perfect_predictions():
    labels = ["a", "b", "c"]
    truth = [lab for lab in labels for _ in range(4)]
    report = report_from_predictions(truth, truth, labels)
    np.testing.assert_array_equal(report.confusion, 4 * np.eye(3, dtype=int))
    assert report.per_class_accuracy == [100.0] * 3 and report.average_accuracy == 100.0


def test_constant_predictions():
    labels = ["a", "b", "c", "d"]
    truth = [lab for lab in labels for _ in range(5)]
    report = report_from_predictions(truth, ["a"] * len(truth), labels)
    assert report.per_class_accuracy == [100.0, 0.0, 0.0, 0.0]
    assert report.average_accuracy == 25.0


def test_hand_tallied_confusion():
    truth = ["x", "x", "x", "x", "y", "y", "y", "y", "z", "z", "z", "z"]
    pred = ["x", "x", "y", "x", "y", "z", "y", "y", "z", "z", "x", "z"]
    report = report_from_predictions(truth, pred, ["x", "y", "z"])
    assert report.confusion.tolist() == [[3, 1, 0], [0, 3, 1], [1, 0, 3]]
    assert report.per_class_accuracy == [75.0, 75.0, 75.0]
    assert report.average_accuracy == 75.0


def test_average_is_unweighted():
    truth = ["a"] * 2 + ["b"] * 8
    pred = ["a", "a"] + ["a"] * 4 + ["b"] * 4
    report = report_from_predictions(truth, pred, ["a", "b"])
    assert report.per_class_accuracy == [100.0, 50.0]
    assert report.average_accuracy == 75.0  # the weighted mean would be 60


def test_evaluate_conservation(small_models, small_corpus):
    test_set = small_corpus[1]
    report = evaluate(small_models, test_set)
    assert report.confusion.sum() == sum(len(v) for v in test_set.values())
    assert report.confusion.sum(axis=1).tolist() == [len(test_set[k]) for k in report.labels]


def test_evaluate_deterministic(small_corpus):
    a = evaluate(train(small_corpus[0], 4, seed=3), small_corpus[1])
    b = evaluate(train(small_corpus[0], 4, seed=3), small_corpus[1])
    assert a.to_csv() == b.to_csv()


def test_subset_consistency(small_models, small_corpus):
    full = evaluate(small_models, small_corpus[1])
    for i, label in enumerate(full.labels):
        single = evaluate(small_models, {label: small_corpus[1][label]})
        assert single.confusion.shape == (1, len(small_models.labels))
        np.testing.assert_array_equal(single.confusion[0], full.confusion[i])
        assert single.average_accuracy == full.per_class_accuracy[i]


def test_evaluate_unknown_label(small_models, small_corpus):
    with pytest.raises(UnknownLabel):
        evaluate(small_models, {"klingon": small_corpus[1]["vertical"]})


def test_csv_layout():
    report = report_from_predictions(["a", "b", "b"], ["a", "a", "b"], ["a", "b"])
    lines = report.to_csv().splitlines()
    assert lines[0] == "true_label,pred_label,count"
    assert lines[1:5] == ["a,a,1", "a,b,0", "b,a,1", "b,b,1"]
    assert lines[5] == ""
    assert lines[6:] == ["label,accuracy_percent", "a,100.00", "b,50.00", "average,75.00"]


def test_table_layout():
    table = report_from_predictions(["a", "b"], ["a", "b"], ["a", "b"]).format_table().splitlines()
    assert table[0].split()[0] == "Scripts" and table[0].endswith("Average % of Recognition")
    assert table[1].split()[-3:] == ["100.00", "100.00", "100.00"]


# -- sweep ------------------------------------------------------------------


def test_sweep_single_order_matches_run(small_corpus):
    rows = sweep_orders(*small_corpus, orders=[4], seed=42)
    report = evaluate(train(small_corpus[0], 4, seed=42), small_corpus[1])
    assert [r.accuracy for r in rows] == report.per_class_accuracy + [report.average_accuracy]
    assert [r.label for r in rows] == report.labels + ["average"]


def test_sweep_row_count(small_corpus):
    rows = sweep_orders(*small_corpus, orders=[1, 2, 3], seed=0)
    assert len(rows) == 3 * (4 + 1)
    csv_lines = classifier.sweep_to_csv(rows).splitlines()
    assert csv_lines[0] == "order,label,accuracy_percent" and len(csv_lines) == 16


def test_sweep_empty_orders(small_corpus):
    with pytest.raises(ValueError):
        sweep_orders(*small_corpus, orders=[], seed=0)


def test_separable_specs_classify_perfectly():
    sparse = SynthClassSpec("sparse", (1.0, 0.0, 0.0, 0.0), (1, 2), (0.2, 0.3), 1)
    dense = SynthClassSpec("dense", (0.0, 0.0, 1.0, 0.0), (15, 20), (0.8, 0.9), 3)
    corpus = {s.label: words_for(s, 40, side=32) for s in (sparse, dense)}
    report = evaluate(
        train({k: v[0::2] for k, v in corpus.items()}, 4, seed=42), {k: v[1::2] for k, v in corpus.items()}
    )
    assert report.average_accuracy == 100.0
