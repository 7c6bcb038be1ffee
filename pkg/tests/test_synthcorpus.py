import itertools

import numpy as np
import pytest

from scriptgmm import synthcorpus
from scriptgmm.errors import InvalidSpec
from scriptgmm.features import extract_word_features
from scriptgmm.synthcorpus import ORIENTATIONS, SynthClassSpec, default_four_class, generate

HORIZONTAL = SynthClassSpec("h", (1.0, 0.0, 0.0, 0.0))


def test_generate_deterministic():
    spec = default_four_class()[2]
    a = generate(spec, 32, 10, seed=5)
    b = generate(spec, 32, 10, seed=5)
    assert all(np.array_equal(x.pixels, y.pixels) for x, y in zip(a, b))
    c = generate(spec, 32, 10, seed=6)
    assert not all(np.array_equal(x.pixels, y.pixels) for x, y in zip(a, c))


def test_horizontal_strokes_concentrate_row_energy():
    # Horizontal strokes put ink in few rows: those rows deviate strongly while
    # most rows are blank, so row deviations are spiky (high spread) but their
    # mean stays below the column deviations, which every stroke touches.
    for img in generate(HORIZONTAL, 64, 100, seed=1):
        w = extract_word_features(img.pixels.astype(float))
        assert w.f5.mean() < w.f6.mean()
        assert w.f5.var() > w.f6.var()


def test_generate_count_zero():
    with pytest.raises(InvalidSpec):
        generate(HORIZONTAL, 32, 0, seed=0)


def test_generate_small_side():
    with pytest.raises(InvalidSpec):
        generate(HORIZONTAL, 7, 1, seed=0)


@pytest.mark.parametrize(
    "spec",
    [
        SynthClassSpec("bad", (0.5, 0.5, 0.5, 0.0)),
        SynthClassSpec("bad", (1.0, 0.0, 0.0, 0.0), strokes_per_image=(0, 3)),
        SynthClassSpec("bad", (1.0, 0.0, 0.0, 0.0), thickness=0),
        SynthClassSpec("", (1.0, 0.0, 0.0, 0.0)),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(InvalidSpec):
        generate(spec, 16, 1, seed=0)


def test_never_degenerate():
    tiny = SynthClassSpec("tiny", (0.25, 0.25, 0.25, 0.25), (1, 1), (0.05, 0.1), 1)
    heavy = SynthClassSpec("heavy", (0.25, 0.25, 0.25, 0.25), (12, 20), (1.0, 1.5), 2)
    for spec in (tiny, heavy):
        for img in generate(spec, 8, 200, seed=3):
            assert 0 < img.pixels.sum() < img.pixels.size


def test_always_degenerate_spec_raises(monkeypatch):
    monkeypatch.setattr(synthcorpus, "MAX_REJECTS", 20)
    flood = SynthClassSpec("flood", (0.25, 0.25, 0.25, 0.25), (60, 60), (1.5, 1.5), 8)
    with pytest.raises(InvalidSpec, match="fully inked"):
        generate(flood, 8, 1, seed=0)


def test_default_four_class():
    specs = default_four_class()
    assert len(specs) == 4
    assert len({s.label for s in specs}) == 4
    for s in specs:
        assert sum(s.orientation_mix) == pytest.approx(1.0, abs=1e-12)
        assert max(s.orientation_mix) == 0.7
        assert s.strokes_per_image == (5, 12) and s.stroke_length == (0.4, 0.9) and s.thickness == 2
    dominant = [ORIENTATIONS[int(np.argmax(s.orientation_mix))] for s in specs]
    assert len(set(dominant)) == 4


def test_class_separability_hook():
    feats = {
        s.label: np.array(
            [extract_word_features(i.pixels.astype(float)).vectors.ravel() for i in generate(s, 64, 100, seed=42)]
        )
        for s in default_four_class()
    }
    within = max(np.linalg.norm(v - v.mean(axis=0), axis=1).std() for v in feats.values())
    for a, b in itertools.combinations(feats, 2):
        assert np.linalg.norm(feats[a].mean(axis=0) - feats[b].mean(axis=0)) > 3 * within
