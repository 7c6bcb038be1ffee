"""In-memory synthetic corpus shared by the experiment scripts."""

from scriptgmm.features import extract_word_features
from scriptgmm.synthcorpus import default_four_class, generate


def synthetic_split(side=64, per_class=200, seed=42):
    train, test = {}, {}
    for spec in default_four_class():
        words = [extract_word_features(img.pixels.astype(float)) for img in generate(spec, side, per_class, seed)]
        train[spec.label], test[spec.label] = words[0::2], words[1::2]
    return train, test
