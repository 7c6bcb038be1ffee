"""Handwritten script identification with directional-energy features and per-script GMMs."""

from .classifier import EvalReport, ScriptModelSet, classify, evaluate, frames_of, sweep_orders, train
from .features import WordFeatures, extract_word_features
from .gmm import FitReport, GmmModel, avg_log_likelihood, em_fit, kmeans_init, log_density
from .imaging import BinaryImage, GrayImage, binarize, load_gray, normalize_to_square, otsu_threshold

__version__ = "0.1.0"
