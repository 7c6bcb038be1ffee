"""Per-script GMMs, average-log-likelihood classification and evaluation.

A word contributes six frames (its f1..f6 vectors, in that order). Each
script's model is fit on the pooled frames of all its training words, and
a word is assigned to the script whose model gives the highest mean
log-density over its six frames. The model index is the candidate script,
the same for every frame of the word.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import gmm
from .errors import DimensionMismatch, EmptyScript, ModelFormatError, UnknownLabel
from .features import WordFeatures

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def frames_of(word: WordFeatures) -> np.ndarray:
    """The word's T = 6 frames as a ``(6, N)`` array, f1 first."""
    return word.vectors


@dataclass(frozen=True)
class ScriptModelSet:
    side: int
    order: int
    models: dict[str, gmm.GmmModel]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.models) < 2:
            raise ValueError("at least 2 scripts required")
        for label, model in self.models.items():
            if model.dim != self.side:
                raise DimensionMismatch(f"model {label!r} has dim {model.dim}, expected {self.side}")
        object.__setattr__(self, "models", {k: self.models[k] for k in sorted(self.models)})

    @property
    def labels(self) -> list[str]:
        return list(self.models)

    def to_json(self) -> str:
        doc = {
            "format_version": FORMAT_VERSION,
            "side": self.side,
            "order": self.order,
            "labels": self.labels,
            "models": [{"label": k, **m.to_dict()} for k, m in self.models.items()],
            "warnings": list(self.warnings),
        }
        return json.dumps(doc) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ScriptModelSet":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError("unknown or missing format_version")
        try:
            models = {}
            for entry in doc["models"]:
                models[entry["label"]] = gmm.GmmModel.from_dict(entry)
            return cls(int(doc["side"]), int(doc["order"]), models, tuple(doc.get("warnings", ())))
        except (KeyError, TypeError) as exc:
            raise ModelFormatError(f"malformed model set: {exc!r}") from None
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None


def train(
    corpus: Mapping[str, Sequence[WordFeatures]],
    order: int,
    seed: int,
    max_iter: int = 200,
    rel_tol: float = 1e-6,
    variance_floor: float = gmm.VARIANCE_FLOOR,
) -> ScriptModelSet:
    """Fit one GMM per script on the pooled frames of its words."""
    side = None
    models = {}
    warnings = []
    for label in sorted(corpus):
        words = corpus[label]
        if not words:
            raise EmptyScript(f"script {label!r} has no training words")
        frames = np.concatenate([frames_of(w) for w in words])
        if side is None:
            side = frames.shape[1]
        elif frames.shape[1] != side:
            raise DimensionMismatch(f"script {label!r} has dimension {frames.shape[1]}, expected {side}")
        m = order
        if frames.shape[0] < order:
            m = frames.shape[0]
            msg = f"{label}: only {frames.shape[0]} frames, order reduced from {order} to {m}"
            log.warning(msg)
            warnings.append(msg)
        init = gmm.kmeans_init(frames, m, seed, variance_floor=variance_floor)
        model, report = gmm.em_fit(frames, init, max_iter, rel_tol, variance_floor)
        log.info(
            "%s: %d frames, order %d, %d EM iterations, converged=%s, rescued=%d",
            label, frames.shape[0], m, report.iterations, report.converged, report.rescues,
        )
        models[label] = model
    return ScriptModelSet(side, order, models, tuple(warnings))


def classify(models: ScriptModelSet, word: WordFeatures) -> tuple[str, dict[str, float]]:
    frames = frames_of(word)
    if frames.shape[1] != models.side:
        raise DimensionMismatch(f"word has side {frames.shape[1]}, models expect {models.side}")
    scores = {label: gmm.avg_log_likelihood(m, frames) for label, m in models.models.items()}
    return best_label(scores), scores


def best_label(scores: Mapping[str, float]) -> str:
    """Arg-max label; exact ties go to the lexicographically first label."""
    best = None
    for label in sorted(scores):
        if best is None or scores[label] > scores[best]:
            best = label
    return best


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts (rows = true script, columns = predicted script)."""

    labels: list[str]
    predicted_labels: list[str]
    confusion: np.ndarray
    per_class_accuracy: list[float] = field(init=False)
    average_accuracy: float = field(init=False)

    def __post_init__(self):
        conf = np.asarray(self.confusion, dtype=np.int64)
        object.__setattr__(self, "confusion", conf)
        acc = []
        for i, label in enumerate(self.labels):
            total = conf[i].sum()
            hit = conf[i, self.predicted_labels.index(label)] if label in self.predicted_labels else 0
            acc.append(100.0 * hit / total if total else 0.0)
        object.__setattr__(self, "per_class_accuracy", acc)
        # unweighted mean over scripts, as in the "Average % of Recognition" column
        object.__setattr__(self, "average_accuracy", sum(acc) / len(acc) if acc else 0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["true_label", "pred_label", "count"])
        for i, t in enumerate(self.labels):
            for j, p in enumerate(self.predicted_labels):
                w.writerow([t, p, int(self.confusion[i, j])])
        buf.write("\n")
        w.writerow(["label", "accuracy_percent"])
        for label, acc in zip(self.labels, self.per_class_accuracy):
            w.writerow([label, f"{acc:.2f}"])
        w.writerow(["average", f"{self.average_accuracy:.2f}"])
        return buf.getvalue()

    def format_table(self) -> str:
        head = ["Scripts"] + self.labels + ["Average % of Recognition"]
        row = ["% of Recognition"] + [f"{a:.2f}" for a in self.per_class_accuracy] + [f"{self.average_accuracy:.2f}"]
        widths = [max(len(h), len(r)) for h, r in zip(head, row)]
        lines = ["  ".join(x.rjust(wd) for x, wd in zip(line, widths)) for line in (head, row)]
        return "\n".join(lines)


def report_from_predictions(
    true_labels: Sequence[str], predicted: Sequence[str], model_labels: Sequence[str]
) -> EvalReport:
    rows = sorted(set(true_labels))
    cols = sorted(model_labels)
    conf = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for t, p in zip(true_labels, predicted, strict=True):
        conf[rows.index(t), cols.index(p)] += 1
    return EvalReport(rows, cols, conf)


def evaluate(models: ScriptModelSet, test: Mapping[str, Sequence[WordFeatures]]) -> EvalReport:
    unknown = set(test) - set(models.labels)
    if unknown:
        raise UnknownLabel(f"test labels not in model set: {sorted(unknown)}")
    truth, preds = [], []
    for label in sorted(test):
        for word in test[label]:
            truth.append(label)
            preds.append(classify(models, word)[0])
    return report_from_predictions(truth, preds, models.labels)


@dataclass(frozen=True)
class SweepRow:
    order: int
    label: str  # script label, or "average"
    accuracy: float


def sweep_orders(
    corpus: Mapping[str, Sequence[WordFeatures]],
    test: Mapping[str, Sequence[WordFeatures]],
    orders: Sequence[int],
    seed: int,
    **fit_kwargs,
) -> list[SweepRow]:
    if not orders:
        raise ValueError("orders must be non-empty")
    rows = []
    for order in orders:
        report = evaluate(train(corpus, order, seed, **fit_kwargs), test)
        rows.extend(SweepRow(order, lab, acc) for lab, acc in zip(report.labels, report.per_class_accuracy))
        rows.append(SweepRow(order, "average", report.average_accuracy))
    return rows


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "label", "accuracy_percent"])
    for r in rows:
        w.writerow([r.order, r.label, f"{r.accuracy:.2f}"])
    return buf.getvalue()
