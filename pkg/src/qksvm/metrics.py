"""Confusion counts and the five binary classification scores.

Label 1 is the positive class. A ratio whose denominator is zero scores
0.0 and is named in ``Scores.degenerate`` instead of producing NaN.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ValidationError

METRICS = ("accuracy", "precision", "recall", "specificity", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Scores:
    accuracy: float
    precision: float
    recall: float
    specificity: float
    f1: float
    degenerate: tuple = field(default=())

    def as_dict(self):
        return {m: getattr(self, m) for m in METRICS}


def confusion(y_true, y_pred):
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape or t.ndim != 1:
        raise ValidationError(f"label arrays differ in shape: {t.shape} vs {p.shape}")
    if t.size == 0:
        raise ValidationError("cannot score an empty prediction set")
    for arr in (t, p):
        if not np.all(np.isin(arr, (0, 1))):
            raise ValidationError("labels must be 0 or 1")
    return ConfusionMatrix(
        tp=int(np.sum((t == 1) & (p == 1))),
        fp=int(np.sum((t == 0) & (p == 1))),
        tn=int(np.sum((t == 0) & (p == 0))),
        fn=int(np.sum((t == 1) & (p == 0))),
    )


def score(cm):
    if cm.total < 1:
        raise ValidationError("confusion matrix is empty")
    flags = []

    def ratio(name, num, den):
        if den == 0:
            flags.append(name)
            return 0.0
        return num / den

    accuracy = (cm.tp + cm.tn) / cm.total
    precision = ratio("precision", cm.tp, cm.tp + cm.fp)
    recall = ratio("recall", cm.tp, cm.tp + cm.fn)
    specificity = ratio("specificity", cm.tn, cm.tn + cm.fp)
    if precision + recall == 0.0:
        flags.append("f1")
        f1 = 0.0
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return Scores(accuracy, precision, recall, specificity, f1, tuple(flags))
