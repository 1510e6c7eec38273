"""Two-sample t ranking of feature columns."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RankedFeatures:
    order: np.ndarray
    t_values: np.ndarray

    def top(self, n: int) -> np.ndarray:
        return self.order[:n]


def welch_t(group_a, group_b) -> float:
    """Unequal-variance t statistic ``(mean_a - mean_b) / sqrt(s_a^2/n_a + s_b^2/n_b)``.

    Two constant groups give 0 when their means agree and +/-inf otherwise.
    """
    a = np.asarray(group_a, dtype=np.float64)
    b = np.asarray(group_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least 2 values")
    diff = a.mean() - b.mean()
    se2 = a.var(ddof=1) / a.size + b.var(ddof=1) / b.size
    if se2 == 0.0:
        return 0.0 if diff == 0.0 else float(np.copysign(np.inf, diff))
    return float(diff / np.sqrt(se2))


def welch_t_columns(x, labels) -> np.ndarray:
    """Column-wise :func:`welch_t` of class 1 against class 0."""
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    pos, neg = x[labels == 1], x[labels == 0]
    if pos.shape[0] < 2 or neg.shape[0] < 2:
        raise ValueError("ranking needs at least 2 trials of each class")
    diff = pos.mean(axis=0) - neg.mean(axis=0)
    se2 = pos.var(axis=0, ddof=1) / pos.shape[0] + neg.var(axis=0, ddof=1) / neg.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = diff / np.sqrt(se2)
    zero = se2 == 0.0
    t[zero] = np.where(diff[zero] == 0.0, 0.0, np.copysign(np.inf, diff[zero]))
    return t


def rank_features(train_features, labels) -> RankedFeatures:
    """Order features by descending ``|t|``; ties keep the lower index first."""
    labels = np.asarray(labels)
    if np.unique(labels).size < 2:
        raise ValueError("ranking needs both classes in the training labels")
    t = welch_t_columns(train_features, labels)
    order = np.argsort(-np.abs(t), kind="stable")
    return RankedFeatures(order, t)
