"""Detection and selective-prediction metrics over uncertainty scores.

Detection metrics (AUROC, AUPR, FPR@TPR) follow the convention that the
positive class is the one expected to score HIGHER (misclassified, OOD,
corrupted).  +inf scores are legal: they outrank every finite score and tie
with each other.  Retention metrics rank items from most to least certain.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import OneClassOnlyError


def _score_array(scores, *, what) -> np.ndarray:
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if np.isnan(arr).any():
        raise ValueError(f"{what} contain NaN")
    return arr


@dataclass(frozen=True, eq=False)
class DetectionSet:
    """Scores with parallel binary flags (True = positive = should score higher)."""

    scores: np.ndarray
    flags: np.ndarray

    def __init__(self, scores: Sequence[float], flags: Sequence[bool]):
        s = _score_array(scores, what="detection scores")
        f = np.asarray(flags, dtype=bool)
        if s.shape != f.shape:
            raise ValueError(f"scores ({s.shape}) and flags ({f.shape}) differ in length")
        object.__setattr__(self, "scores", s)
        object.__setattr__(self, "flags", f)

    def _split(self):
        pos = int(self.flags.sum())
        neg = int(self.flags.size - pos)
        if pos == 0 or neg == 0:
            raise OneClassOnlyError(
                f"need at least one positive and one negative, got {pos} / {neg}"
            )
        return pos, neg


@dataclass(frozen=True, eq=False)
class RetentionSet:
    """Uncertainty scores with parallel correctness flags."""

    scores: np.ndarray
    correct: np.ndarray

    def __init__(self, scores: Sequence[float], correct: Sequence[bool]):
        s = _score_array(scores, what="retention scores")
        c = np.asarray(correct, dtype=bool)
        if s.shape != c.shape:
            raise ValueError(f"scores ({s.shape}) and correct ({c.shape}) differ in length")
        if s.size == 0:
            raise ValueError("retention set is empty")
        object.__setattr__(self, "scores", s)
        object.__setattr__(self, "correct", c)


def auroc(d: DetectionSet) -> float:
    """Mann-Whitney AUROC with midrank tie handling.

    Equals the fraction of positive-negative pairs ranked correctly, counting
    ties as one half.
    """
    pos, neg = d._split()
    ranks = rankdata(d.scores, method="average")
    pos_rank_sum = ranks[d.flags].sum()
    return float((pos_rank_sum - pos * (pos + 1) / 2.0) / (pos * neg))


def _threshold_counts(d: DetectionSet):
    """Cumulative TP/FP at each distinct score threshold, descending."""
    order = np.argsort(-d.scores, kind="stable")
    sorted_scores = d.scores[order]
    sorted_flags = d.flags[order]
    tp = np.cumsum(sorted_flags)
    fp = np.cumsum(~sorted_flags)
    # keep the last index of each tie group: the counts at that group's cutoff
    # (compare neighbors for equality; np.diff would turn inf ties into NaN)
    last = np.flatnonzero(sorted_scores[1:] != sorted_scores[:-1])
    keep = np.append(last, sorted_scores.size - 1)
    return tp[keep].astype(float), fp[keep].astype(float)


def aupr(d: DetectionSet) -> float:
    """Average precision over distinct thresholds, tie groups taken whole."""
    pos, _ = d._split()
    tp, fp = _threshold_counts(d)
    recall = tp / pos
    precision = tp / (tp + fp)
    prev_recall = np.concatenate(([0.0], recall[:-1]))
    return float(((recall - prev_recall) * precision).sum())


def fpr_at_tpr(d: DetectionSet, level: float = 0.95) -> float:
    """Smallest false-positive rate among thresholds reaching TPR >= level.

    Thresholds sweep the distinct score values; `score >= t` predicts positive.
    """
    if not 0.0 < level <= 1.0:
        raise ValueError(f"level must be in (0, 1], got {level!r}")
    pos, neg = d._split()
    tp, fp = _threshold_counts(d)
    ok = tp / pos >= level
    return float((fp[ok] / neg).min())


def retention_curve(r: RetentionSet) -> np.ndarray:
    """Accuracy over the m most-certain items, for every m; an (n, 2) array.

    Items are ranked by ascending uncertainty, input order breaking ties.
    Row m-1 holds (m/n, #correct among first m / m); the last row is always
    (1.0, overall accuracy).
    """
    order = np.argsort(r.scores, kind="stable")
    kept = np.cumsum(r.correct[order])
    m = np.arange(1, r.scores.size + 1, dtype=np.float64)
    return np.column_stack((m / r.scores.size, kept / m))


def auarc(r: RetentionSet, f_min: float = 0.5) -> float:
    """Area under the accuracy-retention curve over fractions [f_min, 1].

    Trapezoidal rule over the achievable fractions m/n with m >= ceil(f_min*n);
    if the smallest included fraction exceeds f_min the curve is extended left
    at its first value.  The area is normalized by (1 - f_min).
    """
    if not 0.0 <= f_min < 1.0:
        raise ValueError(f"f_min must be in [0, 1), got {f_min!r}")
    curve = retention_curve(r)
    n = curve.shape[0]
    m_lo = max(1, math.ceil(f_min * n))
    frac = curve[m_lo - 1 :, 0]
    acc = curve[m_lo - 1 :, 1]
    if frac[0] > f_min:
        frac = np.concatenate(([f_min], frac))
        acc = np.concatenate(([acc[0]], acc))
    area = float(((frac[1:] - frac[:-1]) * (acc[1:] + acc[:-1]) / 2.0).sum())
    return area / (1.0 - f_min)
