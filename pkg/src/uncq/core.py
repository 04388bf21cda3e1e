"""Domain types and validation shared by all other modules.

Probability vectors are plain float64 numpy arrays wrapped in :class:`ProbVec`.
After validation every vector sums to *exactly* 1.0 under correctly-rounded
summation (``math.fsum``); bitwise idempotence of :func:`normalize` depends on
that, so the normalization step nudges the largest entry until the sum is
exact.  (``np.sum`` is not the anchor: its pairwise accumulation quantizes the
reachable sums and can skip 1.0 entirely.)
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AllZeroError,
    BadLabelError,
    DimMismatchError,
    EmptySamplesError,
    NegativeMassError,
    SumNotOneError,
)
from .scoring import Rule

#: absolute tolerance on the input sum before renormalization; wide enough for
#: single-precision softmax outputs, tight enough to reject garbage
SUM_TOL = 1e-6

#: entries in [NEG_FLOOR, 0) are treated as round-off and clamped to zero
NEG_FLOOR = -1e-12


def _coerce(raw, *, what="probability vector") -> np.ndarray:
    """Return a fresh float64 1-D array with tiny negatives clamped to 0."""
    arr = np.array(raw, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise DimMismatchError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise DimMismatchError(f"{what} needs K >= 2 classes, got K={arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise NegativeMassError(f"{what} contains non-finite entries")
    if np.any(arr < NEG_FLOOR):
        raise NegativeMassError(f"{what} contains entries below {NEG_FLOOR}")
    np.maximum(arr, 0.0, out=arr)
    return arr


def _snap(arr: np.ndarray) -> np.ndarray:
    """Nudge the largest entry until ``math.fsum(arr)`` equals 1.0 exactly.

    Always convergent: the largest entry is at least 1/K, so its ulp spacing
    is fine enough to land the correctly-rounded total inside the half-ulp
    interval around 1.0.
    """
    j = int(arr.argmax())
    for _ in range(64):
        s = math.fsum(arr)
        if s == 1.0:
            return arr
        delta = 1.0 - s
        new = arr[j] + delta
        if new == arr[j]:
            new = math.nextafter(arr[j], math.inf if delta > 0 else -math.inf)
        if not (new >= 0.0 and math.isfinite(new)):
            break
        arr[j] = new
    return arr


def _normalize_vec(arr: np.ndarray) -> np.ndarray:
    """Divide a 1-D positive-mass vector by its exact sum and snap; in place."""
    arr /= math.fsum(arr)
    return _snap(arr)


def _snap_rows_k2(arr: np.ndarray) -> np.ndarray:
    """Vectorized K = 2 snap, replicating :func:`_snap` row by row bit-exactly
    (for two entries the plain row sum is already the correctly-rounded sum).
    """
    n = arr.shape[0]
    rows = np.arange(n)
    hi = arr.argmax(axis=1)
    for _ in range(64):
        s = arr.sum(axis=1)
        bad = s != 1.0
        if not bad.any():
            return arr
        r, j, delta = rows[bad], hi[bad], 1.0 - s[bad]
        cur = arr[r, j]
        new = cur + delta
        absorbed = new == cur
        if absorbed.any():
            step = np.where(delta[absorbed] > 0, np.inf, -np.inf)
            new[absorbed] = np.nextafter(cur[absorbed], step)
        ok = (new >= 0.0) & np.isfinite(new)
        arr[r[ok], j[ok]] = new[ok]
        if not ok.all():
            break
    return arr


def _normalize_rows(arr: np.ndarray) -> np.ndarray:
    """Row-wise :func:`_normalize_vec`; identical raw rows (and raw vectors
    fed to :class:`ProbVec`) come out bitwise identical.
    """
    if arr.shape[1] == 2:
        arr /= arr.sum(axis=1)[:, None]
        return _snap_rows_k2(arr)
    for row in arr:
        _normalize_vec(row)
    return arr


@dataclass(frozen=True, eq=False)
class ProbVec:
    """A categorical distribution over K >= 2 classes (a point on the simplex).

    The constructor validates: entries at or above the -1e-12 clamp floor,
    sum within ``tol`` of 1 (pass ``tol=None`` to accept any positive scale),
    then renormalizes so the entries sum to exactly 1.
    """

    probs: np.ndarray

    def __init__(self, probs: Sequence[float], *, tol: Optional[float] = SUM_TOL):
        arr = _coerce(probs)
        s = math.fsum(arr)
        if s <= 0.0:
            raise AllZeroError("probability vector has zero total mass")
        if tol is not None and abs(s - 1.0) > tol:
            raise SumNotOneError(f"entries sum to {s!r}, more than {tol} away from 1")
        _normalize_vec(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def k(self) -> int:
        return self.probs.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __len__(self) -> int:
        return self.probs.shape[0]

    def __getitem__(self, i):
        return self.probs[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, ProbVec):
            return np.array_equal(self.probs, other.probs)
        return NotImplemented

    def __repr__(self) -> str:
        return f"ProbVec({self.probs.tolist()})"


def normalize(raw: Sequence[float]) -> ProbVec:
    """Scale a raw nonnegative vector onto the simplex.

    Unlike the :class:`ProbVec` constructor this accepts any positive total
    mass, e.g. ``normalize([2, 2])`` gives ``[0.5, 0.5]``.  Idempotent and
    scale-invariant; order of entries is preserved.
    """
    return ProbVec(raw, tol=None)


@dataclass(frozen=True, eq=False)
class EnsembleItem:
    """One datapoint's predictive evidence.

    ``samples`` holds the N posterior-sample distributions as an (N, K) array
    (or anything array-like before validation).  ``single`` is the fixed
    predicting model of the (A) cells, ``reference`` the fixed truth
    approximation of the (1) cells.  Construct freely, then run
    :func:`validate_item` before handing the item to any measure.
    """

    id: str
    samples: np.ndarray
    single: Optional[ProbVec] = None
    reference: Optional[ProbVec] = None
    label: Optional[int] = None
    flag: Optional[bool] = None

    @property
    def n_samples(self) -> int:
        return np.asarray(self.samples).shape[0]

    @property
    def n_classes(self) -> int:
        return np.asarray(self.samples).shape[-1]


def _coerce_samples(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray) and samples.dtype != object:
        arr = np.array(samples, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise DimMismatchError(f"samples must form an (N, K) matrix, got shape {arr.shape}")
    else:
        try:
            rows = [np.asarray(r, dtype=np.float64) for r in samples]
        except (ValueError, TypeError) as err:
            raise DimMismatchError(f"samples are not numeric rows: {err}") from err
        if not rows:
            raise EmptySamplesError("item has no posterior samples")
        if any(r.ndim != 1 for r in rows):
            raise DimMismatchError("each sample must be a flat vector of class probabilities")
        lengths = {r.shape[0] for r in rows}
        if len(lengths) != 1:
            raise DimMismatchError(f"samples disagree on K: lengths {sorted(lengths)}")
        arr = np.vstack(rows)
    if arr.shape[0] == 0:
        raise EmptySamplesError("item has no posterior samples")
    if arr.shape[1] < 2:
        raise DimMismatchError(f"samples need K >= 2 classes, got K={arr.shape[1]}")
    return arr


def validate_item(item: EnsembleItem, *, tol: Optional[float] = SUM_TOL) -> EnsembleItem:
    """Normalize and cross-check an item; returns a validated copy.

    All sample rows and the optional single/reference vectors are snapped to
    the simplex, K-consistency is enforced across every vector, and the label
    (if any) must lie in [0, K).
    """
    arr = _coerce_samples(item.samples)
    n, k = arr.shape

    if not np.all(np.isfinite(arr)):
        raise NegativeMassError(f"item {item.id!r}: samples contain non-finite entries")
    if np.any(arr < NEG_FLOOR):
        raise NegativeMassError(f"item {item.id!r}: samples contain entries below {NEG_FLOOR}")
    np.maximum(arr, 0.0, out=arr)
    sums = arr.sum(axis=1)
    if np.any(sums <= 0.0):
        raise AllZeroError(f"item {item.id!r}: a sample row has zero total mass")
    if tol is not None and np.any(np.abs(sums - 1.0) > tol):
        row = int(np.argmax(np.abs(sums - 1.0)))
        raise SumNotOneError(
            f"item {item.id!r}: sample row {row} sums to {sums[row]!r}, "
            f"more than {tol} away from 1"
        )
    _normalize_rows(arr)
    arr.flags.writeable = False

    def _as_probvec(v, name):
        if v is None:
            return None
        pv = v if isinstance(v, ProbVec) else ProbVec(v, tol=tol)
        if pv.k != k:
            raise DimMismatchError(f"item {item.id!r}: {name} has K={pv.k}, samples have K={k}")
        return pv

    single = _as_probvec(item.single, "single")
    reference = _as_probvec(item.reference, "reference")

    label = item.label
    if label is not None:
        label = int(label)
        if not 0 <= label < k:
            raise BadLabelError(f"item {item.id!r}: label {label} outside [0, {k})")

    flag = None if item.flag is None else bool(item.flag)
    return EnsembleItem(
        id=item.id, samples=arr, single=single, reference=reference, label=label, flag=flag
    )


@dataclass(frozen=True)
class MeasureSpec:
    """Selects one cell of the uncertainty framework plus its evaluation knobs.

    quantity TU/AU/EU x predictor A/B/C x truth approximation 1/2/3, evaluated
    under ``rule``.  ``truth`` is ignored for AU (aleatoric terms do not depend
    on the truth approximation).  ``pairs`` only affects the (B/C, 3) double
    sums: "all" includes the diagonal with normalizer 1/N^2, "offdiag" excludes
    it with 1/(N(N-1)).  ``reverse`` swaps the two arguments of every
    divergence call.
    """

    quantity: str
    predictor: str
    truth: int = 2
    rule: Rule = Rule.log()
    pairs: str = "all"
    reverse: bool = False

    def __post_init__(self):
        object.__setattr__(self, "quantity", str(self.quantity).upper())
        object.__setattr__(self, "predictor", str(self.predictor).upper())
        object.__setattr__(self, "pairs", str(self.pairs).lower())
        if self.quantity not in ("TU", "AU", "EU"):
            raise ValueError(f"quantity must be TU, AU or EU, got {self.quantity!r}")
        if self.predictor not in ("A", "B", "C"):
            raise ValueError(f"predictor must be A, B or C, got {self.predictor!r}")
        if self.truth not in (1, 2, 3):
            raise ValueError(f"truth must be 1, 2 or 3, got {self.truth!r}")
        if self.pairs not in ("all", "offdiag"):
            raise ValueError(f"pairs must be 'all' or 'offdiag', got {self.pairs!r}")
        if not isinstance(self.rule, Rule):
            raise ValueError(f"rule must be a Rule, got {type(self.rule).__name__}")

    @property
    def uses_pairs(self) -> bool:
        """True when the pair convention actually matters for this cell."""
        return self.quantity in ("TU", "EU") and self.predictor in ("B", "C") and self.truth == 3


@dataclass(frozen=True)
class ScoreRecord:
    """(item id, scalar uncertainty score); the score may be +inf, never NaN."""

    id: str
    value: float

    def __post_init__(self):
        v = float(self.value)
        if np.isnan(v):
            raise ValueError(f"score for item {self.id!r} is NaN")
        if v == -math.inf:
            raise ValueError(f"score for item {self.id!r} is -inf; only +inf is legal")
        if v == 0.0:
            v = 0.0  # collapse -0.0
        object.__setattr__(self, "value", v)
