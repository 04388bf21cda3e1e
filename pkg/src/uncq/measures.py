"""Monte Carlo estimators for every TU/AU/EU cell, plus the identity auditor.

Cell naming follows the framework grid: predictor (A) a fixed single model,
(B) the posterior mean, (C) a model resampled per prediction; truth
approximation (1) a fixed reference, (2) the posterior mean, (3) the
posterior itself.  A single shared sample set backs both expectations.

Total uncertainty is always computed as aleatoric + epistemic, never via an
independent formula, so the additive decomposition is an identity by
construction.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Tuple

import numpy as np

from .core import EnsembleItem, MeasureSpec, ProbVec, ScoreRecord
from .errors import (
    EmptySamplesError,
    MissingReferenceError,
    MissingSingleError,
    NeedTwoSamplesError,
)
from .scoring import Rule, divergence, entropy


@dataclass(frozen=True)
class MeasureValue:
    """One evaluated cell: the spec, its value (>= 0, +inf allowed), and N."""

    spec: MeasureSpec
    value: float
    n_samples: int


def _sample_matrix(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray) and samples.dtype == np.float64:
        arr = samples
    else:
        arr = np.array([np.asarray(row, dtype=np.float64) for row in samples])
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise EmptySamplesError("need at least one sample row")
    return arr


def posterior_mean(samples) -> ProbVec:
    """Entry-wise mean of the posterior samples (the MC posterior predictive)."""
    arr = _sample_matrix(samples)
    if np.all(arr == arr[0]):
        # identical rows: their mean is the row itself, bit-exactly (the float
        # mean would drift by an ulp and break degenerate-ensemble exactness)
        return ProbVec(arr[0], tol=None)
    return ProbVec(arr.mean(axis=0), tol=None)


def _divergence_fn(rule: Rule, reverse: bool):
    if reverse:
        return lambda p, q: divergence(rule, q, p)
    return lambda p, q: divergence(rule, p, q)


def _mean_of(item: EnsembleItem, samples: np.ndarray) -> np.ndarray:
    # the mean is rule-independent; cache it on the (immutable) item
    cached = getattr(item, "_mean_cache", None)
    if cached is None:
        cached = posterior_mean(samples).probs
        object.__setattr__(item, "_mean_cache", cached)
    return cached


def _require_single(item: EnsembleItem) -> np.ndarray:
    if item.single is None:
        raise MissingSingleError(f"item {item.id!r} has no single-model distribution")
    return item.single.probs


def _require_reference(item: EnsembleItem) -> np.ndarray:
    if item.reference is None:
        raise MissingReferenceError(f"item {item.id!r} has no reference distribution")
    return item.reference.probs


def aleatoric(predictor: str, item: EnsembleItem, rule: Rule = Rule.log()) -> float:
    """Aleatoric term for predictor A, B or C; independent of the truth index.

    A: entropy of the single model.  B: entropy of the posterior mean.
    C: mean entropy over the samples.
    """
    predictor = str(predictor).upper()
    if predictor == "A":
        return float(entropy(rule, _require_single(item)))
    s = _sample_matrix(item.samples)
    if predictor == "B":
        return float(entropy(rule, _mean_of(item, s)))
    if predictor == "C":
        return float(np.mean(entropy(rule, s)))
    raise ValueError(f"predictor must be A, B or C, got {predictor!r}")


def epistemic(spec: MeasureSpec, item: EnsembleItem) -> float:
    """Epistemic term for the cell selected by ``spec`` (quantity must be EU)."""
    if spec.quantity != "EU":
        raise ValueError(f"epistemic() needs an EU spec, got quantity {spec.quantity!r}")
    if spec.predictor == "B" and spec.truth == 2:
        # the cancelled cell: D(mean, mean) is identically zero
        return 0.0

    d = _divergence_fn(spec.rule, spec.reverse)
    s = _sample_matrix(item.samples)
    n = s.shape[0]

    if spec.predictor == "A":
        w = _require_single(item)
        if spec.truth == 1:
            return float(d(w, _require_reference(item)))
        if spec.truth == 2:
            return float(d(w, _mean_of(item, s)))
        return float(np.mean(d(w[None, :], s)))

    if spec.truth == 1:
        ref = _require_reference(item)
        if spec.predictor == "B":
            return float(d(_mean_of(item, s), ref))
        return float(np.mean(d(s, ref[None, :])))

    if spec.truth == 2:
        # predictor C against the mean: the mutual-information-style term
        return float(np.mean(d(s, _mean_of(item, s)[None, :])))

    # truth = 3: expectation over candidate true models
    if spec.predictor == "B":
        return float(np.mean(d(_mean_of(item, s)[None, :], s)))
    pair = d(s[:, None, :], s[None, :, :])
    if spec.pairs == "offdiag":
        if n < 2:
            raise NeedTwoSamplesError(
                f"item {item.id!r}: pairs='offdiag' needs N >= 2, got N={n}"
            )
        return float((pair.sum() - np.trace(pair)) / (n * (n - 1)))
    return float(pair.sum() / (n * n))


@lru_cache(maxsize=512)
def _epistemic_twin(spec: MeasureSpec) -> MeasureSpec:
    return MeasureSpec(
        quantity="EU",
        predictor=spec.predictor,
        truth=spec.truth,
        rule=spec.rule,
        pairs=spec.pairs,
        reverse=spec.reverse,
    )


def total_uncertainty(spec: MeasureSpec, item: EnsembleItem) -> float:
    """Total term: aleatoric(predictor) + epistemic(same cell), as that sum."""
    if spec.quantity != "TU":
        raise ValueError(f"total_uncertainty() needs a TU spec, got {spec.quantity!r}")
    au = aleatoric(spec.predictor, item, spec.rule)
    eu = epistemic(_epistemic_twin(spec), item)
    return au + eu


def measure(spec: MeasureSpec, item: EnsembleItem) -> MeasureValue:
    """Evaluate one cell of the framework on one item."""
    if spec.quantity == "AU":
        value = aleatoric(spec.predictor, item, spec.rule)
    elif spec.quantity == "EU":
        value = epistemic(spec, item)
    else:
        value = total_uncertainty(spec, item)
    return MeasureValue(spec=spec, value=value, n_samples=item.n_samples)


def score_dataset(spec: MeasureSpec, items: Iterable[EnsembleItem]) -> List[ScoreRecord]:
    """Score every item under one spec; order preserved, first error aborts."""
    records = []
    for item in items:
        try:
            records.append(ScoreRecord(id=item.id, value=measure(spec, item).value))
        except Exception as err:
            if f"{item.id!r}" in str(err):
                raise
            raise type(err)(f"item {item.id!r}: {err}") from err
    return records


@dataclass(frozen=True)
class IdentityCheck:
    """One audited identity: |lhs - rhs| against tol * max(1, |lhs|, |rhs|)."""

    name: str
    lhs: float
    rhs: float
    abs_err: float
    passed: bool
    applicable: bool = True


@dataclass(frozen=True)
class AuditReport:
    checks: Tuple[IdentityCheck, ...]
    passed: bool

    def by_name(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _abs_err(lhs: float, rhs: float) -> float:
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if lhs == rhs else math.inf
    return abs(lhs - rhs)


def _eq_check(name: str, lhs: float, rhs: float, tol: float) -> IdentityCheck:
    if math.isinf(lhs) or math.isinf(rhs):
        passed = lhs == rhs
        return IdentityCheck(
            name=name, lhs=lhs, rhs=rhs, abs_err=0.0 if passed else math.inf, passed=passed
        )
    err = abs(lhs - rhs)
    return IdentityCheck(
        name=name, lhs=lhs, rhs=rhs, abs_err=err, passed=err <= tol * max(1.0, abs(lhs), abs(rhs))
    )


def _na_check(name: str) -> IdentityCheck:
    return IdentityCheck(
        name=name, lhs=math.nan, rhs=math.nan, abs_err=math.nan, passed=True, applicable=False
    )


def audit_identities(item: EnsembleItem, tol: float = 1e-9) -> AuditReport:
    """Machine-check the proven relationships between cells on one item.

    Runs under the log rule with the shared sample set.  Identities needing a
    reference or single model are marked not-applicable when the item lacks
    them.  Equality checks use relative tolerance ``tol`` with floor 1;
    matching infinities compare equal.
    """
    n = item.n_samples
    if n < 2:
        raise NeedTwoSamplesError(f"item {item.id!r}: the identity audit needs N >= 2")
    rule = Rule.log()
    has_ref = item.reference is not None
    has_single = item.single is not None

    def eu(predictor, truth, pairs="all"):
        return epistemic(
            MeasureSpec(quantity="EU", predictor=predictor, truth=truth, rule=rule, pairs=pairs),
            item,
        )

    def tu(predictor, truth, pairs="all"):
        return total_uncertainty(
            MeasureSpec(quantity="TU", predictor=predictor, truth=truth, rule=rule, pairs=pairs),
            item,
        )

    au_b = aleatoric("B", item, rule)
    au_c = aleatoric("C", item, rule)
    eu_c2 = eu("C", 2)
    eu_b3 = eu("B", 3)
    eu_c3_all = eu("C", 3, "all")
    eu_c3_off = eu("C", 3, "offdiag")

    checks: List[IdentityCheck] = []

    if has_ref:
        checks.append(_eq_check("eu_c1 = eu_c2 + eu_b1", eu("C", 1), eu_c2 + eu("B", 1), tol))
    else:
        checks.append(_na_check("eu_c1 = eu_c2 + eu_b1"))

    checks.append(_eq_check("eu_c3[all] = eu_c2 + eu_b3", eu_c3_all, eu_c2 + eu_b3, tol))
    checks.append(
        _eq_check(
            "eu_c3[offdiag] = N/(N-1) (eu_c2 + eu_b3)",
            eu_c3_off,
            (n / (n - 1)) * (eu_c2 + eu_b3),
            tol,
        )
    )

    if has_ref:
        checks.append(_eq_check("tu_b1 = tu_c1", tu("B", 1), tu("C", 1), tol))
    else:
        checks.append(_na_check("tu_b1 = tu_c1"))
    checks.append(_eq_check("tu_b2 = tu_c2", tu("B", 2), tu("C", 2), tol))
    checks.append(_eq_check("tu_b3 = tu_c3[all]", tu("B", 3), tu("C", 3, "all"), tol))

    # AU(B) upper-bounds AU(C); the violation magnitude is the recorded error
    gap = max(0.0, au_c - au_b)
    checks.append(
        IdentityCheck(
            name="au_b >= au_c",
            lhs=au_b,
            rhs=au_c,
            abs_err=gap,
            passed=gap <= tol * max(1.0, abs(au_b), abs(au_c)),
        )
    )

    checks.append(_eq_check("eu_b2 = 0", eu("B", 2), 0.0, tol))

    # per-cell bitwise decomposition: TU must equal AU + EU exactly
    cells = [("B", 2), ("B", 3), ("C", 2), ("C", 3)]
    if has_ref:
        cells = [("B", 1), ("C", 1)] + cells
    if has_single:
        cells = [("A", 2), ("A", 3)] + cells
        if has_ref:
            cells.insert(0, ("A", 1))
    for predictor, truth in cells:
        au = aleatoric(predictor, item, rule)
        e = eu(predictor, truth)
        t = tu(predictor, truth)
        exact = t == au + e
        checks.append(
            IdentityCheck(
                name=f"tu = au + eu [{predictor}{truth}]",
                lhs=t,
                rhs=au + e,
                abs_err=0.0 if exact else _abs_err(t, au + e),
                passed=exact,
            )
        )

    return AuditReport(checks=tuple(checks), passed=all(c.passed for c in checks))
