"""Per-rule uncertainty primitives: entropy, divergence, and their sum.

Each scoring rule contributes an entropy-like term H and a divergence-like
term D; the total (cross-entropy-like) term is always computed as H + D so
that the additive decomposition holds bit-exactly by construction.

All log-based quantities are in nats.  Conventions: 0*ln(0) = 0, and a
divergence where p puts mass outside the support of q returns +inf (a legal
value, not an error).  Inputs may carry leading batch axes; the class axis is
always the last one.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import entr, rel_entr

from .errors import DimMismatchError

_KINDS = ("log", "zero_one", "brier", "spherical", "renyi")


@dataclass(frozen=True)
class Rule:
    """A scoring rule: log, zero_one, brier, spherical, or renyi(alpha >= 0).

    ``renyi(1)`` dispatches to the Shannon/KL code path instead of evaluating
    the near-singular general formula.
    """

    kind: str
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}, expected one of {_KINDS}")
        if self.kind == "renyi":
            if self.alpha is None:
                raise ValueError("renyi rule needs an alpha")
            a = float(self.alpha)
            if math.isnan(a) or a < 0.0:
                raise ValueError(f"renyi alpha must be >= 0 (or inf), got {self.alpha!r}")
            object.__setattr__(self, "alpha", a)
        elif self.alpha is not None:
            raise ValueError(f"rule {self.kind!r} takes no alpha")

    @classmethod
    def log(cls) -> "Rule":
        return cls("log")

    @classmethod
    def zero_one(cls) -> "Rule":
        return cls("zero_one")

    @classmethod
    def brier(cls) -> "Rule":
        return cls("brier")

    @classmethod
    def spherical(cls) -> "Rule":
        return cls("spherical")

    @classmethod
    def renyi(cls, alpha: float) -> "Rule":
        return cls("renyi", alpha)

    def __str__(self) -> str:
        if self.kind == "renyi":
            return f"renyi({self.alpha:g})"
        return self.kind


def rule_from_name(name: str, alpha: Optional[float] = None) -> Rule:
    """Build a Rule from a CLI-style name ('zero-one' and 'zero_one' both work)."""
    kind = name.strip().lower().replace("-", "_")
    if kind == "renyi":
        if alpha is None:
            raise ValueError("rule 'renyi' requires --alpha")
        return Rule.renyi(alpha)
    return Rule(kind)


def _finish(out: np.ndarray) -> Union[float, np.ndarray]:
    """Clamp round-off below zero and collapse 0-d results to a float."""
    out = np.maximum(out, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def _osum(terms: np.ndarray) -> np.ndarray:
    """Order-independent sum over the class axis.

    Summing in sorted order makes every entropy/divergence bit-exactly
    invariant under class permutations (plain float addition is not).
    """
    return np.sort(terms, axis=-1).sum(axis=-1)


def _entropy_log(p):
    return _osum(entr(p))


def _entropy_renyi(p, alpha):
    k = p.shape[-1]
    if alpha == 1.0:
        return _entropy_log(p)
    if alpha == 0.0:
        # Hartley / max-entropy: cardinality of the event space
        return np.full(p.shape[:-1], math.log(k))
    if math.isinf(alpha):
        return -np.log(p.max(axis=-1))
    return np.log(_osum(p**alpha)) / (1.0 - alpha)


def entropy(rule: Rule, p) -> Union[float, np.ndarray]:
    """Entropy-like term of ``rule`` at distribution(s) ``p``; always >= 0.

    log: -sum p ln p.  zero_one: 1 - max p.  brier: 1 - ||p||^2.
    spherical: 1 - ||p||.  renyi: H_alpha with the closed forms at
    alpha in {0, 1, inf} and (1/(1-alpha)) ln sum p^alpha otherwise.
    """
    p = np.asarray(p, dtype=np.float64)
    if rule.kind == "log":
        out = _entropy_log(p)
    elif rule.kind == "zero_one":
        out = 1.0 - p.max(axis=-1)
    elif rule.kind == "brier":
        out = 1.0 - _osum(p * p)
    elif rule.kind == "spherical":
        out = 1.0 - np.sqrt(_osum(p * p))
    else:
        out = _entropy_renyi(p, rule.alpha)
    return _finish(out)


def _divergence_log(p, q):
    # rel_entr handles 0 ln 0 = 0 and p>0, q=0 -> +inf elementwise
    return _osum(rel_entr(p, q))


def _divergence_zero_one(p, q):
    p, q = np.broadcast_arrays(p, q)
    pick = np.take_along_axis(p, q.argmax(axis=-1)[..., None], axis=-1)[..., 0]
    return p.max(axis=-1) - pick


def _divergence_spherical(p, q):
    qnorm = np.sqrt(_osum(q * q))
    return np.sqrt(_osum(p * p)) - _osum(p * q) / qnorm


def _divergence_renyi(p, q, alpha):
    if alpha == 1.0:
        return _divergence_log(p, q)
    support = p > 0
    if alpha == 0.0:
        return -np.log(_osum(np.where(support, q, 0.0)))
    # work in log space: direct powers break on subnormal inputs (p**a
    # underflows against q**(1-a) overflowing, giving 0 * inf = nan) and the
    # alpha = inf ratio p/q can overflow to inf while ln(p/q) is finite
    log_p = np.log(p)
    log_q = np.log(q)
    if math.isinf(alpha):
        gap = np.where(support, log_p - log_q, -np.inf)
        return gap.max(axis=-1)
    # log-sum-exp with a max shift, summing in sorted order so the result
    # stays permutation-exact; q = 0 on the support of p drives the row to
    # +inf for alpha > 1 and drops the term for alpha < 1
    t = np.where(support, alpha * log_p + (1.0 - alpha) * log_q, -np.inf)
    peak = t.max(axis=-1)
    safe_peak = np.where(np.isfinite(peak), peak, 0.0)
    lse = safe_peak + np.log(_osum(np.exp(t - safe_peak[..., None])))
    return lse / (alpha - 1.0)


def divergence(rule: Rule, p, q) -> Union[float, np.ndarray]:
    """Divergence-like term of ``rule`` from p to q; >= 0, +inf allowed.

    log: KL(p || q).  zero_one: max p - p[argmax q] (argmax ties break to the
    lowest class index).  brier: ||p - q||^2.  spherical: ||p|| - <p,q>/||q||.
    renyi: D_alpha with closed forms at alpha in {0, 1, inf} and
    (1/(alpha-1)) ln sum p^alpha q^(1-alpha) otherwise.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape[-1] != q.shape[-1]:
        raise DimMismatchError(f"p has K={p.shape[-1]} classes, q has K={q.shape[-1]}")
    # bitwise-equal argument pairs have divergence 0 by definition under every
    # rule; masking them out keeps that exact where rounding would not
    if p.shape == q.shape:
        equal = (p == q).all(axis=-1)
        out_shape = p.shape[:-1]
    else:
        pb, qb = np.broadcast_arrays(p, q)
        equal = (pb == qb).all(axis=-1)
        out_shape = pb.shape[:-1]
    if equal.all():
        return _finish(np.zeros(out_shape))
    with np.errstate(divide="ignore", invalid="ignore"):
        if rule.kind == "log":
            out = _divergence_log(p, q)
        elif rule.kind == "zero_one":
            out = _divergence_zero_one(p, q)
        elif rule.kind == "brier":
            d = p - q
            out = _osum(d * d)
        elif rule.kind == "spherical":
            out = _divergence_spherical(p, q)
        else:
            out = _divergence_renyi(p, q, rule.alpha)
        out = np.where(equal, 0.0, out)
    return _finish(out)


def total(rule: Rule, p, q) -> Union[float, np.ndarray]:
    """Total (cross-entropy-like) term: exactly entropy(p) + divergence(p, q).

    Computed as that sum, never via an independent formula, so
    total - entropy - divergence is zero by construction.
    """
    return entropy(rule, p) + divergence(rule, p, q)
