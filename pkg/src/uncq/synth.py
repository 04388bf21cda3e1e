"""Synthetic generators and analytic oracles.

All generators are deterministic per (seed, item index): each item draws from
its own child stream of a PCG64 generator (numpy ``default_rng``), spawned via
``SeedSequence(seed, spawn_key=(i,))``, so item i does not depend on how many
items are requested.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from scipy.special import digamma

from .core import EnsembleItem, ProbVec, validate_item
from .measures import posterior_mean

#: concentration multiplier for the per-item sample cloud; non-degenerate but
#: clearly distinguishable ensembles
SHARPNESS = 50.0


@dataclass(frozen=True)
class BetaPosterior:
    """Beta(a, b) posterior over a Bernoulli parameter."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a > 0 and self.b > 0):
            raise ValueError(f"Beta shapes must be finite and positive, got ({self.a}, {self.b})")

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)


def beta_bernoulli_oracle(post: BetaPosterior) -> Tuple[float, float, float]:
    """Closed-form (au_b, au_c, eu_c2) for the Beta-Bernoulli example.

    au_b is the entropy of the mean Bernoulli; au_c is the posterior
    expectation of the Bernoulli entropy, via the digamma identity
    E[-theta ln theta] = mu * (psi(a+b+1) - psi(a+1)) (and symmetrically for
    the 1-theta term); eu_c2 is their gap, the mutual information.
    """
    a, b = post.a, post.b
    mu = post.mean
    au_b = float(-mu * math.log(mu) - (1.0 - mu) * math.log1p(-mu))
    au_c = float(
        mu * (digamma(a + b + 1.0) - digamma(a + 1.0))
        + (1.0 - mu) * (digamma(a + b + 1.0) - digamma(b + 1.0))
    )
    return au_b, au_c, au_b - au_c


def _item_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def beta_bernoulli_item(post: BetaPosterior, n: int, seed: int, *, id: str = "beta") -> EnsembleItem:
    """MC realization of the Beta-Bernoulli example as one ensemble item.

    Draws n Bernoulli parameters from the posterior; sample i is
    [theta_i, 1 - theta_i] and the single model is the mean Bernoulli.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    rng = _item_rng(seed, 0)
    thetas = rng.beta(post.a, post.b, size=n)
    samples = np.column_stack((thetas, 1.0 - thetas))
    mu = post.mean
    item = EnsembleItem(id=id, samples=samples, single=ProbVec([mu, 1.0 - mu]))
    return validate_item(item)


@dataclass(frozen=True)
class SynthConfig:
    """Shape of a generated dataset: K classes, N samples/item, item count."""

    k: int
    n: int
    items: int
    concentration: Union[float, Tuple[float, ...]] = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.items < 0:
            raise ValueError(f"items must be >= 0, got {self.items}")
        conc = np.asarray(self.concentration, dtype=np.float64)
        if np.any(conc <= 0) or not np.all(np.isfinite(conc)):
            raise ValueError("concentration must be positive and finite")
        if conc.ndim not in (0, 1) or (conc.ndim == 1 and conc.shape[0] != self.k):
            raise ValueError("concentration must be a scalar or one value per class")

    def alpha(self) -> np.ndarray:
        conc = np.asarray(self.concentration, dtype=np.float64)
        if conc.ndim == 0:
            return np.full(self.k, float(conc))
        return conc.copy()


def _draw_item(cfg: SynthConfig, index: int, sharpness: float, prefix: str) -> EnsembleItem:
    rng = _item_rng(cfg.seed, index)
    center = rng.dirichlet(cfg.alpha())
    # dirichlet rejects zero concentrations; components that underflowed to
    # zero are floored at the smallest positive double
    alpha = np.maximum(sharpness * center, np.finfo(np.float64).tiny)
    samples = rng.dirichlet(alpha, size=cfg.n)
    base = validate_item(EnsembleItem(id=f"{prefix}{index:05d}", samples=samples))
    return EnsembleItem(
        id=base.id,
        samples=base.samples,
        single=ProbVec(base.samples[0], tol=None),
        reference=posterior_mean(base.samples),
    )


def dirichlet_ensemble(cfg: SynthConfig) -> List[EnsembleItem]:
    """Random ensemble items: a latent Dirichlet center per item, then N
    samples around it at the fixed sharpness.

    The single model is the first sample; the reference is the posterior mean.
    """
    return [_draw_item(cfg, i, SHARPNESS, "syn-") for i in range(cfg.items)]


def beta_measure_grid(
    post: BetaPosterior,
    n: int = 200,
    seed: int = 0,
    grid_points: int = 99,
    fixed_single: float = 0.3,
    fixed_reference: float = 0.8,
) -> dict:
    """TU/AU/EU curves per framework cell over a Bernoulli-parameter grid.

    For (A) cells the predicting parameter sweeps the grid (the reference,
    where needed, stays at ``fixed_reference``); for (B/C, 1) cells the
    reference parameter sweeps the grid; the remaining cells are constant in
    theta.  Returns the grid, the posterior density over it, and one
    {"tu", "au", "eu"} array triple per cell -- plotting data only.
    """
    from scipy.stats import beta as beta_dist

    from .core import MeasureSpec
    from .measures import aleatoric, epistemic

    thetas = np.linspace(0.01, 0.99, grid_points)
    base = beta_bernoulli_item(post, n, seed)

    def variant(single_theta, reference_theta):
        return EnsembleItem(
            id=base.id,
            samples=base.samples,
            single=ProbVec([single_theta, 1.0 - single_theta]),
            reference=ProbVec([reference_theta, 1.0 - reference_theta]),
        )

    cells = {}
    for predictor in "ABC":
        for truth in (1, 2, 3):
            sweeps = predictor == "A" or truth == 1
            au = np.empty(grid_points)
            eu = np.empty(grid_points)
            for j, th in enumerate(thetas):
                if j > 0 and not sweeps:
                    au[j] = au[0]
                    eu[j] = eu[0]
                    continue
                it = variant(
                    th if predictor == "A" else fixed_single,
                    th if truth == 1 else fixed_reference,
                )
                au[j] = aleatoric(predictor, it)
                eu[j] = epistemic(MeasureSpec(quantity="EU", predictor=predictor, truth=truth), it)
            cells[f"{predictor}{truth}"] = {"au": au, "eu": eu, "tu": au + eu}
    return {
        "thetas": thetas,
        "posterior_pdf": beta_dist.pdf(thetas, post.a, post.b),
        "cells": cells,
    }


def detection_scenario(
    cfg: SynthConfig, spread_lo: float, spread_hi: float
) -> List[EnsembleItem]:
    """Two-population detection fixture: agreeing vs disagreeing ensembles.

    The first half of the items is drawn with high sample sharpness
    (= spread_hi, low disagreement, flag False); the second half with low
    sharpness (= spread_lo, high disagreement, flag True).  By construction,
    epistemic scores on the flagged population stochastically dominate.
    """
    if not 0.0 < spread_lo < spread_hi:
        raise ValueError(f"need 0 < spread_lo < spread_hi, got ({spread_lo}, {spread_hi})")
    n_neg = cfg.items - cfg.items // 2
    out = []
    for i in range(cfg.items):
        flagged = i >= n_neg
        item = _draw_item(cfg, i, spread_lo if flagged else spread_hi, "det-")
        out.append(
            EnsembleItem(
                id=item.id,
                samples=item.samples,
                single=item.single,
                reference=item.reference,
                flag=flagged,
            )
        )
    return out
