"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from uncq import (
    DetectionSet,
    EnsembleItem,
    MeasureSpec,
    RetentionSet,
    Rule,
    SynthConfig,
    aleatoric,
    auarc,
    audit_identities,
    auroc,
    beta_bernoulli_item,
    beta_bernoulli_oracle,
    BetaPosterior,
    detection_scenario,
    entropy,
    epistemic,
    posterior_mean,
    score_dataset,
    total_uncertainty,
    validate_item,
)

ALL_RULES = [
    Rule.log(),
    Rule.zero_one(),
    Rule.brier(),
    Rule.spherical(),
    Rule.renyi(0.0),
    Rule.renyi(0.5),
    Rule.renyi(2.0),
    Rule.renyi(math.inf),
]


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"[criterion {number}] {name}: FAIL")
        raise
    print(f"[criterion {number}] {name}: PASS")


def random_item(rng, k, n, with_reference=True):
    samples = rng.dirichlet(np.ones(k), size=n)
    item = validate_item(EnsembleItem(id="it", samples=samples, single=samples[0]))
    if not with_reference:
        return item
    return EnsembleItem(
        id=item.id,
        samples=item.samples,
        single=item.single,
        reference=posterior_mean(item.samples),
    )


def test_criterion_1_identity_audit():
    """All proven identities hold on 1,000 seeded Dirichlet ensembles."""
    with criterion(1, "identity audit on 1,000 ensembles, tol 1e-9, < 10 s"):
        rng = np.random.default_rng(1001)
        start = time.monotonic()
        for _ in range(1000):
            k = int(rng.integers(2, 11))
            n = int(rng.integers(2, 21))
            report = audit_identities(random_item(rng, k, n), tol=1e-9)
            assert report.passed
        elapsed = time.monotonic() - start
        assert elapsed < 10.0, f"audit took {elapsed:.2f}s"


def test_criterion_2_worked_micro_ensemble():
    """The hand-evaluated two-sample ensemble reproduces to 1e-6."""
    with criterion(2, "worked micro-ensemble values"):
        item = validate_item(EnsembleItem(id="m", samples=[[0.8, 0.2], [0.2, 0.8]]))

        def eu(predictor, truth, pairs="all"):
            return epistemic(
                MeasureSpec(quantity="EU", predictor=predictor, truth=truth, pairs=pairs),
                item,
            )

        assert eu("C", 2) == pytest.approx(0.192745, abs=1e-6)
        assert eu("B", 3) == pytest.approx(0.223144, abs=1e-6)
        assert eu("C", 3, "all") == pytest.approx(0.415889, abs=1e-6)
        assert eu("C", 3, "offdiag") == pytest.approx(0.831777, abs=1e-6)
        tu = total_uncertainty(MeasureSpec(quantity="TU", predictor="C", truth=2), item)
        assert tu == pytest.approx(math.log(2), abs=1e-6)


def test_criterion_3_beta_oracle_and_mc():
    """Digamma closed form vs quadrature (1e-9) and the seeded MC run (2e-3)."""
    with criterion(3, "Beta(2,3) oracle vs quadrature vs MC, < 5 s"):
        start = time.monotonic()
        post = BetaPosterior(2, 3)
        au_b, au_c, eu_c2 = beta_bernoulli_oracle(post)

        # independent oracle: midpoint quadrature over 1e6 points with the
        # Beta density built from log-gamma, no digamma involved
        points = 1_000_000
        thetas = (np.arange(points) + 0.5) / points
        log_norm = math.lgamma(5.0) - math.lgamma(2.0) - math.lgamma(3.0)
        pdf = np.exp(log_norm + np.log(thetas) + 2.0 * np.log1p(-thetas))
        h = -thetas * np.log(thetas) - (1 - thetas) * np.log1p(-thetas)
        quad_mu = float(np.mean(pdf * thetas))
        quad_au_b = -quad_mu * math.log(quad_mu) - (1 - quad_mu) * math.log1p(-quad_mu)
        quad_au_c = float(np.mean(pdf * h))
        assert au_b == pytest.approx(quad_au_b, abs=1e-9)
        assert au_c == pytest.approx(quad_au_c, abs=1e-9)
        assert au_b == pytest.approx(0.673012, abs=1e-6)
        assert au_c == pytest.approx(0.583333, abs=1e-6)

        # seeded MC estimators with one million posterior samples
        item = beta_bernoulli_item(post, n=1_000_000, seed=33)
        assert aleatoric("B", item) == pytest.approx(au_b, abs=2e-3)
        assert aleatoric("C", item) == pytest.approx(au_c, abs=2e-3)
        mc_eu = epistemic(MeasureSpec(quantity="EU", predictor="C", truth=2), item)
        assert mc_eu == pytest.approx(eu_c2, abs=2e-3)
        assert eu_c2 == pytest.approx(0.089679, abs=1e-6)

        elapsed = time.monotonic() - start
        assert elapsed < 5.0, f"oracle suite took {elapsed:.2f}s"


def test_criterion_4_decomposition_bitwise():
    """TU equals AU + EU bit-exactly: every cell, every rule, 1e4 items."""
    with criterion(4, "bitwise TU = AU + EU across the full grid on 1e4 items"):
        rng = np.random.default_rng(4001)
        cells = [(p, t) for p in "ABC" for t in (1, 2, 3)]
        grid = []
        for rule in ALL_RULES:
            for predictor, truth in cells:
                pair_options = ("all", "offdiag") if (predictor != "A" and truth == 3) else ("all",)
                for pairs in pair_options:
                    grid.append(
                        (
                            MeasureSpec(
                                quantity="TU", predictor=predictor, truth=truth,
                                rule=rule, pairs=pairs,
                            ),
                            MeasureSpec(
                                quantity="EU", predictor=predictor, truth=truth,
                                rule=rule, pairs=pairs,
                            ),
                        )
                    )
        for _ in range(10_000):
            k = int(rng.integers(2, 7))
            n = int(rng.integers(2, 7))
            item = random_item(rng, k, n)
            au_cache = {}
            for tu_spec, eu_spec in grid:
                key = (tu_spec.predictor, tu_spec.rule)
                if key not in au_cache:
                    au_cache[key] = aleatoric(tu_spec.predictor, item, tu_spec.rule)
                tu = total_uncertainty(tu_spec, item)
                eu = epistemic(eu_spec, item)
                assert tu == au_cache[key] + eu


def test_criterion_5_metric_oracles():
    """AUROC pair-counting equivalence, the AUARC fixture, and the flip law."""
    with criterion(5, "metric oracles (pair counting, AUARC fixture, flip)"):
        rng = np.random.default_rng(5001)

        def pair_wins(scores, flags):
            pos = [s for s, f in zip(scores, flags) if f]
            neg = [s for s, f in zip(scores, flags) if not f]
            total = 0.0
            for sp in pos:
                for sn in neg:
                    total += 1.0 if sp > sn else (0.5 if sp == sn else 0.0)
            return total, len(pos) * len(neg)

        # pair counting on datasets up to 200 items (ties and +inf included)
        for _ in range(250):
            n = int(rng.integers(2, 201))
            scores = rng.choice([-2.0, -0.5, 0.0, 0.5, 1.0, 3.0, math.inf], size=n)
            flags = rng.integers(0, 2, size=n).astype(bool)
            if not flags.any():
                flags[0] = True
            if flags.all():
                flags[-1] = False
            wins, pairs = pair_wins(list(scores), list(flags))
            assert auroc(DetectionSet(scores, flags)) == wins / pairs

        # the retention fixture and the 50%-of-most-certain convention
        fixture = RetentionSet([1.0, 2.0, 3.0, 4.0], [True, True, True, False])
        assert auarc(fixture, 0.5) == 0.9375

        # flip law on tie-free data: exact at the pair-count level, one float
        # rounding apart at the ratio level
        for _ in range(200):
            n = int(rng.integers(2, 120))
            scores = rng.permutation(np.arange(n)).astype(float)
            flags = rng.integers(0, 2, size=n).astype(bool)
            if not flags.any():
                flags[0] = True
            if flags.all():
                flags[-1] = False
            a = auroc(DetectionSet(scores, flags))
            b = auroc(DetectionSet(-scores, flags))
            assert b == pytest.approx(1.0 - a, abs=1e-15)
            wins, pairs = pair_wins(list(scores), list(flags))
            wins_neg, _ = pair_wins(list(-scores), list(flags))
            assert wins + wins_neg == pairs


def test_criterion_6_detection_scenario():
    """Constructed two-population scenario separates at AUROC >= 0.95."""
    with criterion(6, "detection scenario auroc(EU C2) >= 0.95"):
        cfg = SynthConfig(k=5, n=10, items=200, concentration=1.0, seed=20250811)
        items = detection_scenario(cfg, spread_lo=1.0, spread_hi=500.0)
        spec = MeasureSpec(quantity="EU", predictor="C", truth=2)
        records = score_dataset(spec, items)
        d = DetectionSet([r.value for r in records], [it.flag for it in items])
        assert auroc(d) >= 0.95


def test_criterion_7_renyi_suite():
    """Entropy ordering across alpha and continuity at alpha = 1."""
    with criterion(7, "Renyi ordering (1e-12) and continuity at alpha=1 (1e-3)"):
        rng = np.random.default_rng(7001)
        p = rng.dirichlet(np.ones(6), size=10_000)
        h0 = entropy(Rule.renyi(0.0), p)
        h1 = entropy(Rule.renyi(1.0), p)
        h2 = entropy(Rule.renyi(2.0), p)
        hinf = entropy(Rule.renyi(math.inf), p)
        assert np.all(h0 >= h1 - 1e-12)
        assert np.all(h1 >= h2 - 1e-12)
        assert np.all(h2 >= hinf - 1e-12)

        floor = 1e-3
        q = rng.dirichlet(np.ones(5), size=10_000)
        q = (1 - 5 * floor) * q + floor  # every entry >= 1e-3
        q /= q.sum(axis=1, keepdims=True)
        h_log = entropy(Rule.log(), q)
        assert np.all(np.abs(entropy(Rule.renyi(1 + 1e-4), q) - h_log) <= 1e-3)
        assert np.all(np.abs(entropy(Rule.renyi(1 - 1e-4), q) - h_log) <= 1e-3)
