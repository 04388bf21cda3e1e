"""The same ensemble scored under every supported rule.

The grid is not tied to Shannon entropy: any rule that contributes an
entropy-like term and a divergence-like term produces its own copy of the
framework, and the additive decomposition survives unchanged.  The Renyi
family interpolates between counting support (alpha=0) and looking only at
the mode (alpha=inf).

Run:  python demos/02_scoring_rules.py
"""

import math

from uncq import EnsembleItem, MeasureSpec, Rule, epistemic, total_uncertainty, validate_item

item = validate_item(
    EnsembleItem(
        id="demo",
        samples=[[0.8, 0.15, 0.05], [0.4, 0.35, 0.25], [0.6, 0.3, 0.1]],
    )
)

rules = [
    ("log", Rule.log()),
    ("zero-one", Rule.zero_one()),
    ("brier", Rule.brier()),
    ("spherical", Rule.spherical()),
    ("renyi(0)", Rule.renyi(0.0)),
    ("renyi(1/2)", Rule.renyi(0.5)),
    ("renyi(2)", Rule.renyi(2.0)),
    ("renyi(inf)", Rule.renyi(math.inf)),
]

print(f"{'rule':>12} {'TU(C2)':>10} {'EU(C2)':>10} {'EU(C3)':>10}")
for name, rule in rules:
    tu = total_uncertainty(MeasureSpec(quantity="TU", predictor="C", truth=2, rule=rule), item)
    eu2 = epistemic(MeasureSpec(quantity="EU", predictor="C", truth=2, rule=rule), item)
    eu3 = epistemic(MeasureSpec(quantity="EU", predictor="C", truth=3, rule=rule), item)
    print(f"{name:>12} {tu:10.6f} {eu2:10.6f} {eu3:10.6f}")

print()
print("renyi(1) falls back to the log rule exactly:")
a = epistemic(MeasureSpec(quantity="EU", predictor="C", truth=2, rule=Rule.renyi(1.0)), item)
b = epistemic(MeasureSpec(quantity="EU", predictor="C", truth=2, rule=Rule.log()), item)
print(f"  renyi(1) -> {a!r}\n  log      -> {b!r}\n  equal: {a == b}")
