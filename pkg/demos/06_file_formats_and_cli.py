"""The prediction-file / score-CSV pipeline, end to end.

The same flow is available from the shell:

    uncq synth dirichlet --k 5 --n 10 --items 100 --conc 0.5 --seed 3 --out pred.ndj
    uncq score --in pred.ndj --quantity eu --predictor C --truth 2 --out scores.csv
    uncq audit --in pred.ndj
    uncq synth beta --a 2 --b 3 --n 1000 --seed 7 --out beta.ndj --plot grid.svg

This script drives the identical code paths in-process and peeks at the
file contents.

Run:  python demos/06_file_formats_and_cli.py
"""

import tempfile
from pathlib import Path

from uncq.cli import main

workdir = Path(tempfile.mkdtemp(prefix="uncq-demo-"))
pred = workdir / "pred.ndj"
scores = workdir / "scores.csv"

print("1. generate a prediction file (line-delimited records):")
assert main([
    "synth", "dirichlet", "--k", "5", "--n", "10", "--items", "100",
    "--conc", "0.5", "--seed", "3", "--out", str(pred),
]) == 0
lines = pred.read_text().splitlines()
print(f"   {pred}")
print(f"   {lines[0]}")
print(f"   {lines[1][:76]}...")
print()

print("2. score every item with the mutual-information cell (EU, C2):")
assert main([
    "score", "--in", str(pred), "--quantity", "eu", "--predictor", "C",
    "--truth", "2", "--rule", "log", "--out", str(scores),
]) == 0
for line in scores.read_text().splitlines()[:4]:
    print(f"   {line}")
print("   ...")
print()

print("3. audit the framework identities on the same file:")
code = main(["audit", "--in", str(pred), "--tol", "1e-9"])
print(f"   audit exit code: {code} (0 = every identity held)")
print()

print("4. score CSVs round-trip doubles exactly (17 significant digits), and")
print("   +inf is a legal score value rendered as 'inf'.")
