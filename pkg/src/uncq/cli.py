"""Command-line front door; every subcommand is a thin delegation.

Exit codes: 0 success, 1 usage error, 2 data error, 3 identity-audit failure.
All flags are validated before any file is touched.
"""

import argparse
import json
import math
import sys
from collections import defaultdict

from . import io as uio
from .core import MeasureSpec
from .errors import UncqError
from .measures import audit_identities, score_dataset
from .metrics import DetectionSet, RetentionSet, auarc, aupr, auroc, fpr_at_tpr
from .scoring import rule_from_name
from .synth import (
    BetaPosterior,
    SynthConfig,
    beta_bernoulli_item,
    beta_bernoulli_oracle,
    beta_measure_grid,
    dirichlet_ensemble,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_AUDIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse flavor whose usage errors exit with code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _alpha(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha {text!r}")


def _add_measure_flags(p):
    p.add_argument("--quantity", required=True, choices=["tu", "au", "eu"])
    p.add_argument("--predictor", required=True, choices=["A", "B", "C"])
    p.add_argument("--truth", type=int, choices=[1, 2, 3], default=2)
    p.add_argument(
        "--rule", choices=["log", "zero-one", "brier", "spherical", "renyi"], default="log"
    )
    p.add_argument("--alpha", type=_alpha, default=None, help="Renyi order (float or 'inf')")
    p.add_argument("--pairs", choices=["all", "offdiag"], default="all")
    p.add_argument("--reverse", action="store_true", help="swap divergence arguments")


def build_parser() -> _Parser:
    parser = _Parser(prog="uncq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score a prediction file under one measure")
    p_score.add_argument("--in", dest="infile", required=True)
    p_score.add_argument("--out", default="-", help="score CSV path ('-' = stdout)")
    _add_measure_flags(p_score)
    p_score.add_argument(
        "--forbid-inf", action="store_true", help="treat an infinite score as a data error"
    )

    p_eval = sub.add_parser("eval", help="detection / retention metrics over score CSVs")
    p_eval.add_argument("--scores", nargs="+", required=True, help="one or more score CSVs")
    src = p_eval.add_mutually_exclusive_group(required=True)
    src.add_argument("--pred", help="prediction file whose 'flag' field labels the items")
    src.add_argument("--flags", help="CSV of id,flag pairs")
    p_eval.add_argument("--task", choices=["detect", "retain"], default="detect")
    p_eval.add_argument("--level", type=float, default=0.95, help="TPR level for fpr@tpr")
    p_eval.add_argument("--fmin", type=float, default=0.5, help="smallest retained fraction")

    p_synth = sub.add_parser("synth", help="generate synthetic prediction files")
    synth_sub = p_synth.add_subparsers(dest="generator", required=True)

    p_beta = synth_sub.add_parser("beta", help="Beta-Bernoulli example with oracle sidecar")
    p_beta.add_argument("--a", type=float, required=True)
    p_beta.add_argument("--b", type=float, required=True)
    p_beta.add_argument("--n", type=int, required=True, help="posterior samples in the item")
    p_beta.add_argument("--seed", type=int, default=0)
    p_beta.add_argument("--out", required=True)
    p_beta.add_argument("--plot", default=None, help="write a measure-vs-theta SVG here")

    p_dir = synth_sub.add_parser("dirichlet", help="Dirichlet-categorical ensembles")
    p_dir.add_argument("--k", type=int, required=True)
    p_dir.add_argument("--n", type=int, required=True)
    p_dir.add_argument("--items", type=int, required=True)
    p_dir.add_argument("--conc", type=float, nargs="+", default=[1.0])
    p_dir.add_argument("--seed", type=int, default=0)
    p_dir.add_argument("--out", required=True)

    p_audit = sub.add_parser("audit", help="machine-verify the framework identities")
    p_audit.add_argument("--in", dest="infile", required=True)
    p_audit.add_argument("--tol", type=float, default=1e-9)

    return parser


def _build_spec(args, parser) -> MeasureSpec:
    if args.rule == "renyi" and args.alpha is None:
        parser.error("--rule renyi requires --alpha")
    if args.rule != "renyi" and args.alpha is not None:
        parser.error("--alpha only applies to --rule renyi")
    rule = rule_from_name(args.rule, args.alpha)
    return MeasureSpec(
        quantity=args.quantity,
        predictor=args.predictor,
        truth=args.truth,
        rule=rule,
        pairs=args.pairs,
        reverse=args.reverse,
    )


def _run_score(args, parser) -> int:
    spec = _build_spec(args, parser)
    items = uio.read_items(args.infile)
    records = score_dataset(spec, items)
    if args.forbid_inf:
        for rec in records:
            if math.isinf(rec.value):
                print(f"uncq score: item {rec.id!r} has an infinite score", file=sys.stderr)
                return EXIT_DATA
    if args.out == "-":
        uio.write_scores(records, sys.stdout)
    else:
        uio.write_scores(records, args.out)
    return EXIT_OK


def _read_flag_csv(path) -> dict:
    flags = {}
    truthy = {"1", "true", "t", "yes"}
    falsy = {"0", "false", "f", "no"}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line.lower() == "id,flag":
                continue
            head, sep, tail = line.rpartition(",")
            value = tail.strip().lower()
            if not sep or value not in truthy | falsy:
                raise UncqError(f"{path}: line {lineno}: expected 'id,flag'")
            flags[head] = value in truthy
    return flags


def _flag_lookup(args) -> dict:
    if args.flags is not None:
        return _read_flag_csv(args.flags)
    flags = {}
    for item in uio.read_items(args.pred):
        if item.flag is not None:
            flags[item.id] = item.flag
    return flags


def _run_eval(args, parser) -> int:
    if not 0.0 < args.level <= 1.0:
        parser.error("--level must be in (0, 1]")
    if not 0.0 <= args.fmin < 1.0:
        parser.error("--fmin must be in [0, 1)")
    flags = _flag_lookup(args)

    columns = (
        ["auroc", "aupr", f"fpr@tpr{args.level:g}"] if args.task == "detect" else ["auarc"]
    )
    rows = []
    for path in args.scores:
        records = uio.read_scores(path)
        missing = [r.id for r in records if r.id not in flags]
        if missing:
            raise UncqError(f"{path}: no flag for item {missing[0]!r}")
        values = [r.value for r in records]
        marks = [flags[r.id] for r in records]
        if args.task == "detect":
            d = DetectionSet(values, marks)
            rows.append((path, [auroc(d), aupr(d), fpr_at_tpr(d, args.level)]))
        else:
            r = RetentionSet(values, marks)
            rows.append((path, [auarc(r, args.fmin)]))

    width = max(len(p) for p, _ in rows + [("file", []), ("macro-avg", [])])
    print("  ".join(["file".ljust(width)] + [c.rjust(10) for c in columns]))
    for path, vals in rows:
        print("  ".join([path.ljust(width)] + [f"{v:10.6f}" for v in vals]))
    if len(rows) > 1:
        means = [sum(v[i] for _, v in rows) / len(rows) for i in range(len(columns))]
        print("  ".join(["macro-avg".ljust(width)] + [f"{v:10.6f}" for v in means]))
        print("# macro-avg is the unweighted mean of the per-file metrics")
    return EXIT_OK


def _run_synth(args, parser) -> int:
    if args.generator == "beta":
        if args.n < 2:
            parser.error("--n must be >= 2")
        try:
            post = BetaPosterior(args.a, args.b)
        except ValueError as err:
            parser.error(str(err))
        item = beta_bernoulli_item(post, args.n, args.seed)
        uio.write_items([item], args.out)
        au_b, au_c, eu_c2 = beta_bernoulli_oracle(post)
        sidecar = {"a": args.a, "b": args.b, "au_b": au_b, "au_c": au_c, "eu_c2": eu_c2}
        with open(args.out + ".oracle.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
            fh.write("\n")
        if args.plot is not None:
            _write_beta_plot(post, args.seed, args.plot)
        return EXIT_OK

    try:
        cfg = SynthConfig(
            k=args.k,
            n=args.n,
            items=args.items,
            concentration=args.conc[0] if len(args.conc) == 1 else tuple(args.conc),
            seed=args.seed,
        )
    except ValueError as err:
        parser.error(str(err))
    uio.write_items(dirichlet_ensemble(cfg), args.out)
    return EXIT_OK


def _write_beta_plot(post, seed, path) -> None:
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    grid = beta_measure_grid(post, seed=seed)
    thetas = grid["thetas"]
    pdf = grid["posterior_pdf"]
    fig, axes = plt.subplots(3, 3, figsize=(11, 8), sharex=True)
    for row, predictor in enumerate("ABC"):
        for col, truth in enumerate((1, 2, 3)):
            ax = axes[row][col]
            cell = grid["cells"][f"{predictor}{truth}"]
            ax.fill_between(thetas, 0, pdf / pdf.max() * 0.25, color="0.85", zorder=0)
            ax.plot(thetas, cell["tu"], label="total")
            ax.plot(thetas, cell["au"], label="aleatoric", linestyle="--")
            ax.plot(thetas, cell["eu"], label="epistemic", linestyle=":")
            ax.set_title(f"({predictor}{truth})", fontsize=10)
            if row == 2:
                ax.set_xlabel("Bernoulli parameter")
    axes[0][0].legend(fontsize=8)
    fig.suptitle(f"Beta({post.a:g}, {post.b:g}) example: measures over the parameter grid")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _run_audit(args, parser) -> int:
    if not args.tol > 0:
        parser.error("--tol must be positive")
    items = uio.read_items(args.infile)
    worst = defaultdict(lambda: (0.0, True, False))  # name -> (worst err, passed, seen)
    failed = False
    for item in items:
        report = audit_identities(item, tol=args.tol)
        failed = failed or not report.passed
        for check in report.checks:
            if not check.applicable:
                continue
            err, ok, _ = worst[check.name]
            worst[check.name] = (max(err, check.abs_err), ok and check.passed, True)
    if not worst:
        print("no applicable identities (empty file?)")
        return EXIT_DATA
    name_width = max(len(n) for n in worst)
    print(f"{'identity'.ljust(name_width)}  {'worst |lhs-rhs|':>16}  status")
    for name, (err, ok, _) in worst.items():
        print(f"{name.ljust(name_width)}  {err:16.3e}  {'ok' if ok else 'FAIL'}")
    return EXIT_AUDIT if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    try:
        if args.command == "score":
            return _run_score(args, parser)
        if args.command == "eval":
            return _run_eval(args, parser)
        if args.command == "synth":
            return _run_synth(args, parser)
        return _run_audit(args, parser)
    except SystemExit as err:
        return int(err.code or 0)
    except (UncqError, OSError, ValueError) as err:
        print(f"uncq {args.command}: error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ImportError as err:
        print(f"uncq {args.command}: error: {err} (install the 'plot' extra)", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
