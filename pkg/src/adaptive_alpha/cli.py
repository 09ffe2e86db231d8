"""Command-line front end.

Exit status: 0 on success, 1 for usage errors, 2 when a computation or
input file fails.  Errors print as ``error[<code>]: <message>``.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .alpha import (
    alpha_for_design,
    anova_adaptive_alpha,
    bic_adaptive_alpha,
)
from .calibration import CalibrationStrategy, PBICInputs, tess_balanced_anova
from .dataset import fetch_dataset_csv, parse_dataset_csv
from .decision import run_regression_test
from .errors import AdaptiveAlphaError
from .linmod import anova_log_b
from .simlab import TABLE_IDS, Table3Config, null_law_mc_check, reproduce_table, table3_experiment


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _names(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _output_options(p):
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")


def _strategy_options(p, anova=False):
    p.add_argument("--alpha0", type=float, default=0.05)
    p.add_argument("--strategy", choices=("simple", "minimal", "anchored", "pbic"), default="simple")
    p.add_argument("--anchor-n", type=int, help="total sample size at which the level equals alpha0")
    if anova:
        p.add_argument("--anchor-r", type=int, help="replicates per group at the anchor (sets anchor-n = k r)")
    else:
        p.add_argument("--anchor-log-b", type=float, help="log b of the anchor design")
    p.add_argument("--pbic-xi", type=_floats, help="effect estimates, one per entering parameter")
    p.add_argument("--pbic-d", type=_floats, help="unit-information scales")
    p.add_argument("--pbic-neff", type=_floats, help="effective sample sizes")


def build_parser():
    parser = _Parser(prog="adaptive-alpha", description="Adaptive significance levels for nested linear models.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("alpha", help="adaptive level for a nested design given b, n, j, q")
    p.add_argument("--anova", action="store_true", help="balanced one-way ANOVA; use -k and -r")
    p.add_argument("-k", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("-j", type=int)
    p.add_argument("-q", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--b", type=float, help="Gram determinant ratio")
    g.add_argument("--log-b", type=float)
    _strategy_options(p)
    p.add_argument("--anchor-r", type=int, help="with --anova: replicates per group at the anchor")
    _output_options(p)

    p = sub.add_parser("anova-alpha", help="balanced one-way ANOVA with k groups of r replicates")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    _strategy_options(p, anova=True)
    _output_options(p)

    p = sub.add_parser("bic-alpha", help="BIC-based adaptive level for i.i.d. models")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-q", type=int, default=1)
    p.add_argument("--alpha0", type=float, default=0.05)
    p.add_argument("--anchor-n", type=int, help="sample size at which the level equals alpha0")
    _output_options(p)

    p = sub.add_parser("test", help="nested regression test on a CSV dataset")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv", help="path of a comma-separated file with a header row")
    src.add_argument("--fetch-url", help="download the CSV from this URL")
    p.add_argument("--response", required=True)
    p.add_argument("--null", type=_names, default=[], help="comma-separated predictors of the null model")
    p.add_argument("--alt", type=_names, required=True, help="comma-separated predictors of the alternative")
    _strategy_options(p)
    _output_options(p)

    p = sub.add_parser("simulate-table3", help="false-positive share among significant two-sample tests")
    p.add_argument("-r", type=_ints, default=[10, 50, 100, 500, 1000], help="per-group sizes")
    p.add_argument("-K", type=int, default=1000)
    p.add_argument("--outer-reps", type=int, default=20)
    p.add_argument("--f", type=float, default=0.25)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--window", type=_floats, default=[0.01, 0.05])
    p.add_argument("--adjust", choices=("none", "simple", "pbic"), default="none")
    p.add_argument("--p-method", choices=("exact", "gamma"), default="exact")
    p.add_argument("--alpha0", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=20240101)
    p.add_argument("--workers", type=int, default=1)
    _output_options(p)

    p = sub.add_parser("tables", help="regenerate the published alpha tables")
    p.add_argument("--table", choices=TABLE_IDS + ("all",), default="all")
    p.add_argument("--alpha0", type=float, default=0.05)
    p.add_argument("--pbic-xi", type=float, help="effect estimate for PBIC cells")
    p.add_argument("--pbic-d", type=float, help="unit-information scale for the ANOVA PBIC cells")
    p.add_argument("--var1", type=float, default=14.0)
    p.add_argument("--var2", type=float, default=140.0)
    _output_options(p)

    p = sub.add_parser("mc-check", help="Monte Carlo check of the null laws of T")
    p.add_argument("-n", type=int, default=100)
    p.add_argument("-j", type=int, default=2)
    p.add_argument("-q", type=int, default=1)
    p.add_argument("-N", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _output_options(p)
    return parser


def _pbic_inputs(args, q, default_neff=None):
    if args.pbic_xi is None:
        raise UsageError("--strategy pbic needs --pbic-xi (and --pbic-d, --pbic-neff unless implied)")
    xi = args.pbic_xi
    d = args.pbic_d
    neff = args.pbic_neff
    if neff is None and default_neff is not None:
        neff = [default_neff] * len(xi)
    if d is None or neff is None:
        raise UsageError("--strategy pbic needs --pbic-d and --pbic-neff for this design")
    if not len(xi) == len(d) == len(neff) == q:
        raise UsageError(f"PBIC inputs need exactly q={q} values each")
    return PBICInputs.entering(xi, d, neff)


def _strategy(args, q, default_neff=None, anchor_log_b=None):
    kind = args.strategy
    if kind == "simple":
        return CalibrationStrategy.simple(args.alpha0)
    if kind == "minimal":
        return CalibrationStrategy.minimal(args.alpha0)
    if kind == "anchored":
        if args.anchor_n is None:
            raise UsageError("--strategy anchored needs --anchor-n")
        return CalibrationStrategy.anchored(args.anchor_n, args.alpha0, anchor_log_b)
    return CalibrationStrategy.pbic_strategy(_pbic_inputs(args, q, default_neff), args.alpha0)


def _alpha_payload(res, strategy):
    out = res.to_dict()
    out["alpha_display"] = res.alpha_display
    out["b"] = res.b
    out["provenance"] = strategy.describe() if strategy is not None else {"kind": res.strategy,
                                                                          "alpha0": res.alpha0}
    return out


def _anova(args, k, r):
    if k is None or r is None:
        raise UsageError("ANOVA mode needs -k and -r")
    if getattr(args, "anchor_r", None) is not None:
        args.anchor_n = k * args.anchor_r
    strategy = _strategy(args, k - 1, default_neff=float(tess_balanced_anova(k, r).n_eff))
    if strategy.kind.value == "pbic":
        res = alpha_for_design(anova_log_b(k, r), k * r, k, k - 1, strategy)
    else:
        res = anova_adaptive_alpha(k, r, strategy)
    return _alpha_payload(res, strategy)


def cmd_alpha(args):
    if args.anova:
        return _anova(args, args.k, args.r)
    if None in (args.n, args.j, args.q):
        raise UsageError("alpha needs -n, -j and -q (or --anova -k -r)")
    if args.log_b is None and args.b is None:
        raise UsageError("alpha needs --b or --log-b")
    if args.b is not None and not args.b > 0:
        raise UsageError("--b must be positive")
    log_b = args.log_b if args.log_b is not None else math.log(args.b)
    if args.strategy == "anchored" and args.anchor_log_b is None:
        raise UsageError("--strategy anchored with a general design needs --anchor-log-b")
    strategy = _strategy(args, args.q, anchor_log_b=args.anchor_log_b)
    return _alpha_payload(alpha_for_design(log_b, args.n, args.j, args.q, strategy), strategy)


def cmd_anova_alpha(args):
    return _anova(args, args.k, args.r)


def cmd_bic_alpha(args):
    return _alpha_payload(bic_adaptive_alpha(args.n, args.q, args.alpha0, args.anchor_n), None)


def cmd_test(args):
    data = parse_dataset_csv(args.csv) if args.csv else fetch_dataset_csv(args.fetch_url)
    q = len([p for p in args.alt if p not in args.null])
    anchor_log_b = getattr(args, "anchor_log_b", None)
    if args.strategy == "anchored" and anchor_log_b is None:
        raise UsageError("--strategy anchored needs --anchor-log-b for a regression test")
    strategy = _strategy(args, q, anchor_log_b=anchor_log_b)
    report, diag = run_regression_test(data, args.response, args.null, args.alt, strategy)
    return {"report": report.to_dict(), "regression": diag.to_dict(), "source": data.source, "n": data.n}


def cmd_simulate(args):
    if len(args.window) != 2:
        raise UsageError("--window needs two numbers, lower,upper")
    rows = []
    for r in args.r:
        cfg = Table3Config(r=r, K=args.K, f=args.f, sigma=args.sigma, p_window=tuple(args.window),
                           outer_reps=args.outer_reps, seed=args.seed,
                           adjustment=None if args.adjust == "none" else args.adjust,
                           alpha0=args.alpha0, p_method=args.p_method)
        res = table3_experiment(cfg, workers=args.workers)
        rows.append({"r": r, "adjustment": args.adjust, "K": args.K, "outer_reps": args.outer_reps,
                     "seed": args.seed, "pct_from_null": res.pct_from_null, "mc_stderr": res.mc_stderr,
                     "low_confidence": res.low_confidence})
    return {"rows": rows}


def cmd_tables(args):
    ids = TABLE_IDS if args.table == "all" else (args.table,)
    tables = [reproduce_table(t, alpha0=args.alpha0, pbic_xi=args.pbic_xi, pbic_d=args.pbic_d,
                              var1=args.var1, var2=args.var2) for t in ids]
    return {"tables": tables}


def cmd_mc_check(args):
    res = null_law_mc_check(args.n, args.j, args.q, args.N, args.seed)
    return {"ks_distance": res.ks_distance, "ks_exact": res.ks_exact,
            "N": res.N, "n": res.n, "j": res.j, "q": res.q, "seed": args.seed}


COMMANDS = {
    "alpha": cmd_alpha,
    "anova-alpha": cmd_anova_alpha,
    "bic-alpha": cmd_bic_alpha,
    "test": cmd_test,
    "simulate-table3": cmd_simulate,
    "tables": cmd_tables,
    "mc-check": cmd_mc_check,
}


def fmt_number(x):
    """Human precision: four decimals, scientific below 1e-4."""
    if isinstance(x, bool) or not isinstance(x, float):
        return str(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    if x != 0 and abs(x) < 1e-4:
        return f"{x:.3e}"
    return f"{x:.4f}"


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = ";".join(str(x) for x in v)
        else:
            out[key] = v
    return out


def _csv_rows(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


def render(command, payload, fmt):
    if command == "tables":
        tables = payload["tables"]
        if fmt == "csv":
            return "".join(t.to_csv() for t in tables)
        if fmt == "json":
            return json.dumps({t.table_id: list(t.rows) for t in tables}, indent=2) + "\n"
        parts = []
        for t in tables:
            parts.append(f"# {t.table_id}")
            parts.append("  ".join(t.columns))
            for row in t.rows:
                parts.append("  ".join(fmt_number(row[c]) for c in t.columns))
        return "\n".join(parts) + "\n"
    if fmt == "json":
        return json.dumps(_json_safe(payload), indent=2) + "\n"
    if command == "simulate-table3":
        rows = payload["rows"]
        if fmt == "csv":
            return _csv_rows(list(rows[0]), rows)
        lines = ["r  adjustment  pct_from_null  mc_stderr  low_confidence"]
        lines += [f"{r['r']}  {r['adjustment']}  {fmt_number(r['pct_from_null'])}  "
                  f"{fmt_number(r['mc_stderr'])}  {r['low_confidence']}" for r in rows]
        return "\n".join(lines) + "\n"
    flat = _flatten(payload)
    if fmt == "csv":
        return _csv_rows(list(flat), [flat])
    if "alpha_adaptive" in payload:
        lines = [fmt_number(payload["alpha_display"])]
    elif "report" in payload:
        rep = payload["report"]
        lines = [f"reject_adaptive={rep['reject_adaptive']} reject_classical={rep['reject_classical']}"]
    else:
        lines = []
    width = max(len(k) for k in flat)
    lines += [f"{k.ljust(width)}  {fmt_number(v)}" for k, v in flat.items()]
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = COMMANDS[args.command](args)
        text = render(args.command, payload, args.format)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except AdaptiveAlphaError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error[io]: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
