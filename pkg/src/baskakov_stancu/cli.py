"""Command-line front end.

Subcommands:

    eval      one operator value, printed to stdout
    audit     moment-identity audit over a parameter grid, JSON report
    converge  per-n convergence table (CSV) over an n-ladder
    plotdata  extract (x, y) series from a report into .dat files and
              render companion PNG figures

Exit codes: 0 success, 1 usage error, 2 numeric non-convergence, 3 audit
discrepancy outside the catalogued-suspect set, 4 I/O failure.  Output
files embed their resolved configuration and are byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .basis import OperatorParams, TruncationPolicy
from .functions import FunctionDSLError, parse_function
from .moments import (
    LEMMA_IDS,
    LIMIT_LADDER,
    SUSPECT_IDS,
    audit_lemma,
)
from .operators import NonConvergenceError, apply, apply_centered
from .reporting import fmt_float, render_figure, write_csv, write_dat, write_json
from .smoothness import Window
from .theorems import (
    bound_thm31,
    bound_thm32,
    default_window,
    voronovskaya_target,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGENCE = 2
EXIT_DISCREPANCY = 3
EXIT_IO = 4

AUDIT_GRIDS = {
    "default": {
        "n": (5, 10, 50, 200),
        "a": (0.0, 1.0, 3.0),
        "shifts": ((0.0, 0.0), (1.0, 2.0), (2.0, 2.0)),
        "x": (0.5, 1.0, 2.0),
        "limit_families": ((0.0, 0.0, 0.0), (1.0, 1.0, 2.0)),
        "limit_x": (0.5, 1.0, 2.0),
    },
    "quick": {
        "n": (5, 10),
        "a": (0.0, 1.0),
        "shifts": ((0.0, 0.0), (1.0, 2.0)),
        "x": (1.0,),
        "limit_families": ((1.0, 1.0, 2.0),),
        "limit_x": (1.0,),
        "limit_ladder": tuple(2 ** j for j in range(4, 11)),
    },
}


class UsageError(Exception):
    """Bad flags or malformed inputs; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise UsageError(message)


def _add_common(parser: _Parser) -> None:
    parser.add_argument("--mass-eps", type=float, default=1e-14)
    parser.add_argument("--term-eps", type=float, default=1e-16)
    parser.add_argument("--k-max", type=int, default=1_000_000)
    parser.add_argument("--config", type=str, default=None,
                        help="JSON document of flag defaults")


def _add_params(parser: _Parser) -> None:
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--a", type=float, default=0.0)
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--beta", type=float, default=0.0)


def _build_parser() -> _Parser:
    parser = _Parser(prog="baskakov-stancu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the operator at one point")
    _add_params(p_eval)
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--fn", type=str, required=True)
    _add_common(p_eval)

    p_audit = sub.add_parser("audit", help="audit the moment identity catalog")
    p_audit.add_argument("--grid", type=str, default="default",
                         choices=sorted(AUDIT_GRIDS))
    p_audit.add_argument("--tolerance", type=float, default=None)
    p_audit.add_argument("--out", type=str, required=True)
    _add_common(p_audit)

    p_conv = sub.add_parser("converge", help="convergence table over an n-ladder")
    p_conv.add_argument("--a", type=float, default=0.0)
    p_conv.add_argument("--alpha", type=float, default=0.0)
    p_conv.add_argument("--beta", type=float, default=0.0)
    p_conv.add_argument("--x", type=float, required=True)
    p_conv.add_argument("--fn", type=str, required=True)
    p_conv.add_argument("--n-ladder", type=str, required=True,
                        help="comma list, e.g. 16,32,64")
    p_conv.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_conv.add_argument("--window", type=str, default=None,
                        help="upper or upper:grid_points")
    p_conv.add_argument("--out", type=str, required=True)
    p_conv.add_argument("--render", action="store_true",
                        help="also render a PNG of n_times_error vs n")
    _add_common(p_conv)

    p_plot = sub.add_parser("plotdata", help="extract plot series from a report")
    p_plot.add_argument("--in", dest="infile", type=str, required=True,
                        help="CSV from converge or JSON from audit")
    p_plot.add_argument("--series", type=str, required=True,
                        help="comma list of column names")
    p_plot.add_argument("--out", type=str, required=True,
                        help="output prefix for <prefix>_<series>.dat")
    p_plot.add_argument("--no-render", action="store_true",
                        help="skip the companion PNG figures")
    return parser


def _parse_ladder(text: str) -> list[int]:
    try:
        ladder = [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError as err:
        raise UsageError(f"bad n-ladder entry in '{text}'") from err
    if not ladder:
        raise UsageError("n-ladder must be non-empty")
    if any(n < 1 for n in ladder):
        raise UsageError("n-ladder entries must be positive")
    return ladder


def _parse_window(text: str | None) -> Window | None:
    if text is None:
        return None
    upper, _, points = text.partition(":")
    try:
        if points:
            return Window(upper=float(upper), grid_points=int(points))
        return Window(upper=float(upper))
    except ValueError as err:
        raise UsageError(f"bad window '{text}'") from err


def _policy(args: argparse.Namespace) -> TruncationPolicy:
    try:
        return TruncationPolicy(
            mass_epsilon=args.mass_eps,
            term_epsilon=args.term_eps,
            k_max=args.k_max,
        )
    except ValueError as err:
        raise UsageError(str(err)) from err


def _params(args: argparse.Namespace, n: int | None = None) -> OperatorParams:
    try:
        return OperatorParams(
            n=n if n is not None else args.n,
            a=args.a,
            alpha=args.alpha,
            beta=args.beta,
        )
    except ValueError as err:
        raise UsageError(str(err)) from err


def _policy_config(policy: TruncationPolicy) -> dict:
    return {
        "mass_eps": policy.mass_epsilon,
        "term_eps": policy.term_epsilon,
        "consecutive_small": policy.consecutive_small,
        "k_max": policy.k_max,
    }


def _cmd_eval(args: argparse.Namespace) -> int:
    params = _params(args)
    policy = _policy(args)
    fn = parse_function(args.fn)
    try:
        result = apply(params, fn, _nonneg_x(args.x), policy)
    except NonConvergenceError as err:
        r = err.result
        print(
            f"value={fmt_float(r.value)} terms_used={r.terms_used} "
            f"mass_covered={fmt_float(r.mass_covered)} truncated=true",
            file=sys.stderr,
        )
        return EXIT_NONCONVERGENCE
    print(
        f"value={fmt_float(result.value)} terms_used={result.terms_used} "
        f"mass_covered={fmt_float(result.mass_covered)}"
    )
    return EXIT_OK


def _nonneg_x(x: float) -> float:
    if x < 0:
        raise UsageError("x must be non-negative")
    return x


def _audit_entries(grid: dict):
    """(lemma_id, params, x) triples for one grid preset, fixed order."""
    for lemma_id in LEMMA_IDS:
        if lemma_id.startswith("2.1."):
            for n in grid["n"]:
                for a in grid["a"]:
                    for x in grid["x"]:
                        yield lemma_id, OperatorParams(n=n, a=a), x
        elif lemma_id.startswith(("2.2.", "2.3.")):
            for n in grid["n"]:
                for a in grid["a"]:
                    for alpha, beta in grid["shifts"]:
                        for x in grid["x"]:
                            yield lemma_id, OperatorParams(n, a, alpha, beta), x
        else:
            for a, alpha, beta in grid["limit_families"]:
                for x in grid["limit_x"]:
                    base = grid.get("limit_ladder", LIMIT_LADDER)[0]
                    yield lemma_id, OperatorParams(base, a, alpha, beta), x


def _cmd_audit(args: argparse.Namespace) -> int:
    policy = _policy(args)
    grid = AUDIT_GRIDS[args.grid]
    ladder = grid.get("limit_ladder", LIMIT_LADDER)
    entries = list(_audit_entries(grid))
    if not entries:
        raise UsageError(f"grid preset '{args.grid}' is empty")

    reports = []
    unexpected = 0
    for lemma_id, params, x in entries:
        report = audit_lemma(
            lemma_id, params, x,
            policy=policy, tolerance=args.tolerance, ladder=ladder,
        )
        if report.verdict != "match" and lemma_id not in SUSPECT_IDS:
            unexpected += 1
        reports.append(
            {
                "lemma_id": report.lemma_id,
                "params": {
                    "n": report.params.n,
                    "a": report.params.a,
                    "alpha": report.params.alpha,
                    "beta": report.params.beta,
                },
                "x": report.x,
                "printed_value": report.printed_value,
                "oracle_value": report.oracle_value,
                "derived_value": report.derived_value,
                "abs_diff": report.abs_diff,
                "rel_diff": report.rel_diff,
                "verdict": report.verdict,
                "extrapolants": (
                    None if report.extrapolants is None
                    else list(report.extrapolants)
                ),
            }
        )

    document = {
        "config": {
            "command": "audit",
            "grid": args.grid,
            "tolerance": args.tolerance,
            "limit_ladder": list(ladder),
            "suspect_ids": sorted(SUSPECT_IDS),
            **_policy_config(policy),
        },
        "reports": reports,
    }
    try:
        write_json(args.out, document)
    except OSError as err:
        print(f"cannot write '{args.out}': {err}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(reports)} reports to {args.out} "
          f"({unexpected} unexpected discrepancies)")
    return EXIT_DISCREPANCY if unexpected else EXIT_OK


CONVERGE_COLUMNS = (
    "n", "Lf", "f", "abs_error", "n_times_error",
    "voronovskaya_target", "bound_thm31", "bound_thm32",
)


def _cmd_converge(args: argparse.Namespace) -> int:
    policy = _policy(args)
    fn = parse_function(args.fn)
    x = _nonneg_x(args.x)
    ladder = _parse_ladder(args.n_ladder)
    window = _parse_window(args.window)

    if fn.d1 is not None and fn.d2 is not None:
        target = voronovskaya_target(args.a, args.alpha, args.beta, fn, x)
    else:
        target = float("nan")

    rows = []
    try:
        for n in ladder:
            params = _params(args, n=n)
            win = window or default_window(params, x)
            value = apply(params, fn, x, policy).value
            centered = apply_centered(params, fn, x, policy).value
            b31 = bound_thm31(params, fn, x, win, policy).rhs
            try:
                b32 = bound_thm32(params, fn, x, win, policy).rhs
            except ValueError:
                b32 = float("nan")
            fx = float(fn(x))
            rows.append(
                (n, value, fx, abs(centered), n * centered, target, b31, b32)
            )
    except NonConvergenceError as err:
        print(f"series not converged: {err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE

    config = {
        "command": "converge",
        "fn": fn.label,
        "a": args.a,
        "alpha": args.alpha,
        "beta": args.beta,
        "x": x,
        "n_ladder": args.n_ladder,
        "lambda": args.lam,
        "window": args.window if args.window is not None else "auto",
        **_policy_config(policy),
    }
    try:
        write_csv(args.out, config, CONVERGE_COLUMNS, rows)
        if args.render:
            render_figure(
                str(args.out) + ".png",
                [row[0] for row in rows],
                [row[4] for row in rows],
                xlabel="n",
                ylabel="n_times_error",
                title=f"{fn.label} at x={fmt_float(x)}",
                logx=len(rows) > 2,
            )
    except OSError as err:
        print(f"cannot write '{args.out}': {err}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _read_csv_columns(path: Path) -> dict[str, list[float]]:
    lines = [
        line for line in path.read_text(encoding="utf-8").splitlines()
        if line and not line.startswith("#")
    ]
    if not lines:
        raise UsageError(f"no data rows in '{path}'")
    header = lines[0].split(",")
    if len(lines) == 1:
        raise UsageError(f"no data rows in '{path}'")
    columns: dict[str, list[float]] = {name: [] for name in header}
    for line in lines[1:]:
        for name, cell in zip(header, line.split(",")):
            try:
                columns[name].append(float(cell))
            except ValueError:
                columns[name].append(float("nan"))
    return columns


def _read_audit_columns(path: Path) -> dict[str, list[float]]:
    document = json.loads(path.read_text(encoding="utf-8"))
    reports = document.get("reports", [])
    if not reports:
        raise UsageError(f"no reports in '{path}'")
    numeric = ("printed_value", "oracle_value", "derived_value",
               "abs_diff", "rel_diff", "x")
    columns: dict[str, list[float]] = {"index": []}
    for name in numeric:
        columns[name] = []
    for i, report in enumerate(reports):
        columns["index"].append(float(i))
        for name in numeric:
            value = report.get(name)
            columns[name].append(float("nan") if value is None else float(value))
    return columns


def _cmd_plotdata(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    if not path.exists():
        print(f"no such input file: {path}", file=sys.stderr)
        return EXIT_IO
    if path.suffix.lower() == ".json":
        columns = _read_audit_columns(path)
        x_name = "index"
    else:
        columns = _read_csv_columns(path)
        x_name = "n" if "n" in columns else next(iter(columns))

    series = [name for name in args.series.split(",") if name]
    if not series:
        raise UsageError("need at least one series name")
    for name in series:
        if name not in columns:
            raise UsageError(
                f"no column '{name}'; available: {', '.join(columns)}"
            )

    xs = columns[x_name]
    written = []
    try:
        for name in series:
            out = Path(f"{args.out}_{name}.dat")
            write_dat(out, list(zip(xs, columns[name])))
            written.append(str(out))
            if not args.no_render:
                render_figure(
                    f"{args.out}_{name}.png",
                    xs,
                    columns[name],
                    xlabel=x_name,
                    ylabel=name,
                    logx=x_name == "n" and len(xs) > 2,
                )
    except OSError as err:
        print(f"cannot write plot data: {err}", file=sys.stderr)
        return EXIT_IO
    print("wrote " + " ".join(written))
    return EXIT_OK


def _merge_config_file(argv: list[str]) -> list[str]:
    """Prepend flag defaults from a --config JSON document.

    Keys mirror flag names (lambda for --lambda); values given explicitly
    on the command line override the document.
    """
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise UsageError("--config needs a file path")
    path = Path(argv[idx + 1])
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise UsageError(f"cannot read config '{path}': {err}") from err
    except json.JSONDecodeError as err:
        raise UsageError(f"bad JSON in config '{path}': {err}") from err
    if not isinstance(document, dict):
        raise UsageError(f"config '{path}' must be a JSON object")
    flag_map = {"lambda": "--lambda", "n_ladder": "--n-ladder",
                "mass_eps": "--mass-eps", "term_eps": "--term-eps",
                "k_max": "--k-max"}
    skip = ("command", "consecutive_small", "suspect_ids", "limit_ladder")
    injected: list[str] = []
    for key, value in document.items():
        if key in skip or value is None:
            continue
        if key == "window" and value == "auto":
            continue
        flag = flag_map.get(key, "--" + key.replace("_", "-"))
        injected.extend([flag, str(value)])
    # Injected values come first, so explicit command-line flags override
    # them (argparse keeps the last occurrence).
    return injected + argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        if argv and argv[0] in ("eval", "audit", "converge", "plotdata"):
            argv = argv[:1] + _merge_config_file(argv[1:])
        args = parser.parse_args(argv)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "audit":
            return _cmd_audit(args)
        if args.command == "converge":
            return _cmd_converge(args)
        return _cmd_plotdata(args)
    except (UsageError, FunctionDSLError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
