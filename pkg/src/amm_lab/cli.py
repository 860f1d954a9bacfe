"""Command-line front end of the AMM laboratory.

Every subcommand writes machine-readable output (CSV or JSON) to stdout or
to files; status lines and errors go to stderr. The exit code is 0 on
success, 1 when the engines reject the request and 2 on usage errors.
"""

import csv
import json
import os
import sys

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from math import isfinite
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .analytics import (
    depth_curve,
    il_curve,
    impact_curve,
    measured_depth_loss,
    measured_impermanent_loss,
    measured_price_impact,
)
from .cfmm import quote_input_for_exact_output, swap
from .errors import AMMError, InvalidPoolError, exit_code_for
from .invariants import PricingRule, derive_curve
from .sim import (
    SimConfig,
    run_simulation,
    run_volatility_sweep,
    write_events_jsonl,
    write_summary_csv,
)
from .token_swap import intermediary_input_for_output, swap_via_intermediary
from .types import PoolKind, PoolState, SwapQuote, TokenSwapState
from .utils.console import ConsoleReporter, EventPrinter, format_number, reporter
from .utils.timing import timing
from .version import __version__

__all__ = ("load_pool", "main")


#: Environment variable holding the default output directory of `simulate`
OUTPUT_DIR_ENV_VAR = "AMM_LAB_OUTPUT_DIR"

#: Default grid of reserve fractions for the impact and depth curves
DEFAULT_FRACTIONS = (0.01,) + tuple(round(0.05 * i, 2) for i in range(1, 20))

#: Default grid of price ratios for the impermanent loss curve
DEFAULT_XIS = (0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0)


def load_pool(path: Union[str, Path]) -> Union[PoolState, TokenSwapState]:
    """Loads a market maker description from a JSON file.

    Constant function pools are recognized by their ``reserves`` list,
    token swap states by their ``supply`` key.

    Raises:
        InvalidPoolError: if the file describes neither
        ValueError: if the file is not valid JSON
    """
    with open(path, encoding="utf-8") as fp:
        obj = json.load(fp)

    if isinstance(obj, dict):
        if "reserves" in obj:
            return PoolState.from_json(obj)
        if "supply" in obj:
            return TokenSwapState.from_json(obj)
    raise InvalidPoolError(f"{path}: not a pool or token swap description")


def _trade(value: str) -> Tuple[str, float]:
    asset, sep, amount = value.rpartition("=")
    if not sep or not asset:
        raise ArgumentTypeError(f"expected <asset>=<amount>, got {value!r}")
    try:
        number = float(amount)
    except ValueError:
        raise ArgumentTypeError(f"invalid amount: {amount!r}") from None
    if not (number > 0 and isfinite(number)):
        raise ArgumentTypeError(f"amount must be positive, got {amount!r}")
    return asset, number


def _float_list(value: str) -> List[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def _write_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    path: Optional[str] = None,
) -> None:
    fp = open(path, "w", encoding="utf-8", newline="") if path else sys.stdout
    try:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(value) for value in row])
    finally:
        if path:
            fp.close()


def _quote_cfmm(pool: PoolState, args: Namespace) -> SwapQuote:
    if args.sell:
        asset, amount = args.sell
        return swap(pool, asset, amount, args.counter_asset)

    asset, amount = args.buy
    input_asset = args.counter_asset or pool.other_asset(asset)
    paid = quote_input_for_exact_output(pool, asset, amount, input_asset)
    return swap(pool, input_asset, paid, asset)


def _quote_token_swap(state: TokenSwapState, args: Namespace) -> SwapQuote:
    if args.sell:
        asset, amount = args.sell
        return swap_via_intermediary(state, state.side_of(asset), amount)

    asset, amount = args.buy
    side = state.side_of(asset)
    paid = intermediary_input_for_output(state, side, amount)
    return swap_via_intermediary(state, side.other, paid)


def quote(args: Namespace) -> int:
    market = load_pool(args.pool)
    if isinstance(market, TokenSwapState):
        result = _quote_token_swap(market, args)
    else:
        result = _quote_cfmm(market, args)

    if args.json:
        print(json.dumps(result.to_json(), indent=2, sort_keys=True))
    else:
        ConsoleReporter(sys.stdout).quote(result)
    return 0


def _pricing_rule(args: Namespace) -> PricingRule:
    if args.pool:
        pool = load_pool(args.pool)
        if not isinstance(pool, PoolState):
            raise InvalidPoolError("pricing rules can only be taken from pools")
        return PricingRule.from_pool(pool)
    if args.rule == "constant":
        return PricingRule.constant(args.price)
    if args.rule == "weighted":
        return PricingRule.weighted_ratio(*args.weights)
    return PricingRule.ratio()


def derive_invariant(args: Namespace) -> int:
    rule = _pricing_rule(args)
    x0, y0 = args.start
    sample = derive_curve(
        rule, (x0, y0), args.x_end, steps=args.steps, strict=args.strict
    )
    if sample.domain_exit:
        reporter.warn(
            f"curve left the positive quadrant at x = {float(sample.xs[-1])!r}"
        )

    _write_csv(
        ("x", "y", "implied_price"),
        zip(sample.xs.tolist(), sample.ys.tolist(), sample.prices.tolist()),
        args.out,
    )
    return 0


def _measuring_pool(args: Namespace) -> Optional[PoolState]:
    if not args.pool:
        return None
    pool = load_pool(args.pool)
    if not isinstance(pool, PoolState) or pool.kind is not PoolKind.CONSTANT_PRODUCT:
        raise InvalidPoolError("measured curves need a constant product pool")
    return pool


def il_curve_command(args: Namespace) -> int:
    reports = il_curve(args.xi, args.gamma)
    pool = _measuring_pool(args)
    columns = ["xi", "gamma", "pct_loss"]
    rows: List[List[Any]] = [
        [report.xi, report.gamma.gamma, report.pct_loss] for report in reports
    ]
    if pool is not None:
        columns.append("measured_pct_loss")
        for row, report in zip(rows, reports):
            row.append(measured_impermanent_loss(pool, report.xi))
    _write_csv(columns, rows, args.out)
    return 0


def impact_curve_command(args: Namespace) -> int:
    reports = impact_curve(args.f, args.direction)
    pool = _measuring_pool(args)
    columns = ["f", "direction", "pct_change"]
    rows: List[List[Any]] = [
        [report.f, report.direction.value, report.pct_change] for report in reports
    ]
    if pool is not None:
        columns.append("measured_pct_change")
        for row, report in zip(rows, reports):
            row.append(measured_price_impact(pool, report.f, report.direction))
    _write_csv(columns, rows, args.out)
    return 0


def depth_curve_command(args: Namespace) -> int:
    reports = depth_curve(args.f, args.direction)
    pool = _measuring_pool(args)
    columns = ["f", "direction", "pct_loss"]
    rows: List[List[Any]] = [
        [report.f, report.direction.value, report.pct_loss] for report in reports
    ]
    if pool is not None:
        columns.append("measured_pct_loss")
        for row, report in zip(rows, reports):
            row.append(measured_depth_loss(pool, report.f, report.direction))
    _write_csv(columns, rows, args.out)
    return 0


def _load_config(args: Namespace) -> SimConfig:
    config = SimConfig.from_file(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def simulate(args: Namespace) -> int:
    config = _load_config(args)
    out_dir = Path(args.out or os.environ.get(OUTPUT_DIR_ENV_VAR) or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    observer = EventPrinter(reporter) if args.trace else None
    with timing(f"simulated {config.ticks} ticks"):
        result = run_simulation(config, observer)

    write_events_jsonl(result.events, out_dir / "events.jsonl")
    write_summary_csv(result.summary_rows(), out_dir / "summary.csv")

    summary: Dict[str, Any] = result.summary()
    summary["balance_residuals"] = max(
        (abs(value) for value in summary["balance_residuals"].values()), default=0.0
    )
    reporter.table(summary)
    return 0


def sweep(args: Namespace) -> int:
    config = _load_config(args)
    with timing(f"swept {len(args.sigmas)} volatilities x {args.runs} runs"):
        rows = run_volatility_sweep(config, args.sigmas, args.runs, jobs=args.jobs)
    _write_csv(
        ("sigma", "runs", "mean_abs_il_pct"),
        ((row.sigma, row.runs, row.mean_abs_il_pct) for row in rows),
        args.out,
    )
    return 0


def _add_curve_arguments(parser: ArgumentParser, *, direction: bool) -> None:
    if direction:
        parser.add_argument(
            "--f",
            type=_float_list,
            default=list(DEFAULT_FRACTIONS),
            help="comma-separated reserve fractions",
        )
        parser.add_argument(
            "--direction",
            choices=("buy", "sell"),
            default="buy",
            help="whether the base asset is bought from or sold to the pool",
        )
    parser.add_argument(
        "--pool",
        default=None,
        help="constant product pool to measure the curve on by trading",
    )
    parser.add_argument("--out", default=None, help="CSV file to write")


def create_parser() -> ArgumentParser:
    """Creates the argument parser of the command line front end."""
    parser = ArgumentParser(
        prog="amm-lab", description="Automated market maker microstructure lab"
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("quote", help="quote a swap against a pool")
    p.add_argument("--pool", required=True, help="pool or token swap JSON file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--sell", type=_trade, metavar="ASSET=AMOUNT")
    group.add_argument("--buy", type=_trade, metavar="ASSET=AMOUNT")
    p.add_argument(
        "--with",
        dest="counter_asset",
        default=None,
        metavar="ASSET",
        help="the other asset of the trade; required for pools of 3+ assets",
    )
    p.add_argument("--json", action="store_true", help="print the quote as JSON")
    p.set_defaults(func=quote)

    p = commands.add_parser(
        "derive-invariant", help="integrate a pricing rule into a trading curve"
    )
    p.add_argument(
        "--rule",
        choices=("constant", "ratio", "weighted"),
        default="ratio",
        help="built-in pricing rule",
    )
    p.add_argument("--price", type=float, default=1.0, help="price of the constant rule")
    p.add_argument(
        "--weights",
        type=float,
        nargs=2,
        default=(0.5, 0.5),
        metavar=("W_X", "W_Y"),
        help="weights of the weighted ratio rule",
    )
    p.add_argument(
        "--pool", default=None, help="take the pricing rule from a pool JSON file"
    )
    p.add_argument(
        "--start",
        type=float,
        nargs=2,
        default=(100.0, 100.0),
        metavar=("X0", "Y0"),
    )
    p.add_argument("--x-end", type=float, default=400.0)
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument(
        "--strict",
        action="store_true",
        help="fail instead of truncating when the curve leaves the quadrant",
    )
    p.add_argument("--out", default=None, help="CSV file to write")
    p.set_defaults(func=derive_invariant)

    p = commands.add_parser("il-curve", help="impermanent loss against price ratio")
    p.add_argument(
        "--xi",
        type=_float_list,
        default=list(DEFAULT_XIS),
        help="comma-separated price ratios",
    )
    p.add_argument("--gamma", type=float, default=1.0, help="fee parameter")
    _add_curve_arguments(p, direction=False)
    p.set_defaults(func=il_curve_command)

    p = commands.add_parser("impact-curve", help="price impact against trade size")
    _add_curve_arguments(p, direction=True)
    p.set_defaults(func=impact_curve_command)

    p = commands.add_parser("depth-curve", help="depth loss against trade size")
    _add_curve_arguments(p, direction=True)
    p.set_defaults(func=depth_curve_command)

    p = commands.add_parser("simulate", help="run an agent-based simulation")
    p.add_argument("--config", required=True, help="simulation JSON file")
    p.add_argument(
        "--out",
        default=None,
        help=f"output directory; defaults to ${OUTPUT_DIR_ENV_VAR} or the "
        f"current directory",
    )
    p.add_argument("--seed", type=int, default=None, help="override the seed")
    p.add_argument(
        "--trace", action="store_true", help="print every event to stderr"
    )
    p.set_defaults(func=simulate)

    p = commands.add_parser(
        "sweep", help="mean terminal impermanent loss against volatility"
    )
    p.add_argument("--config", required=True, help="simulation JSON file")
    p.add_argument(
        "--sigmas",
        type=_float_list,
        default=[0.01, 0.05, 0.1],
        help="comma-separated volatilities",
    )
    p.add_argument("--runs", type=int, default=100, help="runs per volatility")
    p.add_argument(
        "--jobs", type=int, default=None, help="maximum number of concurrent runs"
    )
    p.add_argument("--seed", type=int, default=None, help="override the base seed")
    p.add_argument("--out", default=None, help="CSV file to write")
    p.set_defaults(func=sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the command line front end.

    Returns:
        the exit code of the process
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else 2

    try:
        return args.func(args)
    except (AMMError, OSError, ValueError) as ex:
        reporter.error(str(ex))
        return exit_code_for(ex)


if __name__ == "__main__":
    sys.exit(main())
