"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 integration failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import sys
from pathlib import Path

from .errors import ConfigurationError, IntegrationError, NormalizationError
from .scenarios import (
    ScenarioConfig,
    builtin_scenarios,
    golden_path,
    parse_config_file,
    run_scenario,
    run_sweep,
    write_table,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvbus",
        description="Single-excitation transfer dynamics between NV-center "
        "ensembles coupled through flux qubits to a shared LC bus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its CSV (and figure)")
    run.add_argument("scenario", nargs="?", help="built-in scenario id (see 'list')")
    run.add_argument("--config", type=Path, help="scenario config file instead of an id")
    run.add_argument("--out", type=Path, help="output CSV path (default <id>.csv)")
    run.add_argument("--samples", type=int, help="override output sample count")
    run.add_argument("--t-end", type=float, dest="t_end", help="override t_end (units of 1/J1)")
    run.add_argument("--jobs", type=int, default=1, help="parallel jobs for --regen-golden")
    run.add_argument(
        "--regen-golden",
        action="store_true",
        help="regenerate every built-in golden CSV in the installed package",
    )
    run.add_argument(
        "--plot",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render a PNG figure next to the CSV (default on)",
    )

    sweep = sub.add_parser("sweep", help="re-run a scenario over a parameter axis")
    sweep.add_argument("scenario", nargs="?", help="built-in scenario id")
    sweep.add_argument("--config", type=Path, help="scenario config file instead of an id")
    sweep.add_argument("--axis", required=True, help="scenario field to sweep (e.g. g, J, lam)")
    sweep.add_argument("--values", required=True, help="comma-separated numeric values")
    sweep.add_argument("--outdir", type=Path, default=Path("sweep"), help="output directory")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument(
        "--plot", action=argparse.BooleanOptionalAction, default=False,
        help="also render a PNG per sweep point",
    )

    sub.add_parser("list", help="list built-in scenarios")
    return parser


def _resolve_config(args) -> ScenarioConfig:
    if args.config is not None:
        cfg = parse_config_file(args.config)
    elif args.scenario:
        catalog = builtin_scenarios()
        if args.scenario not in catalog:
            raise ConfigurationError(
                f"unknown scenario {args.scenario!r}; run 'nvbus list' for the catalog"
            )
        cfg = catalog[args.scenario]
    else:
        raise ConfigurationError("provide a scenario id or --config PATH")
    overrides = {}
    if getattr(args, "samples", None) is not None:
        overrides["samples"] = args.samples
    if getattr(args, "t_end", None) is not None:
        overrides["t_end"] = args.t_end
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _regen_golden(jobs: int) -> int:
    catalog = builtin_scenarios()

    def one(item):
        sid, cfg = item
        table = run_scenario(cfg)
        write_table(table, golden_path(sid))
        return sid

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            for sid in pool.map(one, catalog.items()):
                print(f"regenerated {golden_path(sid)}")
    else:
        for item in catalog.items():
            sid = one(item)
            print(f"regenerated {golden_path(sid)}")
    return EXIT_OK


def _cmd_run(args) -> int:
    if args.regen_golden:
        return _regen_golden(args.jobs)
    cfg = _resolve_config(args)
    table = run_scenario(cfg)
    out = args.out or Path(f"{cfg.scenario_id or 'scenario'}.csv")
    write_table(table, out)
    print(f"wrote {out}")
    if args.plot:
        from .plotting import plot_table

        png = out.with_suffix(".png")
        plot_table(table, png, title=cfg.scenario_id)
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _resolve_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse --values {args.values!r}") from None
    tables, summary = run_sweep(cfg, args.axis, values, jobs=args.jobs)
    base = cfg.scenario_id or "scenario"
    for v, table in zip(values, tables):
        out = args.outdir / f"{base}_{args.axis}_{v:g}.csv"
        write_table(table, out)
        print(f"wrote {out}")
        if args.plot:
            from .plotting import plot_table

            plot_table(table, out.with_suffix(".png"), title=f"{base} {args.axis}={v:g}")
    if summary is not None:
        out = args.outdir / f"{base}_{args.axis}_summary.csv"
        write_table(summary, out)
        print(f"wrote {out}")
    return EXIT_OK


def _cmd_list(_args) -> int:
    for sid in builtin_scenarios():
        print(sid)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "sweep": _cmd_sweep, "list": _cmd_list}
    try:
        return handlers[args.command](args)
    except (ConfigurationError, NormalizationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        note = f" (reached t = {exc.t_reached:g}; partial output discarded)" if exc.t_reached else ""
        print(f"integration failure: {exc}{note}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
