"""``insense`` command line: simulate, sweep, pce-check, oracle opt-star.

Exit status is 0 on success, 1 for configuration errors and 2 when a
runtime invariant of the mechanism is violated.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Optional, Sequence

from .agents import utilities
from .analysis import opt_star
from .equilibrium import StrategyGrid, check_pce, default_grid
from .errors import ConfigurationError, InvariantViolation
from .experiments import (
    CSV_HEADER,
    Scenario,
    build_profile,
    load_scenario,
    play,
    report_rows,
    sweep,
    transcript_table,
    write_csv,
)
from .money import format_money, money


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _scenario(args) -> Scenario:
    scenario = load_scenario(args.scenario)
    if getattr(args, "profile", None):
        scenario = scenario.with_profile(args.profile)
    return scenario


def cmd_simulate(args) -> int:
    scenario = _scenario(args)
    budget = money(args.budget) if args.budget is not None else scenario.budgets[-1]
    agents = scenario.fleet_sizes[-1] if scenario.fleet_sizes else None
    config = scenario.config(budget, agents)
    transcript, report = play(config, scenario.profile)
    print(transcript_table(transcript))
    print("utilities: " + ", ".join(format_money(u) for u in utilities(transcript)))
    if args.out:
        with _output(args.out) as fh:
            write_csv(report_rows([report], scenario.profile_name), fh)
    else:
        print(f"opt_star {report.opt_star}, regret {report.regret}, bound {report.bound} ({report.bound_case.value})")
    return 0


def cmd_sweep(args) -> int:
    scenario = _scenario(args)
    if args.step is not None:
        if len(scenario.budgets) < 2:
            raise ConfigurationError("--step needs a budget_sweep scenario")
        step = money(args.step)
        if step <= 0:
            raise ConfigurationError("--step must be positive")
        start, stop = scenario.budgets[0], scenario.budgets[-1]
        budgets = []
        b = start
        while b <= stop:
            budgets.append(b)
            b += step
        scenario = Scenario(
            scenario.rounds, tuple(budgets), scenario.thresholds, scenario.profile,
            scenario.fleet_sizes, scenario.grid, scenario.seed, scenario.external_reference,
        )
    reports = sweep(scenario, jobs=args.jobs)
    rows = report_rows(
        reports, scenario.profile_name, summary=not args.no_summary,
        external_reference=scenario.external_reference,
    )
    with _output(args.out) as fh:
        write_csv(rows, fh)
    return 0


def cmd_pce_check(args) -> int:
    scenario = _scenario(args)
    config = scenario.config(scenario.budgets[0], scenario.fleet_sizes[0] if scenario.fleet_sizes else None)
    grid = StrategyGrid(sorted(set(scenario.grid))) if scenario.grid else default_grid(config)
    report = check_pce(config, build_profile(config, scenario.profile), grid, max_profiles=args.max_profiles)
    with _output(args.out) as fh:
        fh.write(report.to_text() + "\n")
    return 0


def cmd_opt_star(args) -> int:
    scenario = load_scenario(args.scenario)
    with _output(args.out) as fh:
        if len(scenario.budgets) == 1 and not scenario.fleet_sizes:
            fh.write(f"{opt_star(scenario.config(scenario.budgets[0]))}\n")
        elif scenario.fleet_sizes:
            fh.write("agents,opt_star\n")
            for m in scenario.fleet_sizes:
                fh.write(f"{m},{opt_star(scenario.config(scenario.budgets[0], m))}\n")
        else:
            fh.write("budget,opt_star\n")
            for b in scenario.budgets:
                fh.write(f"{format_money(b)},{opt_star(scenario.config(b))}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="insense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=True):
        p.add_argument("scenario", help="scenario YAML file")
        p.add_argument("--out", help="output path (default stdout)")
        if profile:
            p.add_argument("--profile", choices=("honest", "equilibrium"), help="override the scenario profile")

    p = sub.add_parser("simulate", help="play one game and print its transcript")
    common(p)
    p.add_argument("--budget", help="budget to play (default: last sweep point)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="budget or fleet sweep to CSV")
    common(p)
    p.add_argument("--step", help="override the budget sweep step")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--no-summary", action="store_true", help="omit the summary row")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pce-check", help="exhaustive perfect cooperative equilibrium check")
    common(p)
    p.add_argument("--max-profiles", type=int, default=250_000)
    p.set_defaults(func=cmd_pce_check)

    p = sub.add_parser("oracle", help="analytic oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    q = osub.add_parser("opt-star", help="optimal task count with known thresholds")
    common(q, profile=False)
    q.set_defaults(func=cmd_opt_star)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
