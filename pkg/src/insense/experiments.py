"""Scenario files, surge-rate ingestion and sweep runners.

A scenario is a YAML mapping::

    rounds: 5
    budget: 3000                 # or budget_sweep: {from: 20, to: 3000, step: 20}
    thresholds: [20, 40, 50, 70, 100]
    # or surge: {file: surge.csv, base_fare: 20}
    # or homogeneous: {threshold: 10, agents: 2}
    # or synthetic_surge: {vehicles: 50, low: 1.0, high: 3.0, base_fare: 20}
    profile: equilibrium         # honest | equilibrium | list of per-agent entries
    fleet_sweep: {from: 2, to: 5}   # optional, needs a single budget
    grid: [10, 15]               # optional, bid levels for pce-check
    seed: 0                      # only used by synthetic_surge
    external_reference: 0.4663   # optional, copied verbatim into the summary

Per-agent profile entries look like ``{bid: constant, value: 25, accept:
threshold}``. Bid kinds: ``honest``, ``constant`` (value), ``overbid_until``
(round, high), ``scripted`` (bids). Accept kinds: ``threshold``,
``reject_until`` (round), ``scripted`` (decisions).
"""

from __future__ import annotations

import csv
import io
import random
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional, Sequence, TextIO, Union

import yaml

from .agents import (
    AgentStrategy,
    ConstantBid,
    Honest,
    OverbidUntil,
    RejectUntil,
    ScriptedAccept,
    ScriptedBids,
    StrategyProfile,
    ThresholdAccept,
    equilibrium_profile,
    honest_profile,
)
from .analysis import CSV_FIELDS, RegretReport, mean_fraction, regret_report
from .errors import ConfigurationError
from .mechanism import GameConfig, GameTranscript, run_game
from .money import format_money, money

CSV_HEADER = CSV_FIELDS + ("profile",)
DEFAULT_SWEEP_STEP = 20
SURGE_HEADER = ("vehicle_id", "surge_rate")

ProfileSpec = Union[str, tuple[AgentStrategy, ...]]


class SurgeParseError(ConfigurationError):
    pass


# -- surge files ---------------------------------------------------------------


def ingest_surge(source: Union[str, Path, TextIO], base_fare) -> tuple[Fraction, ...]:
    """Thresholds ``base_fare * surge`` per vehicle, in first-seen order.

    Vehicles listed on several rows get the arithmetic mean of their rates.
    Blank lines and lines starting with ``#`` are ignored.
    """
    fare = money(base_fare)
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return _parse_surge(fh, fare)
    return _parse_surge(source, fare)


def _parse_surge(fh: TextIO, fare: Fraction) -> tuple[Fraction, ...]:
    rates: "OrderedDict[str, list[Fraction]]" = OrderedDict()
    header_seen = False
    for lineno, line in enumerate(fh, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        row = [cell.strip() for cell in next(csv.reader([text]))]
        if not header_seen:
            if tuple(row) != SURGE_HEADER:
                raise SurgeParseError(f"line {lineno}: expected header 'vehicle_id,surge_rate'")
            header_seen = True
            continue
        if len(row) != 2 or not row[0]:
            raise SurgeParseError(f"line {lineno}: expected 'vehicle_id,surge_rate'")
        try:
            rate = Fraction(row[1])
        except (ValueError, ZeroDivisionError):
            raise SurgeParseError(f"line {lineno}: bad surge rate {row[1]!r}") from None
        if rate < 0:
            raise SurgeParseError(f"line {lineno}: negative surge rate {row[1]}")
        rates.setdefault(row[0], []).append(rate)
    if not header_seen:
        raise SurgeParseError("surge file is empty")
    if not rates:
        raise SurgeParseError("surge file has no vehicles")
    return tuple(fare * sum(r) / len(r) for r in rates.values())


def write_synthetic_surge(
    path: Union[str, Path],
    vehicles: int,
    low: float = 1.0,
    high: float = 3.0,
    seed: int = 0,
    samples: int = 1,
) -> Path:
    """Write a SYNTHETIC surge file: rates uniform in ``[low, high]``, two decimals."""
    path = Path(path)
    path.write_text(synthetic_surge_text(vehicles, low, high, seed, samples))
    return path


def synthetic_surge_text(vehicles: int, low=1.0, high=3.0, seed: int = 0, samples: int = 1) -> str:
    rng = random.Random(seed)
    lines = [
        f"# synthetic surge rates: uniform [{low}, {high}], seed {seed}, not real data",
        ",".join(SURGE_HEADER),
    ]
    for _ in range(samples):
        for v in range(1, vehicles + 1):
            lines.append(f"car{v},{rng.uniform(low, high):.2f}")
    return "\n".join(lines) + "\n"


# -- scenarios -----------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    rounds: int
    budgets: tuple[Fraction, ...]
    thresholds: tuple[Fraction, ...]
    profile: ProfileSpec = "equilibrium"
    fleet_sizes: Optional[tuple[int, ...]] = None
    grid: Optional[tuple[Fraction, ...]] = None
    seed: int = 0
    external_reference: Optional[str] = None

    @property
    def profile_name(self) -> str:
        return self.profile if isinstance(self.profile, str) else "explicit"

    def config(self, budget: Fraction, agents: Optional[int] = None) -> GameConfig:
        thresholds = self.thresholds if agents is None else self.thresholds[:agents]
        return GameConfig(budget, self.rounds, thresholds)

    def with_profile(self, profile: ProfileSpec) -> "Scenario":
        return Scenario(
            self.rounds, self.budgets, self.thresholds, profile, self.fleet_sizes,
            self.grid, self.seed, self.external_reference,
        )


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{what} must be an integer, got {value!r}")
    return value


def _money(value: Any, what: str) -> Fraction:
    try:
        return money(value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{what}: {exc}") from None


def _mapping(value: Any, what: str, required: Sequence[str]) -> dict:
    if not isinstance(value, dict):
        raise ConfigurationError(f"{what} must be a mapping")
    missing = [k for k in required if k not in value]
    if missing:
        raise ConfigurationError(f"{what} is missing {', '.join(missing)}")
    return value


def _range(spec: dict, what: str, default_step, convert) -> list:
    start, stop = convert(spec["from"], f"{what}.from"), convert(spec["to"], f"{what}.to")
    step = convert(spec.get("step", default_step), f"{what}.step")
    if step <= 0:
        raise ConfigurationError(f"{what}.step must be positive")
    if stop < start:
        raise ConfigurationError(f"{what}.to is below {what}.from")
    out = []
    value = start
    while value <= stop:
        out.append(value)
        value += step
    return out


def parse_agent_strategy(entry: Any) -> AgentStrategy:
    if isinstance(entry, str):
        entry = {"bid": entry}
    entry = _mapping(entry, "profile entry", ["bid"])
    kind = entry["bid"]
    if kind == "honest":
        bid = Honest()
    elif kind == "constant":
        bid = ConstantBid(_money(entry.get("value"), "constant bid value"))
    elif kind == "overbid_until":
        bid = OverbidUntil(_int(entry.get("round"), "overbid_until round"), _money(entry.get("high"), "overbid_until high"))
    elif kind == "scripted":
        bid = ScriptedBids(_money(b, "scripted bid") for b in entry.get("bids") or [])
    else:
        raise ConfigurationError(f"unknown bid kind {kind!r}")
    kind = entry.get("accept", "threshold")
    if kind == "threshold":
        accept = ThresholdAccept()
    elif kind == "reject_until":
        accept = RejectUntil(_int(entry.get("round"), "reject_until round"))
    elif kind == "scripted":
        accept = ScriptedAccept(entry.get("decisions") or [])
    else:
        raise ConfigurationError(f"unknown accept kind {kind!r}")
    return AgentStrategy(bid, accept)


def parse_scenario(data: Any, base_dir: Union[str, Path] = ".") -> Scenario:
    data = _mapping(data, "scenario", ["rounds"])
    rounds = _int(data["rounds"], "rounds")
    seed = _int(data.get("seed", 0), "seed")

    if ("budget" in data) == ("budget_sweep" in data):
        raise ConfigurationError("give exactly one of budget, budget_sweep")
    if "budget" in data:
        budgets = [_money(data["budget"], "budget")]
    else:
        spec = _mapping(data["budget_sweep"], "budget_sweep", ["from", "to"])
        budgets = _range(spec, "budget_sweep", DEFAULT_SWEEP_STEP, _money)

    sources = [k for k in ("thresholds", "surge", "homogeneous", "synthetic_surge") if k in data]
    if len(sources) != 1:
        raise ConfigurationError(
            "give exactly one threshold source: thresholds, surge, homogeneous, synthetic_surge"
        )
    source = sources[0]
    if source == "thresholds":
        if not isinstance(data["thresholds"], list):
            raise ConfigurationError("thresholds must be a list")
        thresholds = [_money(t, "threshold") for t in data["thresholds"]]
    elif source == "surge":
        spec = _mapping(data["surge"], "surge", ["file", "base_fare"])
        path = Path(base_dir) / spec["file"]
        try:
            thresholds = ingest_surge(path, _money(spec["base_fare"], "base_fare"))
        except OSError as exc:
            raise ConfigurationError(f"cannot read surge file: {exc}") from None
    elif source == "homogeneous":
        spec = _mapping(data["homogeneous"], "homogeneous", ["threshold", "agents"])
        thresholds = [_money(spec["threshold"], "threshold")] * _int(spec["agents"], "agents")
    else:
        spec = _mapping(data["synthetic_surge"], "synthetic_surge", ["vehicles", "base_fare"])
        text = synthetic_surge_text(
            _int(spec["vehicles"], "vehicles"),
            spec.get("low", 1.0), spec.get("high", 3.0), seed, _int(spec.get("samples", 1), "samples"),
        )
        thresholds = ingest_surge(io.StringIO(text), _money(spec["base_fare"], "base_fare"))

    fleet = None
    if "fleet_sweep" in data:
        if len(budgets) != 1:
            raise ConfigurationError("fleet_sweep needs a single budget")
        spec = _mapping(data["fleet_sweep"], "fleet_sweep", ["from", "to"])
        fleet = tuple(_range(spec, "fleet_sweep", 1, _int))
        if fleet[0] < 2:
            raise ConfigurationError("fleet_sweep must start at 2 or more agents")
        if fleet[-1] > len(thresholds):
            raise ConfigurationError(
                f"fleet_sweep needs {fleet[-1]} thresholds, source has {len(thresholds)}"
            )

    raw_profile = data.get("profile", "equilibrium")
    if isinstance(raw_profile, str):
        if raw_profile not in ("honest", "equilibrium"):
            raise ConfigurationError(f"unknown profile {raw_profile!r}")
        profile: ProfileSpec = raw_profile
    elif isinstance(raw_profile, list):
        profile = tuple(parse_agent_strategy(e) for e in raw_profile)
    else:
        raise ConfigurationError("profile must be a name or a list of agent entries")

    grid = None
    if "grid" in data:
        if not isinstance(data["grid"], list):
            raise ConfigurationError("grid must be a list of bid levels")
        grid = tuple(_money(g, "grid level") for g in data["grid"])

    ref = data.get("external_reference")
    scenario = Scenario(
        rounds=rounds,
        budgets=tuple(budgets),
        thresholds=tuple(thresholds),
        profile=profile,
        fleet_sizes=fleet,
        grid=grid,
        seed=seed,
        external_reference=None if ref is None else str(ref),
    )
    # Fail early on anything GameConfig rejects.
    scenario.config(scenario.budgets[0], fleet[0] if fleet else None)
    return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"invalid scenario YAML: {exc}") from None
    return parse_scenario(data, path.parent)


# -- running -------------------------------------------------------------------


def build_profile(config: GameConfig, spec: ProfileSpec) -> StrategyProfile:
    if spec == "honest":
        return honest_profile(config.num_agents)
    if spec == "equilibrium":
        return equilibrium_profile(config)
    profile = StrategyProfile(spec)
    profile.validate(config)
    return profile


def play(config: GameConfig, spec: ProfileSpec) -> tuple[GameTranscript, RegretReport]:
    transcript = run_game(config, build_profile(config, spec))
    return transcript, regret_report(config, transcript)


def _point(args) -> RegretReport:
    config, spec = args
    return play(config, spec)[1]


def _run_points(points: list, jobs: int) -> list[RegretReport]:
    if jobs <= 1 or len(points) < 2:
        return [_point(p) for p in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_point, points, chunksize=max(1, len(points) // (4 * jobs))))


def run_scenario(scenario: Scenario, *, jobs: int = 1) -> list[RegretReport]:
    """One report per budget point, in sweep order."""
    points = [(scenario.config(b), scenario.profile) for b in scenario.budgets]
    return _run_points(points, jobs)


def fleet_sweep(scenario: Scenario, *, jobs: int = 1) -> list[RegretReport]:
    """One report per fleet size, using the first ``M`` thresholds."""
    if not scenario.fleet_sizes:
        raise ConfigurationError("scenario has no fleet_sweep")
    if len(scenario.budgets) != 1:
        raise ConfigurationError("fleet_sweep needs a single budget")
    if scenario.fleet_sizes[-1] > len(scenario.thresholds):
        raise ConfigurationError("not enough thresholds for the requested fleet sizes")
    budget = scenario.budgets[0]
    points = [(scenario.config(budget, m), scenario.profile) for m in scenario.fleet_sizes]
    return _run_points(points, jobs)


def sweep(scenario: Scenario, *, jobs: int = 1) -> list[RegretReport]:
    if scenario.fleet_sizes:
        return fleet_sweep(scenario, jobs=jobs)
    return run_scenario(scenario, jobs=jobs)


def report_rows(reports: Sequence[RegretReport], profile_name: str, *, summary: bool = False,
                external_reference: Optional[str] = None) -> Iterator[dict[str, str]]:
    for r in reports:
        row = r.csv_row()
        row["profile"] = profile_name
        yield row
    if summary and reports:
        first = reports[0].config
        yield {
            "budget": "summary",
            "rounds": str(first.rounds),
            "agents": str(first.num_agents) if len({r.config.num_agents for r in reports}) == 1 else "",
            "opt_star": str(sum(r.opt_star for r in reports)),
            "collected": str(sum(r.collected for r in reports)),
            "regret": str(sum(r.regret for r in reports)),
            "bound": "",
            "bound_case": "mean_fraction",
            "fraction": f"{float(mean_fraction(reports)):.6f}",
            "profile": profile_name,
        }
        if external_reference is not None:
            yield {
                **{k: "" for k in CSV_HEADER},
                "budget": "external_reference",
                "bound_case": "external_reference",
                "fraction": external_reference,
                "profile": "reported",
            }


def write_csv(rows: Iterable[dict[str, str]], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def transcript_table(transcript: GameTranscript) -> str:
    lines = [f"{'round':>5} {'price':>10} {'K':>3}  selected        accepted"]
    for o in transcript.outcomes:
        sel = ",".join(str(m + 1) for m in o.selected) or "-"
        acc = ",".join(str(m + 1) for m in sorted(o.accepted)) or "-"
        lines.append(f"{o.round:>5} {format_money(o.price):>10} {o.capacity:>3}  {sel:<15} {acc}")
    lines.append(
        f"collected {transcript.collected} tasks, paid {format_money(transcript.total_paid)}"
        f" of {format_money(transcript.config.budget)}"
    )
    return "\n".join(lines)
