"""Analytic oracles over games and transcripts.

Everything here is exact: task counts are integers and money stays rational,
so predicted values can be compared to simulations with ``==``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .mechanism import GameConfig, GameTranscript
from .money import ZERO, ceil_div, floor_div, format_money, money

log = logging.getLogger(__name__)


class BoundCase(enum.Enum):
    BELOW_SECOND = "Case1_BNleT2"
    PARTIAL_NEXT = "Case2_mid"
    FULL_PREFIX = "Case3_iTi"
    LARGE_BUDGET = "Case4_large"
    HOMOGENEOUS = "Homogeneous"
    NONE = "NoBoundApplicable"


CSV_FIELDS = (
    "budget", "rounds", "agents", "opt_star", "collected",
    "regret", "bound", "bound_case", "fraction",
)


@dataclass(frozen=True)
class RegretReport:
    config: GameConfig
    opt_star: int
    collected: int
    bound: Optional[int] = None
    bound_case: BoundCase = BoundCase.NONE

    @property
    def regret(self) -> int:
        return self.opt_star - self.collected

    @property
    def fraction(self) -> Fraction:
        return data_fraction(self)

    def csv_row(self) -> dict[str, str]:
        return {
            "budget": format_money(self.config.budget),
            "rounds": str(self.config.rounds),
            "agents": str(self.config.num_agents),
            "opt_star": str(self.opt_star),
            "collected": str(self.collected),
            "regret": str(self.regret),
            "bound": "" if self.bound is None else str(self.bound),
            "bound_case": self.bound_case.value,
            "fraction": f"{float(self.fraction):.6f}",
        }


def sorted_thresholds(config: GameConfig) -> list[Fraction]:
    return sorted(config.true_thresholds)


def opt_star(config: GameConfig) -> int:
    """Most tasks the budget buys when every threshold is known.

    Each agent sells up to ``N`` identical tasks at its threshold, so buying
    the cheapest tasks first is optimal.
    """
    n = config.rounds
    remaining = config.budget
    count = 0
    for t in sorted_thresholds(config):
        if t == 0:
            count += n
            continue
        k = min(n, floor_div(remaining, t))
        count += k
        remaining -= k * t
        if k < n:
            break
    return count


@dataclass(frozen=True)
class FormulaValue:
    value: Optional[int]
    levels: int
    notes: tuple[str, ...] = ()

    @property
    def defined(self) -> bool:
        return self.value is not None


def opt_star_formula(config: GameConfig) -> FormulaValue:
    """Closed-form optimum ``sum_i min(floor((B - N*sum_{k<=i} T_k) / T_{i+1}), N)``.

    The sum runs over the levels ``i`` whose prefix ``N*sum_{k<=i} T_k`` the
    budget covers, and never past ``i = M-1``: the term at ``i = M`` would
    need a nonexistent ``T_{M+1}``. A zero denominator leaves the value
    undefined.
    """
    t = sorted_thresholds(config)
    n, b, m = config.rounds, config.budget, config.num_agents
    notes: list[str] = []
    total = 0
    prefix = ZERO
    levels = 0
    for i in range(m):
        numerator = b - n * prefix
        if numerator < 0:
            notes.append(f"stopped at i={i}: prefix exceeds budget")
            break
        if t[i] == 0:
            return FormulaValue(None, levels, tuple(notes + [f"T_{i + 1} = 0 at i={i}"]))
        total += min(floor_div(numerator, t[i]), n)
        levels += 1
        prefix += t[i]
    else:
        if b - n * prefix >= 0:
            notes.append(f"term i={m} omitted: T_{m + 1} does not exist")
    return FormulaValue(total, levels, tuple(notes))


def regret(config: GameConfig, transcript: GameTranscript) -> RegretReport:
    return RegretReport(config, opt_star(config), transcript.collected)


def regret_report(config: GameConfig, transcript: GameTranscript) -> RegretReport:
    bound, case = regret_bound(config)
    return RegretReport(config, opt_star(config), transcript.collected, bound, case)


def data_fraction(report: RegretReport) -> Fraction:
    """``collected / opt_star``; 1 when there is nothing to collect."""
    if report.opt_star == 0:
        return Fraction(1)
    return Fraction(report.collected, report.opt_star)


def closed_form_homogeneous_utilities(budget, rounds: int, num_agents: int, threshold) -> tuple[Fraction, ...]:
    """Per-agent earnings of honest play when all thresholds are equal.

    Agents fill up in index order: each takes ``min(N, floor(left / T))``
    tasks at price ``T`` from whatever budget its predecessors left.
    """
    b, t = money(budget), money(threshold)
    if t == 0:
        return (ZERO,) * num_agents
    out = []
    left = b
    for _ in range(num_agents):
        u = min(rounds, floor_div(left, t)) * t
        out.append(u)
        left -= u
    return tuple(out)


def budget_regime(config: GameConfig) -> tuple[BoundCase, int]:
    """Locate ``B/N`` among the threshold breakpoints.

    Returns the case and its level ``i`` (1-based, as in ``T_i``). Checked in
    order: ``B/N <= T_2``, ``B/N > M*T_M``, then for ``i = 1..M-1`` the
    half-open intervals ``(i*T_{i+1}, (i+1)*T_{i+1}]`` and ``(i*T_i, i*T_{i+1}]``.
    """
    t = sorted_thresholds(config)
    m = config.num_agents
    x = config.budget / config.rounds
    if x <= t[1]:
        return BoundCase.BELOW_SECOND, 1
    if x > m * t[m - 1]:
        return BoundCase.LARGE_BUDGET, m
    for i in range(1, m):
        lo, hi = t[i - 1], t[i]  # T_i, T_{i+1}
        if i * hi < x <= (i + 1) * hi:
            return BoundCase.PARTIAL_NEXT, i
        if i * lo < x <= i * hi:
            return BoundCase.FULL_PREFIX, i
    return BoundCase.NONE, 0


def guaranteed_tasks(config: GameConfig) -> tuple[Optional[int], BoundCase]:
    """Tasks the colluding-equilibrium analysis promises for ``config``."""
    case, i = budget_regime(config)
    t = sorted_thresholds(config)
    n, b = config.rounds, config.budget
    if case is BoundCase.BELOW_SECOND:
        if t[1] == 0:
            log.info("no bound: B/N <= T_2 = 0")
            return None, BoundCase.NONE
        return ceil_div(b, t[1]), case
    if case is BoundCase.PARTIAL_NEXT:
        nxt = t[i]
        return i * n + floor_div(b - i * n * nxt, nxt), case
    if case is BoundCase.FULL_PREFIX:
        return i * n, case
    if case is BoundCase.LARGE_BUDGET:
        return config.num_agents * n, case
    log.info("no bound case matches budget %s", b)
    return None, case


def regret_bound(config: GameConfig, *, clamp: bool = True) -> tuple[Optional[int], BoundCase]:
    """Upper bound on equilibrium regret, with the case that produced it.

    Homogeneous games get bound 0. Otherwise the bound is ``OPT*`` minus
    :func:`guaranteed_tasks`. For ``B/N <= T_2`` the promised ``ceil(B/T_2)``
    tasks can exceed ``OPT*`` itself; regret is never negative, so the bound
    is floored at 0 unless ``clamp=False``.
    """
    if config.is_homogeneous:
        return 0, BoundCase.HOMOGENEOUS
    guaranteed, case = guaranteed_tasks(config)
    if guaranteed is None:
        return None, case
    bound = opt_star(config) - guaranteed
    if clamp and bound < 0:
        log.debug("raw bound %d floored at 0 for %s", bound, config)
        bound = 0
    return bound, case


def selection_nondecreasing(transcript: GameTranscript) -> bool:
    """True iff no round selects more agents than the round after it."""
    sizes = transcript.selection_sizes
    return all(a <= b for a, b in zip(sizes, sizes[1:]))


def mean_fraction(reports: Sequence[RegretReport]) -> Fraction:
    if not reports:
        return Fraction(1)
    return sum((r.fraction for r in reports), Fraction(0)) / len(reports)
