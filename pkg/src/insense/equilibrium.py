"""Exhaustive equilibrium search on small games.

Strategies are restricted to a finite :class:`StrategyGrid`: one constant
bid for the whole game combined with one acceptance policy. Every profile
over the grid is simulated at most once and cached, so a full search costs
``|grid| ** M`` games.

Agents rank outcomes by money first and, at equal money, by fewer tasks
taken. A profile of the other agents is a Nash equilibrium of the subgame
when none of them can move to an outcome it strictly prefers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .agents import (
    AcceptPolicy,
    AgentStrategy,
    ConstantBid,
    StrategyProfile,
    ThresholdAccept,
    preference_key,
    tasks_taken,
    utilities,
)
from .errors import ConfigurationError
from .mechanism import GameConfig, run_game
from .money import MoneyLike, format_money, money

log = logging.getLogger(__name__)

DEFAULT_MAX_PROFILES = 250_000


class SearchTooLarge(ConfigurationError):
    pass


@dataclass(frozen=True)
class StrategyGrid:
    bid_levels: tuple[Fraction, ...]
    accept_policies: tuple[AcceptPolicy, ...] = (ThresholdAccept(),)

    def __init__(self, bid_levels: Iterable[MoneyLike], accept_policies: Iterable[AcceptPolicy] = (ThresholdAccept(),)):
        levels = tuple(money(b) for b in bid_levels)
        policies = tuple(accept_policies)
        if not levels or not policies:
            raise ConfigurationError("strategy grid must be non-empty")
        if any(a >= b for a, b in zip(levels, levels[1:])):
            raise ConfigurationError("bid levels must be strictly ascending")
        object.__setattr__(self, "bid_levels", levels)
        object.__setattr__(self, "accept_policies", policies)

    @property
    def strategies(self) -> tuple[AgentStrategy, ...]:
        return tuple(
            AgentStrategy(ConstantBid(b), p)
            for b in self.bid_levels
            for p in self.accept_policies
        )

    def __len__(self) -> int:
        return len(self.bid_levels) * len(self.accept_policies)


def default_grid(config: GameConfig) -> StrategyGrid:
    """All distinct true thresholds plus ``B/(M*N)`` and ``B/N``."""
    m, n, b = config.num_agents, config.rounds, config.budget
    levels = set(config.true_thresholds) | {b / (m * n), b / n}
    return StrategyGrid(sorted(levels))


@dataclass(frozen=True)
class Deviation:
    agent: int
    strategy: AgentStrategy
    utility: Fraction
    others: Optional[StrategyProfile] = None


@dataclass(frozen=True)
class EquilibriumReport:
    profile: StrategyProfile
    utilities: tuple[Fraction, ...]
    best_utilities: tuple[Fraction, ...]
    witness: Optional[Deviation] = None
    config: Optional[GameConfig] = field(default=None, compare=False)

    @property
    def is_pce(self) -> bool:
        return all(u >= best for u, best in zip(self.utilities, self.best_utilities))

    def to_text(self) -> str:
        lines = []
        if self.config is not None:
            c = self.config
            lines.append(
                f"B={format_money(c.budget)} N={c.rounds} M={c.num_agents} "
                f"T*=({', '.join(format_money(t) for t in c.true_thresholds)})"
            )
        lines.append(f"{'agent':>5}  {'strategy':<28} {'U_i':>10} {'U*_i':>10}  ok")
        for m, (s, u, best) in enumerate(zip(self.profile, self.utilities, self.best_utilities)):
            ok = "yes" if u >= best else "NO"
            lines.append(
                f"{m + 1:>5}  {s.describe():<28} {format_money(u):>10} {format_money(best):>10}  {ok}"
            )
        lines.append(f"perfect cooperative equilibrium: {'yes' if self.is_pce else 'no'}")
        if self.witness is not None:
            w = self.witness
            lines.append(
                f"witness: agent {w.agent + 1} playing {w.strategy.describe()} "
                f"earns {format_money(w.utility)}"
            )
            if w.others is not None:
                others = ", ".join(
                    f"{k + 1}: {s.describe()}" for k, s in enumerate(w.others) if k != w.agent
                )
                lines.append(f"  against equilibrium replies {others}")
        return "\n".join(lines)


class _Outcomes:
    """Memoised (utilities, tasks) for profiles over a fixed strategy list."""

    def __init__(self, config: GameConfig, strategies: Sequence[AgentStrategy]):
        self.config = config
        self.strategies = list(strategies)
        self._cache: dict[tuple, tuple[tuple[Fraction, ...], tuple[int, ...]]] = {}

    def __call__(self, picks: tuple) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
        hit = self._cache.get(picks)
        if hit is None:
            profile = StrategyProfile(self._resolve(p) for p in picks)
            tr = run_game(self.config, profile)
            hit = (utilities(tr), tuple(tasks_taken(tr, m) for m in range(len(picks))))
            self._cache[picks] = hit
        return hit

    def _resolve(self, pick) -> AgentStrategy:
        return pick if isinstance(pick, AgentStrategy) else self.strategies[pick]


def evaluate_profile(config: GameConfig, profile: StrategyProfile) -> tuple[Fraction, ...]:
    return utilities(run_game(config, profile))


def _check_size(config: GameConfig, grid_size: int, max_profiles: int) -> None:
    count = grid_size ** (config.num_agents - 1)
    if count > max_profiles:
        raise SearchTooLarge(
            f"{grid_size}^{config.num_agents - 1} = {count} profiles exceeds limit {max_profiles}"
        )


def _nash_picks(outcomes: _Outcomes, i: int, own, grid_size: int) -> list[tuple]:
    m = outcomes.config.num_agents
    others = [k for k in range(m) if k != i]
    found = []
    for combo in itertools.product(range(grid_size), repeat=m - 1):
        picks = [own] * m
        for k, c in zip(others, combo):
            picks[k] = c
        picks = tuple(picks)
        utils, tasks = outcomes(picks)
        stable = True
        for k in others:
            current = preference_key(utils[k], tasks[k])
            for alt in range(grid_size):
                if alt == picks[k]:
                    continue
                dev = list(picks)
                dev[k] = alt
                du, dt = outcomes(tuple(dev))
                if preference_key(du[k], dt[k]) > current:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(picks)
    return found


def subgame_nash(
    config: GameConfig,
    i: int,
    s_i: AgentStrategy,
    grid: StrategyGrid,
    *,
    max_profiles: int = DEFAULT_MAX_PROFILES,
    _outcomes: Optional[_Outcomes] = None,
) -> list[StrategyProfile]:
    """Pure Nash equilibria of the others when agent ``i`` commits to ``s_i``.

    Each result is a full profile; position ``i`` always holds ``s_i``.
    """
    strategies = grid.strategies
    _check_size(config, len(strategies), max_profiles)
    outcomes = _outcomes or _Outcomes(config, strategies)
    own = strategies.index(s_i) if s_i in strategies else s_i
    return [
        StrategyProfile(outcomes._resolve(p) for p in picks)
        for picks in _nash_picks(outcomes, i, own, len(strategies))
    ]


def _best(config: GameConfig, i: int, grid: StrategyGrid, max_profiles: int, outcomes: Optional[_Outcomes] = None):
    strategies = grid.strategies
    _check_size(config, len(strategies), max_profiles)
    outcomes = outcomes or _Outcomes(config, strategies)
    best_u: Optional[Fraction] = None
    best_at: Optional[tuple] = None
    for own in range(len(strategies)):
        equilibria = _nash_picks(outcomes, i, own, len(strategies))
        if not equilibria:
            log.info("agent %d strategy %s: subgame has no pure equilibrium", i, strategies[own].describe())
            continue
        for picks in equilibria:
            u = outcomes(picks)[0][i]
            if best_u is None or u > best_u:
                best_u, best_at = u, picks
    if best_u is None:
        log.warning("agent %d: no subgame has a pure equilibrium; best utility taken as 0", i)
        return Fraction(0), None, outcomes
    return best_u, best_at, outcomes


def best_utility(config: GameConfig, i: int, grid: StrategyGrid, *, max_profiles: int = DEFAULT_MAX_PROFILES) -> Fraction:
    """Highest utility agent ``i`` can secure when the others answer with a
    Nash equilibrium of the induced subgame."""
    return _best(config, i, grid, max_profiles)[0]


def check_pce(
    config: GameConfig,
    profile: StrategyProfile,
    grid: Optional[StrategyGrid] = None,
    *,
    max_profiles: int = DEFAULT_MAX_PROFILES,
) -> EquilibriumReport:
    grid = grid or default_grid(config)
    profile.validate(config)
    achieved = evaluate_profile(config, profile)
    outcomes = _Outcomes(config, grid.strategies)
    bests = []
    witness = None
    for i in range(config.num_agents):
        u_star, picks, outcomes = _best(config, i, grid, max_profiles, outcomes)
        bests.append(u_star)
        if witness is None and achieved[i] < u_star and picks is not None:
            others = StrategyProfile(outcomes._resolve(p) for p in picks)
            witness = Deviation(i, others[i], u_star, others)
    return EquilibriumReport(profile, achieved, tuple(bests), witness, config)
