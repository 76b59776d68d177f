"""Agent behaviour: bidding strategies, acceptance policies, utilities, and
the equilibrium profiles the regret analysis is built on.

Strategies are immutable values and pure functions of
``(agent, round, public history)``, so one profile can be shared by any
number of concurrently simulated games.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConfigurationError
from .mechanism import GameConfig, GameTranscript, RoundOutcome
from .money import MoneyLike, ceil_div, money


@dataclass(frozen=True)
class AgentProfile:
    index: int
    true_threshold: Fraction


def agents_of(config: GameConfig) -> tuple[AgentProfile, ...]:
    return tuple(AgentProfile(m, t) for m, t in enumerate(config.true_thresholds))


# -- bidding ----------------------------------------------------------------


@dataclass(frozen=True)
class Honest:
    """Report the true threshold every round."""

    def bid(self, agent: AgentProfile, round: int, history: Sequence[RoundOutcome]) -> Fraction:
        return agent.true_threshold


@dataclass(frozen=True)
class ConstantBid:
    value: Fraction

    def __init__(self, value: MoneyLike):
        object.__setattr__(self, "value", money(value))

    def bid(self, agent, round, history):
        return self.value


@dataclass(frozen=True)
class OverbidUntil:
    """Bid ``high`` before round ``round``, honestly from then on."""

    round: int
    high: Fraction

    def __init__(self, round: int, high: MoneyLike):
        object.__setattr__(self, "round", round)
        object.__setattr__(self, "high", money(high))

    def bid(self, agent, round, history):
        return self.high if round < self.round else agent.true_threshold


@dataclass(frozen=True)
class ScriptedBids:
    bids: tuple[Fraction, ...]

    def __init__(self, bids: Iterable[MoneyLike]):
        object.__setattr__(self, "bids", tuple(money(b) for b in bids))

    def bid(self, agent, round, history):
        return self.bids[round - 1]


BidStrategy = Union[Honest, ConstantBid, OverbidUntil, ScriptedBids]


# -- acceptance ---------------------------------------------------------------
#
# Policies only express *willingness*; decide_accept() additionally requires
# offer >= true threshold, so no policy can ever accept below it.


@dataclass(frozen=True)
class ThresholdAccept:
    def wants(self, round: int) -> bool:
        return True


@dataclass(frozen=True)
class RejectUntil:
    """Reject every offer before round ``round``, then accept by threshold."""

    round: int

    def wants(self, round: int) -> bool:
        return round >= self.round


@dataclass(frozen=True)
class ScriptedAccept:
    decisions: tuple[bool, ...]

    def __init__(self, decisions: Iterable[bool]):
        object.__setattr__(self, "decisions", tuple(bool(d) for d in decisions))

    def wants(self, round: int) -> bool:
        return self.decisions[round - 1]


AcceptPolicy = Union[ThresholdAccept, RejectUntil, ScriptedAccept]


def make_bid(
    strategy: BidStrategy,
    agent: AgentProfile,
    round: int,
    history: Sequence[RoundOutcome] = (),
) -> Fraction:
    return money(strategy.bid(agent, round, history))


def decide_accept(policy: AcceptPolicy, agent: AgentProfile, offer: Fraction, round: int) -> bool:
    return offer >= agent.true_threshold and policy.wants(round)


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class AgentStrategy:
    bid: BidStrategy = Honest()
    accept: AcceptPolicy = ThresholdAccept()

    def describe(self) -> str:
        return f"{_describe(self.bid)}/{_describe(self.accept)}"


def _describe(obj) -> str:
    if isinstance(obj, Honest):
        return "honest"
    if isinstance(obj, ConstantBid):
        return f"bid {obj.value}"
    if isinstance(obj, OverbidUntil):
        return f"bid {obj.high} until round {obj.round}"
    if isinstance(obj, ScriptedBids):
        return "scripted bids (" + ",".join(str(b) for b in obj.bids) + ")"
    if isinstance(obj, ThresholdAccept):
        return "threshold"
    if isinstance(obj, RejectUntil):
        return f"reject until round {obj.round}"
    if isinstance(obj, ScriptedAccept):
        return "scripted accept (" + "".join("y" if d else "n" for d in obj.decisions) + ")"
    return repr(obj)


@dataclass(frozen=True)
class StrategyProfile:
    strategies: tuple[AgentStrategy, ...]

    def __init__(self, strategies: Iterable[AgentStrategy]):
        object.__setattr__(self, "strategies", tuple(strategies))

    def __len__(self) -> int:
        return len(self.strategies)

    def __getitem__(self, m: int) -> AgentStrategy:
        return self.strategies[m]

    def replace_agent(self, m: int, strategy: AgentStrategy) -> "StrategyProfile":
        items = list(self.strategies)
        items[m] = strategy
        return StrategyProfile(items)

    def validate(self, config: GameConfig) -> None:
        if len(self.strategies) != config.num_agents:
            raise ConfigurationError(
                f"profile has {len(self.strategies)} strategies for {config.num_agents} agents"
            )
        for m, s in enumerate(self.strategies):
            if isinstance(s.bid, ScriptedBids) and len(s.bid.bids) != config.rounds:
                raise ConfigurationError(f"agent {m}: scripted bids need {config.rounds} entries")
            if isinstance(s.accept, ScriptedAccept) and len(s.accept.decisions) != config.rounds:
                raise ConfigurationError(
                    f"agent {m}: scripted decisions need {config.rounds} entries"
                )

    # The two hooks the mechanism's game loop calls.

    def bids(self, config: GameConfig, round: int, history) -> list[Fraction]:
        return [
            make_bid(s.bid, a, round, history)
            for s, a in zip(self.strategies, agents_of(config))
        ]

    def accept(self, config: GameConfig, agent: int, offer: Fraction, round: int) -> bool:
        profile = AgentProfile(agent, config.true_thresholds[agent])
        return decide_accept(self.strategies[agent].accept, profile, offer, round)


def honest_profile(num_agents: int) -> StrategyProfile:
    return StrategyProfile([AgentStrategy()] * num_agents)


def constant_profile(values: Sequence[MoneyLike]) -> StrategyProfile:
    return StrategyProfile(AgentStrategy(ConstantBid(v)) for v in values)


# -- utilities ----------------------------------------------------------------


def agent_utility(transcript: GameTranscript, m: int) -> Fraction:
    return sum((o.payments.get(m, Fraction(0)) for o in transcript.outcomes), Fraction(0))


def tasks_taken(transcript: GameTranscript, m: int) -> int:
    return sum(1 for o in transcript.outcomes if m in o.accepted)


def utilities(transcript: GameTranscript) -> tuple[Fraction, ...]:
    return tuple(agent_utility(transcript, m) for m in range(transcript.config.num_agents))


def preference_key(utility: Fraction, tasks: int) -> tuple[Fraction, int]:
    """Larger is better: more money first, then fewer tasks."""
    return (utility, -tasks)


# -- equilibrium profiles -------------------------------------------------------


def equilibrium_profile_homogeneous(config: GameConfig, threshold: MoneyLike | None = None) -> StrategyProfile:
    """Stable profile when every agent shares one threshold.

    Below ``M*N*T`` honest play is already stable. From ``M*N*T`` up every
    agent can be paid every round, and all agents posting ``B/(M*N)`` splits
    the whole budget evenly.
    """
    t = money(threshold) if threshold is not None else config.true_thresholds[0]
    if any(x != t for x in config.true_thresholds):
        raise ConfigurationError("homogeneous profile needs equal true thresholds")
    m, n, b = config.num_agents, config.rounds, config.budget
    if b >= m * n * t:
        return constant_profile([max(t, b / (m * n))] * m)
    return honest_profile(m)


def sorted_agents(config: GameConfig) -> list[int]:
    """Agent indices by ascending true threshold, ties by index."""
    return sorted(range(config.num_agents), key=lambda m: (config.true_thresholds[m], m))


def equilibrium_profile_heterogeneous(config: GameConfig, *, pace_first: bool = False) -> StrategyProfile:
    """Colluding profile matching the budget regime of ``config``.

    Ranks below refer to agents ordered by true threshold ``T_1 <= ... <= T_M``.

    * ``B/N <= T_2``: the cheapest agent bids ``T_2``, everyone else honest.
      With ``pace_first`` it additionally rejects offers until only
      ``ceil(B/T_2)`` rounds remain.
    * ``i*T_{i+1} < B/N <= (i+1)*T_{i+1}``: the cheapest ``i`` agents bid
      ``T_{i+1}``, agent ``i+1`` and the rest honest.
    * ``i*T_i < B/N <= i*T_{i+1}``: the cheapest ``i`` agents bid ``B/(i*N)``.
    * ``B/N > M*T_M``: everyone bids ``B/(M*N)``.
    """
    from .analysis import BoundCase, budget_regime

    case, i = budget_regime(config)
    order = sorted_agents(config)
    t = [config.true_thresholds[m] for m in order]
    n, b, big_m = config.rounds, config.budget, config.num_agents
    by_rank = [AgentStrategy()] * big_m

    if case is BoundCase.BELOW_SECOND:
        accept = ThresholdAccept()
        if pace_first and t[1] > 0:
            takes = min(n, ceil_div(b, t[1]))
            accept = RejectUntil(n - takes + 1)
        by_rank[0] = AgentStrategy(ConstantBid(t[1]), accept)
    elif case is BoundCase.PARTIAL_NEXT:
        for r in range(i):
            by_rank[r] = AgentStrategy(ConstantBid(t[i]))
    elif case is BoundCase.FULL_PREFIX:
        for r in range(i):
            by_rank[r] = AgentStrategy(ConstantBid(b / (i * n)))
    elif case is BoundCase.LARGE_BUDGET:
        by_rank = [AgentStrategy(ConstantBid(b / (big_m * n)))] * big_m

    strategies = [AgentStrategy()] * big_m
    for r, m in enumerate(order):
        strategies[m] = by_rank[r]
    return StrategyProfile(strategies)


def equilibrium_profile(config: GameConfig) -> StrategyProfile:
    if config.is_homogeneous:
        return equilibrium_profile_homogeneous(config)
    return equilibrium_profile_heterogeneous(config)
