"""The budget-smoothed, index-biased reverse auction run over ``N`` rounds.

Every round the mechanism

1. lowers each agent's calibrated threshold to ``min(bid, previous)``,
2. prices the round at the minimum of all calibrated thresholds and the
   remaining budget spread evenly over the remaining rounds,
3. picks as many agents as that price can sustain for the rest of the game,
   preferring low thresholds and, at equal thresholds, low indices,
4. offers the price to every selected agent and pays whoever accepts.

All money is exact, so budget feasibility holds to the last unit.
Agents are indexed from 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Protocol, Sequence

from .errors import ConfigurationError, InvariantViolation, ProtocolError
from .money import INF, ZERO, ExtendedMoney, MoneyLike, floor_div, money

__all__ = [
    "GameConfig",
    "MechanismState",
    "RoundOutcome",
    "GameTranscript",
    "new_game",
    "calibrate",
    "compute_price",
    "capacity",
    "select",
    "settle",
    "run_round",
    "run_game",
]


@dataclass(frozen=True)
class GameConfig:
    budget: Fraction
    rounds: int
    true_thresholds: tuple[Fraction, ...]

    def __init__(self, budget: MoneyLike, rounds: int, true_thresholds: Iterable[MoneyLike]):
        try:
            object.__setattr__(self, "budget", money(budget))
            object.__setattr__(
                self, "true_thresholds", tuple(money(t) for t in true_thresholds)
            )
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from exc
        if isinstance(rounds, bool) or not isinstance(rounds, int) or rounds < 1:
            raise ConfigurationError(f"rounds must be an integer >= 1, got {rounds!r}")
        object.__setattr__(self, "rounds", rounds)
        if len(self.true_thresholds) < 2:
            raise ConfigurationError(
                f"need at least 2 agents, got {len(self.true_thresholds)}"
            )

    @property
    def num_agents(self) -> int:
        return len(self.true_thresholds)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.true_thresholds)) == 1

    def with_budget(self, budget: MoneyLike) -> "GameConfig":
        return GameConfig(budget, self.rounds, self.true_thresholds)


@dataclass(frozen=True)
class RoundOutcome:
    round: int
    price: Fraction
    capacity: int
    selected: tuple[int, ...]
    accepted: frozenset[int]
    payments: Mapping[int, Fraction] = field(hash=False)

    @property
    def collected(self) -> int:
        return len(self.accepted)


@dataclass(frozen=True)
class GameTranscript:
    config: GameConfig
    outcomes: tuple[RoundOutcome, ...]
    final_budget_used: Fraction

    @property
    def collected(self) -> int:
        """Number of accepted tasks across all rounds."""
        return sum(o.collected for o in self.outcomes)

    @property
    def total_paid(self) -> Fraction:
        return sum((p for o in self.outcomes for p in o.payments.values()), ZERO)

    @property
    def selection_sizes(self) -> tuple[int, ...]:
        return tuple(len(o.selected) for o in self.outcomes)


@dataclass(frozen=True)
class MechanismState:
    config: GameConfig
    round: int
    budget_used: Fraction
    calibrated: tuple[ExtendedMoney, ...]
    outcomes: tuple[RoundOutcome, ...] = ()

    @property
    def remaining_budget(self) -> Fraction:
        return self.config.budget - self.budget_used

    @property
    def remaining_rounds(self) -> int:
        return self.config.rounds - self.round + 1

    @property
    def finished(self) -> bool:
        return self.round > self.config.rounds

    def transcript(self) -> GameTranscript:
        return GameTranscript(self.config, self.outcomes, self.budget_used)


def new_game(config: GameConfig) -> MechanismState:
    if not isinstance(config, GameConfig):
        raise ConfigurationError("new_game expects a GameConfig")
    return MechanismState(
        config=config,
        round=1,
        budget_used=ZERO,
        calibrated=(INF,) * config.num_agents,
    )


def _check_running(state: MechanismState) -> None:
    if state.finished:
        raise ProtocolError(f"game already finished after round {state.config.rounds}")


def calibrate(state: MechanismState, bids: Sequence[MoneyLike]) -> tuple[ExtendedMoney, ...]:
    """Elementwise ``min(bid, previous calibrated threshold)``."""
    if len(bids) != state.config.num_agents:
        raise ProtocolError(
            f"expected {state.config.num_agents} bids, got {len(bids)}"
        )
    try:
        clean = [money(b) for b in bids]
    except (TypeError, ValueError) as exc:
        raise ProtocolError(f"invalid bid: {exc}") from exc
    return tuple(min(b, prev) for b, prev in zip(clean, state.calibrated))


def compute_price(state: MechanismState, calibrated: Sequence[ExtendedMoney]) -> Fraction:
    _check_running(state)
    smoothed = state.remaining_budget / state.remaining_rounds
    return min(min(calibrated), smoothed)


def capacity(state: MechanismState, price: Fraction) -> int:
    """How many agents the price can sustain for every remaining round, at most M."""
    m = state.config.num_agents
    if price == 0:
        return m
    k = floor_div(state.remaining_budget, price * state.remaining_rounds)
    return max(0, min(k, m))


def select(calibrated: Sequence[ExtendedMoney], k: int) -> tuple[int, ...]:
    if not 0 <= k <= len(calibrated):
        raise ValueError(f"capacity {k} outside [0, {len(calibrated)}]")
    order = sorted(range(len(calibrated)), key=lambda m: (calibrated[m], m))
    return tuple(order[:k])


def settle(
    state: MechanismState,
    price: Fraction,
    selected: Sequence[int],
    acceptances: Iterable[int],
) -> tuple[MechanismState, RoundOutcome]:
    """Pay every accepting agent ``price``, record the round and advance.

    ``state.calibrated`` must already hold this round's calibrated thresholds.
    """
    _check_running(state)
    accepted = frozenset(acceptances)
    if not accepted <= set(selected):
        raise ProtocolError("only selected agents may accept")
    calibrated = list(state.calibrated)
    payments: dict[int, Fraction] = {}
    for m in selected:
        if m in accepted:
            payments[m] = price
            calibrated[m] = price
    budget_used = state.budget_used + price * len(accepted)
    if budget_used > state.config.budget:
        raise InvariantViolation(
            f"round {state.round} would spend {budget_used} of budget {state.config.budget}"
        )
    outcome = RoundOutcome(
        round=state.round,
        price=price,
        capacity=len(selected),
        selected=tuple(selected),
        accepted=accepted,
        payments=payments,
    )
    new_state = replace(
        state,
        round=state.round + 1,
        budget_used=budget_used,
        calibrated=tuple(calibrated),
        outcomes=state.outcomes + (outcome,),
    )
    return new_state, outcome


AcceptDecider = Callable[[int, Fraction, int], bool]


def run_round(
    state: MechanismState,
    bids: Sequence[MoneyLike],
    accept_decider: AcceptDecider,
) -> tuple[MechanismState, RoundOutcome]:
    """Play one full round. ``accept_decider(agent, offer, round)`` is queried
    for each selected agent, in selection order."""
    _check_running(state)
    calibrated = calibrate(state, bids)
    price = compute_price(state, calibrated)
    k = capacity(state, price)
    selected = select(calibrated, k)
    accepted = [m for m in selected if accept_decider(m, price, state.round)]
    return settle(replace(state, calibrated=calibrated), price, selected, accepted)


class Profile(Protocol):
    def bids(
        self, config: GameConfig, round: int, history: tuple[RoundOutcome, ...]
    ) -> Sequence[Fraction]: ...

    def accept(self, config: GameConfig, agent: int, offer: Fraction, round: int) -> bool: ...

    def validate(self, config: GameConfig) -> None: ...


def run_game(config: GameConfig, profile: Profile) -> GameTranscript:
    profile.validate(config)
    state = new_game(config)

    def decider(agent: int, offer: Fraction, rnd: int) -> bool:
        return profile.accept(config, agent, offer, rnd)

    while not state.finished:
        bids = profile.bids(config, state.round, state.outcomes)
        state, _ = run_round(state, bids, decider)
    return state.transcript()
