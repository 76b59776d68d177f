"""Collusion-resistant budgeted incentive mechanism for crowd sensing.

Simulation engine, agent strategies, analytic oracles and exhaustive
equilibrium checks.
"""

from .agents import (
    AgentProfile,
    AgentStrategy,
    ConstantBid,
    Honest,
    OverbidUntil,
    RejectUntil,
    ScriptedAccept,
    ScriptedBids,
    StrategyProfile,
    ThresholdAccept,
    agent_utility,
    constant_profile,
    decide_accept,
    equilibrium_profile,
    equilibrium_profile_heterogeneous,
    equilibrium_profile_homogeneous,
    honest_profile,
    make_bid,
    tasks_taken,
    utilities,
)
from .analysis import (
    BoundCase,
    RegretReport,
    budget_regime,
    closed_form_homogeneous_utilities,
    data_fraction,
    opt_star,
    opt_star_formula,
    regret,
    regret_bound,
    regret_report,
    selection_nondecreasing,
)
from .equilibrium import (
    EquilibriumReport,
    StrategyGrid,
    best_utility,
    check_pce,
    default_grid,
    evaluate_profile,
    subgame_nash,
)
from .errors import ConfigurationError, InvariantViolation, ProtocolError
from .mechanism import (
    GameConfig,
    GameTranscript,
    MechanismState,
    RoundOutcome,
    calibrate,
    capacity,
    compute_price,
    new_game,
    run_game,
    run_round,
    select,
    settle,
)
from .money import INF, money

__version__ = "0.1.0"
