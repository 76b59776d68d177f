from fractions import Fraction

import pytest
from hypothesis import given, settings

from insense import (
    AgentProfile,
    ConstantBid,
    GameConfig,
    Honest,
    OverbidUntil,
    RejectUntil,
    ScriptedAccept,
    ScriptedBids,
    ThresholdAccept,
    agent_utility,
    closed_form_homogeneous_utilities,
    decide_accept,
    equilibrium_profile_heterogeneous,
    equilibrium_profile_homogeneous,
    honest_profile,
    make_bid,
    run_game,
    tasks_taken,
    utilities,
)
from insense.agents import AgentStrategy, StrategyProfile
from insense.errors import ConfigurationError

from helpers import configs

AGENT = AgentProfile(0, Fraction(40))


def test_honest_bid():
    assert all(make_bid(Honest(), AGENT, n) == 40 for n in (1, 2, 7))


def test_overbid_until():
    s = OverbidUntil(3, 500)
    assert make_bid(s, AGENT, 2) == 500
    assert make_bid(s, AGENT, 3) == 40


def test_scripted_and_constant_bids():
    assert make_bid(ScriptedBids([20, 20, 30, 10]), AGENT, 3) == 30
    assert make_bid(ConstantBid("12.5"), AGENT, 1) == Fraction(25, 2)


@pytest.mark.parametrize(
    "policy, offer, round, expected",
    [(ThresholdAccept(), 20, 1, False),
     (ThresholdAccept(), 30, 1, True),
     (RejectUntil(3), 50, 2, False),
     (RejectUntil(3), 50, 3, True),
     (ScriptedAccept([True, False]), 50, 2, False)],
)
def test_decide_accept(policy, offer, round, expected):
    t = 10 if isinstance(policy, RejectUntil) else 30
    assert decide_accept(policy, AgentProfile(0, Fraction(t)), Fraction(offer), round) is expected


def test_no_policy_accepts_below_threshold():
    agent = AgentProfile(0, Fraction(30))
    for policy in (ThresholdAccept(), RejectUntil(1), ScriptedAccept([True])):
        assert not decide_accept(policy, agent, Fraction(29), 1)


def test_utilities_and_tasks_on_hand_trace():
    tr = run_game(GameConfig(45, 3, [10, 10]), honest_profile(2))
    assert (agent_utility(tr, 0), agent_utility(tr, 1)) == (30, 10)
    assert (tasks_taken(tr, 0), tasks_taken(tr, 1)) == (3, 1)


def test_never_selected_agent_gets_nothing():
    tr = run_game(GameConfig(10, 1, [10, 10, 10]), honest_profile(3))
    assert agent_utility(tr, 2) == 0 and tasks_taken(tr, 2) == 0


def test_zero_budget_no_tasks():
    tr = run_game(GameConfig(0, 3, [5, 6]), honest_profile(2))
    assert [tasks_taken(tr, m) for m in range(2)] == [0, 0]


def test_large_budget_profile_splits_budget_evenly():
    config = GameConfig(3000, 5, [20, 40, 50, 70, 100])
    tr = run_game(config, equilibrium_profile_heterogeneous(config))
    assert utilities(tr) == (600,) * 5


def test_profile_length_checked():
    with pytest.raises(ConfigurationError):
        run_game(GameConfig(10, 1, [1, 1]), honest_profile(3))


def test_scripted_length_checked():
    profile = StrategyProfile([AgentStrategy(ScriptedBids([1, 2])), AgentStrategy()])
    with pytest.raises(ConfigurationError):
        run_game(GameConfig(10, 3, [1, 1]), profile)


# -- homogeneous equilibrium profile -----------------------------------------------


def _bids(profile):
    return [s.bid for s in profile]


def test_homogeneous_profile_mid_budget_is_honest():
    assert _bids(equilibrium_profile_homogeneous(GameConfig(45, 3, [10, 10]))) == [Honest()] * 2


def test_homogeneous_profile_large_budget_bids_even_share():
    profile = equilibrium_profile_homogeneous(GameConfig(100, 2, [10, 10]))
    assert _bids(profile) == [ConstantBid(25)] * 2


def test_homogeneous_profile_small_budget_is_honest():
    assert _bids(equilibrium_profile_homogeneous(GameConfig(20, 3, [10, 10]))) == [Honest()] * 2


def test_homogeneous_profile_boundary_counts_as_large():
    assert _bids(equilibrium_profile_homogeneous(GameConfig(60, 3, [10, 10]))) == [ConstantBid(10)] * 2


def test_homogeneous_profile_rejects_heterogeneous():
    with pytest.raises(ConfigurationError):
        equilibrium_profile_homogeneous(GameConfig(60, 3, [10, 11]))


# -- heterogeneous equilibrium profile ------------------------------------------------


def test_heterogeneous_small_budget():
    profile = equilibrium_profile_heterogeneous(GameConfig(100, 5, [20, 40]))
    assert _bids(profile) == [ConstantBid(40), Honest()]


def test_heterogeneous_partial_next_level():
    profile = equilibrium_profile_heterogeneous(GameConfig(300, 5, [20, 40]))
    assert _bids(profile) == [ConstantBid(40), Honest()]
    profile = equilibrium_profile_heterogeneous(GameConfig(3 * 5 * 40 - 1, 5, [20, 40, 50, 70]))
    # B/N = 119.8 lies in (2*T_3, 3*T_3] = (100, 150]
    assert _bids(profile) == [ConstantBid(50)] * 2 + [Honest()] * 2


def test_heterogeneous_full_prefix():
    # B/N = 90 lies in (2*T_2, 2*T_3] = (80, 100]
    profile = equilibrium_profile_heterogeneous(GameConfig(450, 5, [20, 40, 50]))
    assert _bids(profile) == [ConstantBid(45), ConstantBid(45), Honest()]


def test_heterogeneous_large_budget():
    profile = equilibrium_profile_heterogeneous(GameConfig(3000, 5, [20, 40, 50, 70, 100]))
    assert _bids(profile) == [ConstantBid(120)] * 5


def test_heterogeneous_profile_follows_threshold_rank_not_index():
    profile = equilibrium_profile_heterogeneous(GameConfig(100, 5, [40, 20]))
    assert _bids(profile) == [Honest(), ConstantBid(40)]


def test_paced_first_agent_rejects_early_rounds():
    profile = equilibrium_profile_heterogeneous(GameConfig(100, 5, [20, 40]), pace_first=True)
    # ceil(100/40) = 3 tasks, so accept from round 3 of 5
    assert profile[0] == AgentStrategy(ConstantBid(40), RejectUntil(3))


# -- properties ------------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(configs())
def test_utilities_sum_to_budget_used(config):
    for profile in (honest_profile(config.num_agents), equilibrium_profile_heterogeneous(config)):
        tr = run_game(config, profile)
        assert sum(utilities(tr)) == tr.final_budget_used


@settings(max_examples=200, deadline=None)
@given(configs())
def test_honest_play_pays_between_threshold_and_bid(config):
    tr = run_game(config, honest_profile(config.num_agents))
    for o in tr.outcomes:
        for m, paid in o.payments.items():
            assert config.true_thresholds[m] <= paid <= config.true_thresholds[m]


@pytest.mark.parametrize("t", [1, 7, 10])
@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_small_homogeneous_budget_goes_to_first_agent(t, m, n):
    for b in range(0, n * t + 1):
        tr = run_game(GameConfig(b, n, [t] * m), honest_profile(m))
        u = utilities(tr)
        assert u[0] == (b // t) * t
        assert all(x == 0 for x in u[1:])
        assert u == closed_form_homogeneous_utilities(b, n, m, t)
