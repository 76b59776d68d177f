"""What overbidding buys, and for whom.

The price each round is the lowest calibrated value, so one driver bidding
high changes nothing while anyone else bids honestly. If every driver
overbids together, budget smoothing caps the price at the remaining budget
over the remaining rounds, and only one driver fits at that price. Ties go
to the lowest index, so driver 1 profits while drivers 2 and 3 end up worse
than under honest play. That imbalance is what pushes them to break ranks.
"""

from insense import AgentStrategy, GameConfig, OverbidUntil, StrategyProfile, honest_profile, run_game, utilities
from insense.experiments import transcript_table

config = GameConfig(budget=200, rounds=4, true_thresholds=[10, 10, 10])
overbid = AgentStrategy(OverbidUntil(round=3, high=500))
honest = honest_profile(3)

runs = {
    "honest": honest,
    "agent 1 overbids for two rounds": honest.replace_agent(0, overbid),
    "everyone overbids for two rounds": StrategyProfile([overbid] * 3),
}
for name, profile in runs.items():
    t = run_game(config, profile)
    us = ", ".join(str(u) for u in utilities(t))
    print(f"{name:34} collected {t.collected:2} tasks, utilities {us}")

print()
print(transcript_table(run_game(config, runs["everyone overbids for two rounds"])))
