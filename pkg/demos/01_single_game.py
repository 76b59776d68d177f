"""Play one game round by round and watch prices settle.

Five drivers with thresholds 20..100 share a budget of 1000 over five rounds.
Every round has a single price, the lowest calibrated value capped by the
remaining budget spread over the remaining rounds. Under honest bidding that
price is the cheapest driver's threshold, so only that driver ever accepts.
The equilibrium profile bids the costlier level and collects far more.
"""

from insense import GameConfig, equilibrium_profile, honest_profile, opt_star, run_game
from insense.experiments import transcript_table

config = GameConfig(budget=1000, rounds=5, true_thresholds=[20, 40, 50, 70, 100])
print(f"optimum with known thresholds: {opt_star(config)} tasks\n")

for name, profile in (("honest", honest_profile(config.num_agents)), ("equilibrium", equilibrium_profile(config))):
    transcript = run_game(config, profile)
    print(f"-- {name}")
    print(transcript_table(transcript))
    print()
