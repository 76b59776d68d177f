"""Exhaustive check for a perfect cooperative equilibrium.

For each driver the search finds the best utility it can secure when the
others answer with a Nash equilibrium of the remaining game. A profile is
stable under collusion when every driver already earns at least that much.
With identical drivers honest play passes; with different thresholds the
cheap driver does better by copying the expensive one's bid.
"""

from insense import GameConfig, StrategyGrid, check_pce, honest_profile

cases = [
    ("identical drivers", GameConfig(10, 1, [10, 10]), StrategyGrid([10, 15])),
    ("different drivers", GameConfig(20, 1, [10, 20]), StrategyGrid([10, 20])),
]
for title, config, grid in cases:
    print(f"-- {title}")
    print(check_pce(config, honest_profile(config.num_agents), grid).to_text())
    print()
