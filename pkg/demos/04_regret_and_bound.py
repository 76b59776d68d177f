"""Regret under the equilibrium strategies, against the analytic bound.

The optimum packs tasks greedily onto the cheapest drivers. The equilibrium
profile for heterogeneous drivers depends on which budget regime applies;
the bound on the shortfall depends on the same regime.
"""

from insense import GameConfig, budget_regime, equilibrium_profile, opt_star, regret_bound, run_game

thresholds = [20, 40, 50, 70, 100]
print(f"{'budget':>6} {'regime':18} {'opt':>4} {'got':>4} {'regret':>6} {'bound':>5}")
for budget in (60, 300, 700, 1100, 1400, 2000, 3000):
    config = GameConfig(budget, 5, thresholds)
    got = run_game(config, equilibrium_profile(config)).collected
    bound, case = regret_bound(config)
    regime = budget_regime(config)[0].value
    best = opt_star(config)
    print(f"{budget:>6} {regime:18} {best:>4} {got:>4} {best - got:>6} {bound:>5}")
