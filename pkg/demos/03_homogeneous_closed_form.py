"""Honest play among identical drivers matches a closed form.

When every driver has the same threshold T, each driver's utility after
honest play can be written down directly. Here the simulator and the closed
form agree over a range of budgets.
"""

from insense import GameConfig, closed_form_homogeneous_utilities, honest_profile, run_game, utilities

T, M, N = 10, 3, 4
print(f"{'budget':>7}  simulated            closed form")
for budget in range(0, 150, 15):
    config = GameConfig(budget, N, [T] * M)
    sim = utilities(run_game(config, honest_profile(M)))
    ref = closed_form_homogeneous_utilities(budget, N, M, T)
    mark = "" if sim == ref else "  MISMATCH"
    print(f"{budget:>7}  {str([int(u) for u in sim]):20} {str([int(u) for u in ref])}{mark}")
