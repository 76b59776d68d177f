"""Sweep the budget and write a plot-ready CSV.

Loads the bundled five-driver scenario, sweeps the budget from 20 to 3000
in steps of 20 under the equilibrium profile, and prints the mean share of
the optimum collected. The same run is available from the command line as
``insense sweep scenarios/five_vehicle_sweep.yaml``.
"""

import sys
from pathlib import Path

from insense.analysis import mean_fraction
from insense.experiments import load_scenario, report_rows, run_scenario, write_csv

scenario = load_scenario(Path(__file__).resolve().parent.parent / "scenarios" / "five_vehicle_sweep.yaml")
reports = run_scenario(scenario)
print(f"{len(reports)} budgets, mean fraction of optimum {float(mean_fraction(reports)):.4f}")

if "--csv" in sys.argv:
    write_csv(report_rows(reports, scenario.profile_name, summary=True), sys.stdout)
