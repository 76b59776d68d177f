"""Thresholds from surge-rate data, and a sweep over fleet size.

Each driver's threshold is the base fare times its observed surge rate. No
real trace ships with this package, so the demo writes a labelled synthetic
file first, then runs the mechanism on growing prefixes of the fleet.
"""

import tempfile
from pathlib import Path

from insense.experiments import ingest_surge, parse_scenario, fleet_sweep, write_synthetic_surge

with tempfile.TemporaryDirectory() as tmp:
    path = write_synthetic_surge(Path(tmp) / "surge.csv", vehicles=12, seed=7)
    print(path.read_text().splitlines()[0])
    fares = ingest_surge(path, base_fare=20)

print("thresholds:", ", ".join(f"{float(f):.2f}" for f in fares))
scenario = parse_scenario({
    "rounds": 6, "budget": 2000, "thresholds": [str(f) for f in fares],
    "fleet_sweep": {"from": 2, "to": 12, "step": 2},
})
for r in fleet_sweep(scenario):
    print(f"drivers {r.config.num_agents:>2}: collected {r.collected:>3} of {r.opt_star:>3}, {r.bound_case.value}")
