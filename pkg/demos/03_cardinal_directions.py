"""Driving the car North, South, East, West regardless of its heading.

The body matrix A(x3) stacks the drive, turn and sideways directions as
columns; because they are orthonormal, a = A(x3)^T xdot_d converts any
desired world-frame velocity into an extended command the multiplexer can
realize.  Four runs from heading 1 rad command unit velocities along each
cardinal direction; the car crabs along all of them while its heading keeps
returning to 1.

Run:  python demos/03_cardinal_directions.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from liemux import builtin_scenarios, execute_scenario, mean_velocity

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

fig, ax = plt.subplots(figsize=(6.5, 6.5))
print(f"{'run':16s} {'mean velocity':>22s} {'angle err':>10s} {'heading drift':>14s}")
for scenario in builtin_scenarios()["cardinal"]:
    traj, _ = execute_scenario(scenario)
    v = mean_velocity(traj, 0.0, 10.0)
    want = np.array(scenario.command[:2])
    cosang = v[:2] @ want / (np.linalg.norm(v[:2]) * np.linalg.norm(want))
    ang = np.degrees(np.arccos(np.clip(cosang, -1, 1)))
    drift = abs(traj.states[-1, 2] - 1.0)
    print(
        f"{scenario.name:16s} ({v[0]:+.3f}, {v[1]:+.3f}) m/s "
        f"{ang:9.2f}deg {drift:13.1e}"
    )
    ax.plot(traj.states[:, 0], traj.states[:, 1], lw=0.7, label=scenario.name)

ax.plot(0, 0, "k+", ms=12)
ax.set_aspect("equal")
ax.set_xlabel("east [m]")
ax.set_ylabel("north [m]")
ax.set_title("world-frame cardinal runs from heading 1 rad")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "cardinal_runs.png", dpi=130)
print(f"\nwrote {OUT / 'cardinal_runs.png'}")
