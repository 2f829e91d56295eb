"""Moving the car sideways by multiplexing its two inputs.

Five open-loop runs from x0 = (0, 0, 1), each 10 s with dt = 0.01 and leg
time delta = 0.1.  Commands (+-0.1, 0, 0) drive forward/backward along the
heading; commands (0, 0, +-0.1) demand pure sideways motion, which the
multiplexer realizes as a rapid forward/turn/backward/turn square wave.
All four displaced runs end about 1 m from the origin, tracing a cross
tilted by the initial heading; the (0, 0.1, 0) run spins in place.

Run:  python demos/02_sideways_multiplexing.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from liemux import builtin_scenarios, execute_scenario

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

groups = builtin_scenarios()
runs = {}
for scenario in groups["cross"] + groups["spin"]:
    traj, summary = execute_scenario(scenario)
    runs[scenario.name] = traj
    print(
        f"{scenario.name:20s} command={scenario.command}  "
        f"|displacement|={summary['position_displacement_norm']:.4f}  "
        f"final heading={summary['final_state'][2]:.4f}"
    )

fig, (ax_full, ax_zoom) = plt.subplots(1, 2, figsize=(11, 5.5))
for name, traj in runs.items():
    for ax in (ax_full, ax_zoom):
        ax.plot(traj.states[:, 0], traj.states[:, 1], lw=0.8, label=name)

for ax, lim in ((ax_full, 1.0), (ax_zoom, 0.2)):
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("east [m]")
    ax.set_ylabel("north [m]")
    ax.plot(0, 0, "k+", ms=10)
ax_full.set_title("four bracket-commanded runs: a tilted cross")
ax_zoom.set_title("zoom: the forward/backward stitching")
ax_full.legend(fontsize=7, loc="lower right")

fig.tight_layout()
fig.savefig(OUT / "sideways_cross.png", dpi=130)
print(f"\nwrote {OUT / 'sideways_cross.png'}")

# The lateral runs creep along (sin 1, -cos 1): each 0.4 s cycle nets about
# 0.04 m of sideways displacement while oscillating 0.2 m fore/aft.
lat = runs["cross-lateral-plus"]
lateral_dir = np.array([np.sin(1.0), -np.cos(1.0)])
projected = lat.states[:, :2] @ lateral_dir
print(f"lateral run: sideways progress {projected[-1]:.3f} m "
      f"(about {projected[-1] / 25:.4f} m per cycle over 25 cycles)")
