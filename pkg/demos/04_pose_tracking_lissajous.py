"""Second-order car tracking a figure-eight while always facing East.

The full cascade: a proportional pose loop produces a desired world-frame
velocity, the body-frame transpose turns it into an extended command, the
multiplexer realizes that command as two velocity set-points, and a
high-gain inner loop drives the speed/turn-rate integrators after them.
Position and heading are commanded independently; the heading reference is
the constant 0 (East), so the car crabs sideways around the whole curve.

Run:  python demos/04_pose_tracking_lissajous.py   (about 2 s of compute)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from liemux import builtin_scenarios, execute_scenario, lissajous_reference

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

(scenario,) = builtin_scenarios()["lissajous"]
traj, summary = execute_scenario(scenario)
print(f"run: {scenario.sim.t_end:.0f} s, dt={scenario.sim.dt}, delta={scenario.delta}, "
      f"gains k_vel={scenario.gains.k_vel}, k_pose2={scenario.gains.k_pose2}")
print(f"tail (t >= {summary['tail_start']:.0f} s) position error: "
      f"{summary['tail_position_error']:.3f} m")
print(f"tail heading error: {summary['tail_heading_error']:.3f} rad")

ref = np.array([lissajous_reference(t)[0].as_array() for t in traj.times])

fig = plt.figure(figsize=(12, 5))
ax_path = fig.add_subplot(1, 2, 1)
ax_path.plot(ref[:, 0], ref[:, 1], "r--", lw=1.2, label="reference")
ax_path.plot(traj.states[:, 0], traj.states[:, 1], "b", lw=0.7, label="car")
step = 4000  # a heading glyph every 40 s
ax_path.quiver(
    traj.states[::step, 0], traj.states[::step, 1],
    np.cos(traj.states[::step, 2]), np.sin(traj.states[::step, 2]),
    color="k", width=0.004, scale=18, label="heading",
)
ax_path.set_aspect("equal")
ax_path.set_xlabel("east [m]")
ax_path.set_ylabel("north [m]")
ax_path.set_title("figure-eight tracking, nose pinned East")
ax_path.legend(fontsize=8)

ax_err = fig.add_subplot(2, 2, 2)
pos_err = np.linalg.norm(traj.states[:, :2] - ref[:, :2], axis=1)
ax_err.plot(traj.times, pos_err, lw=0.7)
ax_err.set_ylabel("position error [m]")
ax_err.set_title("tracking errors")

ax_head = fig.add_subplot(2, 2, 4)
head_err = np.abs(np.arctan2(np.sin(traj.states[:, 2]), np.cos(traj.states[:, 2])))
ax_head.plot(traj.times, head_err, lw=0.7)
ax_head.set_xlabel("time [s]")
ax_head.set_ylabel("|heading| [rad]")

fig.tight_layout()
fig.savefig(OUT / "lissajous_tracking.png", dpi=130)

# The first seconds show the car maneuvering onto the curve while swinging
# its nose back toward East.
fig2, ax2 = plt.subplots(figsize=(6, 5))
early = traj.times <= 60.0
ax2.plot(ref[early, 0], ref[early, 1], "r--", lw=1.2, label="reference")
ax2.plot(traj.states[early, 0], traj.states[early, 1], "b", lw=0.8, label="car")
ax2.set_aspect("equal")
ax2.set_xlabel("east [m]")
ax2.set_ylabel("north [m]")
ax2.set_title("first 60 s: acquiring the curve")
ax2.legend(fontsize=8)
fig2.tight_layout()
fig2.savefig(OUT / "lissajous_start.png", dpi=130)
print(f"\nwrote {OUT / 'lissajous_tracking.png'} and {OUT / 'lissajous_start.png'}")
