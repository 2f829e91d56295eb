"""How fast one input cycle converges to a pure bracket displacement.

One four-leg unit cycle (forward, turn, backward, turn back), each leg held
for delta seconds, displaces a driftless system by [f, g](x0) * delta^2 plus
higher-order leftovers.  Halving delta should halve the normalized error
||dx - [f,g] delta^2|| / delta^2, i.e. a slope of one on a log-log plot.
Shown on the first-order car and on a pair of linear fields whose bracket
is the matrix commutator.

Run:  python demos/05_cycle_convergence.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from liemux import cycle_displacement, dubins1_fields, lie_bracket, linear_field, verify_convergence

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

deltas = [0.4, 0.2, 0.1, 0.05, 0.025, 0.0125]

report = verify_convergence(deltas, x0=(0.0, 0.0, 0.0))
print("first-order car, unit cycle from the origin:")
print(f"{'delta':>10s} {'|err|/delta^2':>15s}")
for row in report.rows:
    print(f"{row.delta:>10.4f} {row.normalized_error:>15.6e}")
print(f"fitted log-log slope: {report.slope:.3f}")

A = np.array([[0.0, 1.0], [0.0, 0.0]])
B = np.array([[0.0, 0.0], [1.0, 0.0]])
f_lin, g_lin = linear_field(A, "Ax"), linear_field(B, "Bx")
x0_lin = np.array([1.0, 1.0])
bracket_lin = (B @ A - A @ B) @ x0_lin
lin_errors = []
for delta in deltas:
    dx = cycle_displacement(f_lin, g_lin, x0_lin, delta, dt=delta / 100)
    lin_errors.append(np.linalg.norm(dx - bracket_lin * delta**2) / delta**2)
lin_slope = np.polyfit(np.log(deltas), np.log(lin_errors), 1)[0]
print(f"\nlinear fields (commutator {bracket_lin}): slope {lin_slope:.3f}")

fig, (ax_conv, ax_cycle) = plt.subplots(1, 2, figsize=(11, 4.6))
ax_conv.loglog(deltas, report.errors, "o-", label=f"car (slope {report.slope:.2f})")
ax_conv.loglog(deltas, lin_errors, "s-", label=f"linear (slope {lin_slope:.2f})")
ax_conv.loglog(deltas, [0.5 * d for d in deltas], "k:", label="reference slope 1")
ax_conv.set_xlabel("leg duration delta [s]")
ax_conv.set_ylabel("normalized displacement error")
ax_conv.set_title("per-cycle displacement error vs delta")
ax_conv.legend(fontsize=8)

# Draw the actual path of one coarse cycle: the car ends up displaced
# sideways by roughly delta^2 even though it never steers off its axes.
from liemux import SimConfig, dubins1_dynamics, simulate
from liemux.scenarios import UNIT_CYCLE

delta_show = 0.4
steps_per_leg = 400

def cycle_controller(t, x, k):
    k = 0 if k is None else k
    return np.array(UNIT_CYCLE[min(k // steps_per_leg, 3)]), k + 1

traj = simulate(
    dubins1_dynamics,
    cycle_controller,
    np.zeros(3),
    SimConfig(dt=delta_show / steps_per_leg, t_end=4 * delta_show),
)
f, g = dubins1_fields()
target = lie_bracket(f, g, np.zeros(3)) * delta_show**2
ax_cycle.plot(traj.states[:, 0], traj.states[:, 1], "b", lw=1.2, label="cycle path")
ax_cycle.plot(0, 0, "k+", ms=12, label="start")
ax_cycle.plot(*traj.states[-1, :2], "bo", label="end of cycle")
ax_cycle.plot(*target[:2], "rx", ms=10, label="bracket prediction")
ax_cycle.set_aspect("equal")
ax_cycle.set_xlabel("east [m]")
ax_cycle.set_ylabel("north [m]")
ax_cycle.set_title(f"one unit cycle at delta = {delta_show}")
ax_cycle.legend(fontsize=8)

fig.tight_layout()
fig.savefig(OUT / "cycle_convergence.png", dpi=130)
print(f"\nwrote {OUT / 'cycle_convergence.png'}")
