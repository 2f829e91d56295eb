"""Bracket algebra on the first-order car's input fields.

The car can drive along its heading (field f) and turn (field g), but not
slide sideways.  The bracket [f, g] = (sin x3, -cos x3, 0) is exactly that
missing sideways direction, and together the three fields span all of R^3
at every heading: the car is locally able to move anywhere.

Run:  python demos/01_bracket_algebra.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from liemux import (
    VectorField,
    constant_field,
    dubins1_fields,
    jacobi_residual,
    lie_bracket,
    lie_span_rank,
    linear_field,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

f, g = dubins1_fields()

# --- the bracket is the unit sideways direction at every heading ----------
print("bracket [drive, turn] over a heading sweep:")
for x3 in (0.0, np.pi / 4, np.pi / 2, 2.0):
    br = lie_bracket(f, g, [0.0, 0.0, x3])
    print(f"  heading {x3:5.2f} rad -> bracket ({br[0]:+.3f}, {br[1]:+.3f}, {br[2]:+.3f})")

print(f"\nspan rank of {{f, g, [f,g]}} at heading 1: "
      f"{lie_span_rank([f, g], [0.0, 0.0, 1.0], depth=1)} of 3")

# --- analytic vs finite-difference brackets -------------------------------
f_fd = VectorField(3, f.eval, None, "drive_fd")
g_fd = VectorField(3, g.eval, None, "turn_fd")
x = np.array([0.0, 0.0, 0.7])
exact = lie_bracket(f, g, x)
steps = np.logspace(-6, -1, 16)
gaps = [np.linalg.norm(lie_bracket(f_fd, g_fd, x, step=h) - exact) for h in steps]

# --- Jacobi identity as a differentiation self-check -----------------------
h_field = constant_field([1.0, 0.0, 0.0], "east")
jac_steps = np.logspace(-5, -1, 12)
jac_res = [np.linalg.norm(jacobi_residual(f, g, h_field, x, step=s)) for s in jac_steps]
print(f"jacobi residual at step 1e-4: {np.linalg.norm(jacobi_residual(f, g, h_field, x)):.2e}")

# linear fields: the bracket is the matrix commutator
A = np.array([[0.0, 1.0], [0.0, 0.0]])
B = np.array([[0.0, 0.0], [1.0, 0.0]])
fa, gb = linear_field(A, "Ax"), linear_field(B, "Bx")
print(f"linear-field bracket at (1,1): {lie_bracket(fa, gb, [1.0, 1.0])} "
      f"(commutator says {(B @ A - A @ B) @ [1.0, 1.0]})")

fig, axes = plt.subplots(1, 3, figsize=(13, 4))

thetas = np.linspace(-np.pi, np.pi, 200)
brackets = np.array([lie_bracket(f, g, [0, 0, t]) for t in thetas])
axes[0].plot(thetas, brackets[:, 0], label="east component")
axes[0].plot(thetas, brackets[:, 1], label="north component")
axes[0].set_xlabel("heading [rad]")
axes[0].set_title("sideways direction vs heading")
axes[0].legend()

axes[1].loglog(steps, gaps, "o-")
axes[1].set_xlabel("difference step")
axes[1].set_ylabel("|FD bracket - analytic|")
axes[1].set_title("second-order convergence of the FD bracket")

axes[2].loglog(jac_steps, jac_res, "s-")
axes[2].set_xlabel("difference step")
axes[2].set_ylabel("|Jacobi residual|")
axes[2].set_title("Jacobi identity residual")

fig.tight_layout()
fig.savefig(OUT / "bracket_algebra.png", dpi=130)
print(f"\nwrote {OUT / 'bracket_algebra.png'}")
