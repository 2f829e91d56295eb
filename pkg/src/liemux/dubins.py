"""First- and second-order Dubins car models and their control stacks.

The first-order car

    x1' = u1 cos x3,  x2' = u1 sin x3,  x3' = u2

can only drive along its heading and turn, but the bracket of its two input
fields points sideways, so the multiplexer turns (u1, u2) into a full
planar velocity command.  The second-order car adds speed and turn-rate
states driven by the inputs; a high-gain inner loop collapses it back to
the first-order car, and a proportional outer loop on top tracks a pose
trajectory with position and heading commanded independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .multiplexer import BracketCommand, MuxState, mux_advance, mux_output
from .util import wrap_angle
from .vectorfield import VectorField


@dataclass(frozen=True)
class DubinsState1:
    """Planar pose of the first-order car: east, north (m) and heading (rad)."""

    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x1, self.x2, self.x3)):
            raise ValueError("state components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @classmethod
    def from_array(cls, x) -> "DubinsState1":
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), float(x[1]), float(x[2]))


@dataclass(frozen=True)
class DubinsState2:
    """Second-order car state: pose plus speed (m/s) and turn rate (rad/s)."""

    x1: float
    x2: float
    x3: float
    x4: float
    x5: float

    def __post_init__(self):
        vals = (self.x1, self.x2, self.x3, self.x4, self.x5)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("state components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4, self.x5])

    @classmethod
    def from_array(cls, x) -> "DubinsState2":
        x = np.asarray(x, dtype=float)
        return cls(*(float(v) for v in x[:5]))


@dataclass(frozen=True)
class Pose:
    """A position plus heading target in the world frame."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.theta)):
            raise ValueError("pose components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.theta])


@dataclass(frozen=True)
class GainSet:
    """Loop gains: inner velocity loop and the two pose loops (all 1/s).

    The inner gain must dominate the cycle bandwidth for the cascade
    argument to hold; k_vel * delta >= 2 is a safe separation.
    """

    k_vel: float = 20.0
    k_pose1: float = 1.0
    k_pose2: float = 0.3

    def __post_init__(self):
        for name in ("k_vel", "k_pose1", "k_pose2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def dubins1_fields() -> tuple[VectorField, VectorField]:
    """Input fields of the first-order car, with analytic Jacobians.

    f = (cos x3, sin x3, 0) drives along the heading, g = (0, 0, 1) turns.
    Their bracket (sin x3, -cos x3, 0) is the unit sideways direction.
    """

    def f_eval(x):
        return np.array([np.cos(x[2]), np.sin(x[2]), 0.0])

    def f_jac(x):
        j = np.zeros((3, 3))
        j[0, 2] = -np.sin(x[2])
        j[1, 2] = np.cos(x[2])
        return j

    f = VectorField(3, f_eval, f_jac, "drive")
    g = VectorField(3, lambda x: np.array([0.0, 0.0, 1.0]), lambda x: np.zeros((3, 3)), "turn")
    return f, g


def dubins1_dynamics(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """x' = (u1 cos x3, u1 sin x3, u2)."""
    return np.array([u[0] * np.cos(x[2]), u[0] * np.sin(x[2]), u[1]])


def dubins2_dynamics(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """x' = (x4 cos x3, x4 sin x3, x5, u1, u2): drift plus integrator inputs."""
    return np.array([x[3] * np.cos(x[2]), x[3] * np.sin(x[2]), x[4], u[0], u[1]])


def body_matrix(x3: float) -> np.ndarray:
    """Columns are the drive, turn and sideways directions at heading x3.

    The columns are orthonormal for every heading, so the inverse used by
    the controllers is simply the transpose.
    """
    c, s = np.cos(x3), np.sin(x3)
    return np.array([[c, 0.0, s], [s, 0.0, -c], [0.0, 1.0, 0.0]])


def cardinal_controller(x, xdot_d) -> BracketCommand:
    """Extended command realizing a desired world-frame rate.

    Solves A(x3) a = xdot_d with the orthonormal transpose, mapping a
    desired (east, north, heading) velocity onto (drive, turn, sideways)
    demands.  ``x`` is any state vector with the heading at index 2.
    """
    x = np.asarray(x, dtype=float)
    a = body_matrix(x[2]).T @ np.asarray(xdot_d, dtype=float)
    return BracketCommand(float(a[0]), float(a[1]), float(a[2]))


def desired_pose_rate(pose_now: np.ndarray, p: Pose, pdot, k: float) -> np.ndarray:
    """Proportional pose-loop output k*(p - pose) + pdot, heading wrapped."""
    target = p.as_array() if isinstance(p, Pose) else np.asarray(p, dtype=float)
    err = target - np.asarray(pose_now, dtype=float)
    err[2] = wrap_angle(err[2])
    return k * err + np.asarray(pdot, dtype=float)


def pose_controller_1(x, p: Pose, pdot, gains: GainSet) -> BracketCommand:
    """Pose tracking command for the first-order car.

    Proportional pose loop plus feedforward, mapped to the body frame.
    Feed the result through the multiplexer to drive the actual two-input
    car.
    """
    x = np.asarray(x, dtype=float)
    return cardinal_controller(x, desired_pose_rate(x[:3], p, pdot, gains.k_pose1))


def velocity_loop(x, v_d, gains: GainSet) -> np.ndarray:
    """Inner proportional loop u = k_vel * (v_d - (x4, x5)).

    Drives the speed and turn-rate integrators to the commanded values with
    time constant 1/k_vel, making the second-order car look first-order to
    the layers above.
    """
    x = np.asarray(x, dtype=float)
    return gains.k_vel * (np.asarray(v_d, dtype=float) - x[3:5])


def pose_controller_2(
    x, p: Pose, pdot, gains: GainSet, mux: MuxState, dt: float
) -> tuple[np.ndarray, MuxState]:
    """One control step of the full second-order cascade.

    Outer proportional pose loop (heading wrapped) plus feedforward gives a
    desired world rate; the body-frame transpose turns it into an extended
    command; the multiplexer realizes that command as the two velocity
    set-points for the current leg; the inner loop chases them.  The fresh
    command enters the cycle at its next start, per the multiplexer's
    latching contract.
    """
    x = np.asarray(x, dtype=float)
    xdot_d = desired_pose_rate(x[:3], p, pdot, gains.k_pose2)
    a = cardinal_controller(x, xdot_d)
    v_d = np.array(mux_output(mux))
    u = velocity_loop(x, v_d, gains)
    return u, mux_advance(mux, dt, a)


def lissajous_reference(t: float) -> tuple[Pose, np.ndarray]:
    """Figure-eight pose reference with the heading pinned East.

    p(t) = (5 sin(t/100), 5 sin(2t/100), 0) and its analytic derivative;
    one full period lasts 200*pi seconds.
    """
    p = Pose(5.0 * math.sin(t / 100.0), 5.0 * math.sin(2.0 * t / 100.0), 0.0)
    pdot = np.array([0.05 * math.cos(t / 100.0), 0.1 * math.cos(2.0 * t / 100.0), 0.0])
    return p, pdot
