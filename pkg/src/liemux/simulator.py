"""Fixed-step ODE integration with zero-order-hold inputs and recording.

The integrator is deliberately fixed-step: multiplexed controllers switch
their outputs on a rigid time grid, and leg boundaries must land exactly on
integrator steps for the square-wave cancellation to survive discretization.
Adaptive steppers cannot guarantee that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .util import wrap_angle

Dynamics = Callable[[np.ndarray, np.ndarray], np.ndarray]
Controller = Callable[[float, np.ndarray, object], tuple[np.ndarray, object]]

METHODS = ("euler", "rk4")


class DivergenceError(RuntimeError):
    """Integration produced a non-finite state."""

    def __init__(self, t: float, last_state: np.ndarray):
        self.t = float(t)
        self.last_state = np.array(last_state, dtype=float)
        super().__init__(
            f"state became non-finite at t={self.t:g}; "
            f"last finite state {self.last_state.tolist()}"
        )


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step run configuration.

    ``record_stride`` keeps every k-th step (plus the final state); it must
    divide the total step count so the recorded grid stays uniform.
    """

    dt: float
    t_end: float
    method: str = "rk4"
    record_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError(f"t_end={self.t_end} is shorter than one step dt={self.dt}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.dt)


@dataclass
class Trajectory:
    """Time-stamped run record.

    ``inputs[i]`` is the low-level u held over the step starting at
    ``times[i]`` (the final row repeats the last applied input so all columns
    stay parallel).  ``commands`` carries the latched (a1, a2, a3) rows when
    the controller exposes one, else None.
    """

    times: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    commands: Optional[np.ndarray] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        self.inputs = np.asarray(self.inputs, dtype=float)
        if self.commands is not None:
            self.commands = np.asarray(self.commands, dtype=float)
        k = len(self.times)
        if self.states.shape[0] != k or self.inputs.shape[0] != k:
            raise ValueError("times, states and inputs must have equal lengths")
        if self.commands is not None and self.commands.shape[0] != k:
            raise ValueError("commands length must match times")
        if k > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def index_at(self, t: float) -> int:
        """Index of the recorded sample nearest to time t."""
        return int(np.argmin(np.abs(self.times - t)))

    def state_at(self, t: float) -> np.ndarray:
        return self.states[self.index_at(t)]


def euler_step(f: Dynamics, x: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
    return x + dt * f(x, u)


def rk4_step(f: Dynamics, x: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(x, u)
    k2 = f(x + 0.5 * dt * k1, u)
    k3 = f(x + 0.5 * dt * k2, u)
    k4 = f(x + dt * k3, u)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def simulate(
    dynamics: Dynamics,
    controller: Controller,
    x0,
    config: SimConfig,
) -> Trajectory:
    """Integrate ``dynamics`` under ``controller`` from ``x0``.

    The controller is called once per step as ``controller(t, x, ctx)`` and
    returns ``(u, new_ctx)``; ``ctx`` is None on the first call so controllers
    can self-initialize.  u is held constant across the step (zero-order
    hold).  Time is computed as k*dt rather than accumulated, so identical
    configurations reproduce bit-identical trajectories.

    Raises:
        DivergenceError: If a step produces a non-finite state; carries the
            offending time and the last finite state.
    """
    step = rk4_step if config.method == "rk4" else euler_step
    x = np.array(x0, dtype=float)
    n_steps = config.n_steps
    if n_steps < 1:
        raise ValueError(f"t_end={config.t_end} with dt={config.dt} yields no steps")
    stride = config.record_stride
    if n_steps % stride != 0:
        raise ValueError(
            f"record_stride={stride} must divide the step count {n_steps} "
            "to keep the recorded grid uniform"
        )

    ctx = None
    times: list[float] = []
    states: list[np.ndarray] = []
    inputs: list[np.ndarray] = []
    commands: list[tuple[float, float, float]] = []
    u = np.zeros(0)
    # Non-finite states are detected and raised below, so numpy's transient
    # overflow warnings on the way to divergence are just noise.
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            t = k * config.dt
            u, ctx = controller(t, x, ctx)
            u = np.asarray(u, dtype=float)
            if k % stride == 0:
                times.append(t)
                states.append(x.copy())
                inputs.append(u.copy())
                held = getattr(ctx, "held_command", None)
                if held is not None:
                    commands.append(held.as_tuple())
            x = step(dynamics, x, u, config.dt)
            if not np.all(np.isfinite(x)):
                raise DivergenceError((k + 1) * config.dt, states[-1] if states else x0)

    times.append(n_steps * config.dt)
    states.append(x.copy())
    inputs.append(u.copy())
    if commands:
        commands.append(commands[-1])

    return Trajectory(
        times=np.array(times),
        states=np.vstack(states),
        inputs=np.vstack(inputs),
        commands=np.array(commands) if commands else None,
    )


def mean_velocity(traj: Trajectory, t_start: float, t_end: float) -> np.ndarray:
    """Average state velocity (x(t_end) - x(t_start)) / window.

    Endpoints snap to the nearest recorded samples and the quotient uses the
    snapped times, so the result is exact for straight-line trajectories.
    """
    if t_end <= t_start:
        raise ValueError(f"empty window: t_end={t_end} must exceed t_start={t_start}")
    times = traj.times
    if len(times) == 0:
        raise ValueError("trajectory is empty")
    slack = 0.5 * (times[-1] - times[0]) / max(len(times) - 1, 1)
    if t_start < times[0] - slack or t_end > times[-1] + slack:
        raise ValueError(
            f"window [{t_start}, {t_end}] outside trajectory support "
            f"[{times[0]}, {times[-1]}]"
        )
    i0 = traj.index_at(t_start)
    i1 = traj.index_at(t_end)
    if i1 == i0:
        raise ValueError("window collapses onto a single recorded sample")
    return (traj.states[i1] - traj.states[i0]) / (times[i1] - times[i0])


def tracking_error(
    traj: Trajectory,
    reference: Callable[[float], np.ndarray],
    components,
    angle_components=(),
) -> np.ndarray:
    """Per-sample Euclidean error over selected state components.

    ``reference(t)`` must return a vector indexable by the same component
    indices as the state.  Components listed in ``angle_components`` have
    their differences wrapped to (-pi, pi] before the norm, which is how a
    heading error should be measured.
    """
    comps = list(components)
    angular = set(angle_components)
    out = np.empty(len(traj))
    for i, t in enumerate(traj.times):
        ref = np.asarray(reference(float(t)), dtype=float)
        diff = np.array([traj.states[i, c] - ref[c] for c in comps])
        for j, c in enumerate(comps):
            if c in angular:
                diff[j] = wrap_angle(diff[j])
        out[i] = float(np.linalg.norm(diff))
    return out
