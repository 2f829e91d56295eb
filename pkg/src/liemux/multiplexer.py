"""Time-division multiplexing of a three-component command onto two inputs.

A driftless system x' = f(x) u1 + g(x) u2 can follow the bracket direction
[f, g] by cycling its two inputs through the four-leg square-wave sequence

    (a1 + eps*alpha, a2), (a1, a2 + alpha), (a1 - eps*alpha, a2), (a1, a2 - alpha)

with alpha = sqrt(4 |a3| / delta) and eps = sign(a3), each leg held for
delta seconds.  Averaged over one cycle the motion is
a1 f + a2 g + a3 [f, g], so the pair (u1, u2) behaves like the extended
input (a1, a2, a3).  This module owns the cycle bookkeeping; it knows
nothing about the plant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class BracketCommand:
    """Extended input (a1, a2, a3): direct input levels plus bracket rate."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"command component {name} must be finite")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)


ZERO_COMMAND = BracketCommand(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CycleParams:
    """Scaling of one four-leg cycle: oscillation amplitude, orientation, leg time."""

    alpha: float
    epsilon: int
    delta: float


def cycle_params(cmd: BracketCommand, delta: float) -> CycleParams:
    """Cycle scaling for ``cmd`` with leg duration ``delta``.

    alpha = sqrt(4 |a3| / delta) makes the per-cycle bracket displacement
    average out to a3 [f, g]; epsilon = sign(a3) reverses the cycle
    orientation for negative bracket rates.  a3 = 0 degenerates to
    alpha = 0, epsilon = 0 (plain pass-through of a1, a2).
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if cmd.a3 == 0.0:
        return CycleParams(0.0, 0, float(delta))
    alpha = math.sqrt(4.0 * abs(cmd.a3) / delta)
    return CycleParams(alpha, 1 if cmd.a3 > 0 else -1, float(delta))


@dataclass(frozen=True)
class MuxState:
    """Phase bookkeeping for the four-leg cycle.

    ``leg`` in {0, 1, 2, 3} advances every ``delta`` seconds; the held
    command latches at leg-0 entry (cycle start) along the
    :func:`mux_advance` path and the params are recomputed there.
    """

    leg: int
    time_in_leg: float
    held_command: BracketCommand
    params: CycleParams


def mux_init(cmd: BracketCommand, delta: float) -> MuxState:
    """Fresh state at a cycle start with ``cmd`` latched."""
    return MuxState(0, 0.0, cmd, cycle_params(cmd, delta))


def mux_output(state: MuxState) -> tuple[float, float]:
    """Two-input output for the current leg (constant within the leg)."""
    a1, a2 = state.held_command.a1, state.held_command.a2
    alpha = state.params.alpha
    eps_alpha = state.params.epsilon * alpha
    if state.leg == 0:
        return (a1 + eps_alpha, a2)
    if state.leg == 1:
        return (a1, a2 + alpha)
    if state.leg == 2:
        return (a1 - eps_alpha, a2)
    return (a1, a2 - alpha)


def mux_advance(state: MuxState, dt: float, next_cmd: BracketCommand) -> MuxState:
    """Advance the cycle clock by one integrator step.

    Requires 0 < dt <= delta with delta an integer multiple of dt, so leg
    boundaries land on integrator steps.  Crossing a boundary increments the
    leg; wrapping to leg 0 latches ``next_cmd`` and rescales the cycle.
    """
    delta = state.params.delta
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > delta:
        raise ValueError(f"dt={dt} exceeds leg duration delta={delta}; cycle unresolvable")
    t = state.time_in_leg + dt
    # Boundary test with half-step slack: delta is an exact multiple of dt,
    # so accumulated rounding stays far below dt/2, and resetting to 0.0 at
    # each boundary stops it compounding across legs.
    if t < delta - 0.5 * dt:
        return replace(state, time_in_leg=t)
    leg = (state.leg + 1) % 4
    if leg == 0:
        return MuxState(0, 0.0, next_cmd, cycle_params(next_cmd, delta))
    return replace(state, leg=leg, time_in_leg=0.0)


def mux_refresh(state: MuxState, cmd: BracketCommand) -> MuxState:
    """Replace the held command mid-cycle without rescaling the cycle.

    The amplitude alpha and orientation epsilon stay those latched at the
    last cycle start, so the four oscillatory legs still cancel coherently;
    only the pass-through terms (a1, a2) that mux_output superimposes track
    ``cmd``.  Closed-loop laws whose command frame rotates with the state
    need this: holding the frame fixed for a whole cycle tilts the realized
    mean velocity by about alpha*delta/2, since the bracket legs execute at
    headings spanning that arc.  For commands constant over a cycle this is
    a no-op.
    """
    return replace(state, held_command=cmd)
