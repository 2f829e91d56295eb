"""Scenario configuration, execution, CSV/SVG export, convergence checks.

A scenario bundles a car model, a controller, a command or reference, and
the simulation grid.  Builtins reproduce the standard experiments: open-loop
bracket commands from heading 1 (``cross``, ``spin``), world-frame cardinal
velocities (``cardinal``), and second-order pose tracking of a figure-eight
(``lissajous``).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .dubins import (
    GainSet,
    Pose,
    cardinal_controller,
    desired_pose_rate,
    dubins1_dynamics,
    dubins1_fields,
    dubins2_dynamics,
    lissajous_reference,
    pose_controller_1,
    pose_controller_2,
)
from .multiplexer import BracketCommand, mux_advance, mux_init, mux_output, mux_refresh
from .simulator import SimConfig, Trajectory, mean_velocity, simulate, tracking_error
from .vectorfield import VectorField, lie_bracket

MODELS = ("dubins1", "dubins2")
CONTROLLERS = ("open_loop_command", "cardinal", "pose1", "pose2")


class ConfigError(ValueError):
    """Invalid scenario configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ReferenceSpec:
    """Pose reference for the tracking controllers.

    kind "lissajous" is the built-in figure-eight; kind "constant" holds a
    fixed pose (zero feedforward).
    """

    kind: str = "lissajous"
    pose: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def resolve(self) -> Callable[[float], tuple[Pose, np.ndarray]]:
        if self.kind == "lissajous":
            return lissajous_reference
        target = Pose(*self.pose)
        zero = np.zeros(3)
        return lambda t: (target, zero)


@dataclass(frozen=True)
class Scenario:
    """A fully specified run: model, controller, command/reference, grid."""

    name: str
    model: str
    controller: str
    sim: SimConfig
    delta: float
    x0: tuple[float, ...]
    command: Optional[tuple[float, float, float]] = None
    reference: ReferenceSpec = field(default_factory=ReferenceSpec)
    gains: GainSet = field(default_factory=GainSet)
    feedforward: bool = True

    @property
    def effective_delta(self) -> float:
        """Requested delta snapped to the nearest integer multiple of dt."""
        k = round(self.delta / self.sim.dt)
        return k * self.sim.dt


def _validate(s: Scenario) -> None:
    if s.model not in MODELS:
        raise ConfigError("model", f"expected one of {MODELS}, got {s.model!r}")
    if s.controller not in CONTROLLERS:
        raise ConfigError("controller", f"expected one of {CONTROLLERS}, got {s.controller!r}")
    if s.model == "dubins2" and s.controller != "pose2":
        raise ConfigError("controller", "dubins2 is only driven by the pose2 cascade")
    if s.model == "dubins1" and s.controller == "pose2":
        raise ConfigError("controller", "pose2 needs the dubins2 model")
    dim = 3 if s.model == "dubins1" else 5
    if len(s.x0) != dim:
        raise ConfigError("x0", f"{s.model} needs {dim} components, got {len(s.x0)}")
    if not all(math.isfinite(v) for v in s.x0):
        raise ConfigError("x0", "components must be finite")
    if s.delta <= 0:
        raise ConfigError("delta", f"must be positive, got {s.delta}")
    if round(s.delta / s.sim.dt) < 1:
        raise ConfigError("delta", f"delta={s.delta} rounds below one dt={s.sim.dt}")
    if s.controller in ("open_loop_command", "cardinal"):
        if s.command is None:
            raise ConfigError("command", f"controller {s.controller!r} needs a command triple")
        if len(s.command) != 3 or not all(math.isfinite(v) for v in s.command):
            raise ConfigError("command", "expected three finite components")
    if s.reference.kind not in ("lissajous", "constant"):
        raise ConfigError("reference.kind", f"unknown kind {s.reference.kind!r}")


def _tdm_controller(command_fn, delta: float, dt: float):
    """Wrap an extended-command law into a first-order car controller.

    The command is recomputed every step: the cycle's amplitude and
    orientation stay latched for coherence, while the pass-through terms
    track the current state so the command frame does not go stale over a
    cycle (see :func:`liemux.multiplexer.mux_refresh`).
    """

    def controller(t, x, ctx):
        cmd = command_fn(t, x)
        if ctx is None:
            ctx = mux_init(cmd, delta)
        else:
            ctx = mux_refresh(ctx, cmd)
        u = np.array(mux_output(ctx))
        return u, mux_advance(ctx, dt, cmd)

    return controller


def build_controller(s: Scenario):
    """Controller closure for :func:`liemux.simulator.simulate`."""
    dt = s.sim.dt
    delta = s.effective_delta
    if s.controller == "open_loop_command":
        cmd = BracketCommand(*s.command)
        return _tdm_controller(lambda t, x: cmd, delta, dt)
    if s.controller == "cardinal":
        xdot_d = np.array(s.command, dtype=float)
        return _tdm_controller(lambda t, x: cardinal_controller(x, xdot_d), delta, dt)

    ref = s.reference.resolve()
    zero3 = np.zeros(3)
    if s.controller == "pose1":
        def command_fn(t, x):
            p, pdot = ref(t)
            return pose_controller_1(x, p, pdot if s.feedforward else zero3, s.gains)

        return _tdm_controller(command_fn, delta, dt)

    def pose2(t, x, ctx):
        p, pdot = ref(t)
        pd = pdot if s.feedforward else zero3
        if ctx is None:
            a0 = cardinal_controller(x, desired_pose_rate(x[:3], p, pd, s.gains.k_pose2))
            ctx = mux_init(a0, delta)
        return pose_controller_2(x, p, pd, s.gains, ctx, dt)

    return pose2


def execute_scenario(s: Scenario) -> tuple[Trajectory, dict]:
    """Run the configured stack and compute the summary record."""
    _validate(s)
    dynamics = dubins1_dynamics if s.model == "dubins1" else dubins2_dynamics
    traj = simulate(dynamics, build_controller(s), np.array(s.x0), s.sim)

    displacement = traj.states[-1] - traj.states[0]
    summary = {
        "name": s.name,
        "model": s.model,
        "controller": s.controller,
        "method": s.sim.method,
        "dt": s.sim.dt,
        "t_end": s.sim.t_end,
        "requested_delta": s.delta,
        "effective_delta": s.effective_delta,
        "delta_rounded": not math.isclose(s.delta, s.effective_delta, rel_tol=1e-12),
        "x0": list(s.x0),
        "final_state": traj.states[-1].tolist(),
        "net_displacement": displacement.tolist(),
        "position_displacement_norm": float(np.linalg.norm(displacement[:2])),
        "mean_velocity": mean_velocity(traj, traj.times[0], traj.times[-1]).tolist(),
    }
    if s.controller in ("pose1", "pose2"):
        ref = s.reference.resolve()
        ref_pose = lambda t: ref(t)[0].as_array()
        pos_err = tracking_error(traj, ref_pose, components=(0, 1))
        head_err = tracking_error(traj, ref_pose, components=(2,), angle_components=(2,))
        tail_start = s.sim.t_end / 4.0
        tail = traj.times >= tail_start
        summary.update(
            {
                "tail_start": tail_start,
                "max_position_error": float(pos_err.max()),
                "tail_position_error": float(pos_err[tail].max()),
                "max_heading_error": float(head_err.max()),
                "tail_heading_error": float(head_err[tail].max()),
            }
        )
    return traj, summary


def export_csv(traj: Trajectory, path) -> None:
    """Write the trajectory as comma-separated text.

    Header ``t,x1..xn,u1..um[,a1,a2,a3]``; one row per recorded sample;
    17 significant digits so float64 values round-trip bit-exactly; lines end
    with a bare line feed.
    """
    n = traj.states.shape[1]
    m = traj.inputs.shape[1]
    header = ["t"] + [f"x{i + 1}" for i in range(n)] + [f"u{i + 1}" for i in range(m)]
    if traj.commands is not None:
        header += ["a1", "a2", "a3"]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(len(traj)):
            row = [traj.times[i], *traj.states[i], *traj.inputs[i]]
            if traj.commands is not None:
                row += list(traj.commands[i])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def load_csv(path) -> Trajectory:
    """Read a trajectory written by :func:`export_csv`."""
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        rows = [list(map(float, line.split(","))) for line in fh if line.strip()]
    n = sum(1 for name in header if name.startswith("x"))
    m = sum(1 for name in header if name.startswith("u"))
    has_cmd = "a1" in header
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return Trajectory(
        times=data[:, 0],
        states=data[:, 1 : 1 + n],
        inputs=data[:, 1 + n : 1 + n + m],
        commands=data[:, 1 + n + m : 1 + n + m + 3] if has_cmd else None,
    )


def export_svg(traj: Trajectory, path, size: int = 480, margin: float = 24.0) -> None:
    """Write the planar path (x1, x2) as a single SVG polyline, bounds auto-fitted."""
    xs, ys = traj.states[:, 0], traj.states[:, 1]
    if len(xs) == 0:
        xs, ys = np.zeros(1), np.zeros(1)
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    extent = max(x_hi - x_lo, y_hi - y_lo, 1e-9)
    scale = (size - 2.0 * margin) / extent
    # SVG y grows downward; flip so north stays up.
    px = margin + (xs - x_lo) * scale
    py = size - margin - (ys - y_lo) * scale
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    with open(path, "w", newline="") as fh:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n'
            f'  <rect width="{size}" height="{size}" fill="white"/>\n'
            f'  <polyline fill="none" stroke="black" stroke-width="1.5" points="{points}"/>\n'
            f'  <circle cx="{px[0]:.2f}" cy="{py[0]:.2f}" r="3" fill="red"/>\n'
            "</svg>\n"
        )


def run_scenario(s: Scenario, out_dir, svg: bool = False) -> tuple[Trajectory, dict]:
    """Execute a scenario and write its CSV, summary JSON and optional SVG."""
    traj, summary = execute_scenario(s)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{s.name}.csv")
    export_csv(traj, csv_path)
    summary["csv_path"] = csv_path
    if svg:
        svg_path = os.path.join(out_dir, f"{s.name}.svg")
        export_svg(traj, svg_path)
        summary["svg_path"] = svg_path
    summary_path = os.path.join(out_dir, f"{s.name}_summary.json")
    with open(summary_path, "w", newline="") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    summary["summary_path"] = summary_path
    return traj, summary


# ---------------------------------------------------------------------------
# Builtin scenarios

def builtin_scenarios() -> dict[str, tuple[Scenario, ...]]:
    """Builtin groups keyed by name; each maps to one or more runs."""
    sim10 = SimConfig(dt=0.01, t_end=10.0, method="rk4")
    x0 = (0.0, 0.0, 1.0)

    def open_loop(name, command):
        return Scenario(name, "dubins1", "open_loop_command", sim10, 0.1, x0, command)

    def cardinal(name, xdot_d):
        return Scenario(name, "dubins1", "cardinal", sim10, 0.1, x0, xdot_d)

    lissajous = Scenario(
        name="lissajous",
        model="dubins2",
        controller="pose2",
        sim=SimConfig(dt=0.01, t_end=400.0, method="rk4"),
        delta=0.1,
        x0=(0.0, 0.0, 0.0, 0.0, 0.0),
        reference=ReferenceSpec("lissajous"),
    )
    return {
        "cross": (
            open_loop("cross-forward", (0.1, 0.0, 0.0)),
            open_loop("cross-back", (-0.1, 0.0, 0.0)),
            open_loop("cross-lateral-plus", (0.0, 0.0, 0.1)),
            open_loop("cross-lateral-minus", (0.0, 0.0, -0.1)),
        ),
        "spin": (open_loop("spin", (0.0, 0.1, 0.0)),),
        "cardinal": (
            cardinal("cardinal-east", (1.0, 0.0, 0.0)),
            cardinal("cardinal-west", (-1.0, 0.0, 0.0)),
            cardinal("cardinal-north", (0.0, 1.0, 0.0)),
            cardinal("cardinal-south", (0.0, -1.0, 0.0)),
        ),
        "lissajous": (lissajous,),
    }


def resolve_builtin(name: str) -> tuple[Scenario, ...]:
    """Scenarios for a builtin group name or a single member name."""
    groups = builtin_scenarios()
    if name in groups:
        return groups[name]
    for members in groups.values():
        for s in members:
            if s.name == name:
                return (s,)
    known = sorted(set(groups) | {s.name for m in groups.values() for s in m})
    raise ConfigError("scenario", f"unknown builtin {name!r}; known: {', '.join(known)}")


# ---------------------------------------------------------------------------
# Scenario files

def scenario_from_dict(raw: dict) -> Scenario:
    """Build and validate a scenario from parsed config data.

    Raises ConfigError with the offending field path on any problem.
    """
    if not isinstance(raw, dict):
        raise ConfigError("", "scenario file must hold a single object")

    def need(key):
        if key not in raw:
            raise ConfigError(key, "missing required field")
        return raw[key]

    sim_raw = need("sim")
    if not isinstance(sim_raw, dict):
        raise ConfigError("sim", "must be an object with dt and t_end")
    try:
        sim = SimConfig(
            dt=float(sim_raw.get("dt", 0.01)),
            t_end=float(sim_raw.get("t_end", 10.0)),
            method=sim_raw.get("method", "rk4"),
            record_stride=int(sim_raw.get("record_stride", 1)),
        )
    except ValueError as exc:
        raise ConfigError("sim", str(exc)) from exc

    gains_raw = raw.get("gains", {})
    if not isinstance(gains_raw, dict):
        raise ConfigError("gains", "must be an object")
    try:
        gains = GainSet(
            k_vel=float(gains_raw.get("k_vel", 20.0)),
            k_pose1=float(gains_raw.get("k_pose1", 1.0)),
            k_pose2=float(gains_raw.get("k_pose2", 0.3)),
        )
    except ValueError as exc:
        raise ConfigError("gains", str(exc)) from exc

    ref_raw = raw.get("reference", {"kind": "lissajous"})
    if isinstance(ref_raw, str):
        ref_raw = {"kind": ref_raw}
    if not isinstance(ref_raw, dict):
        raise ConfigError("reference", "must be a kind name or an object")
    reference = ReferenceSpec(
        kind=ref_raw.get("kind", "lissajous"),
        pose=tuple(float(v) for v in ref_raw.get("pose", (0.0, 0.0, 0.0))),
    )

    command = raw.get("command")
    if command is not None:
        try:
            command = tuple(float(v) for v in command)
        except (TypeError, ValueError) as exc:
            raise ConfigError("command", "expected three numbers") from exc

    scenario = Scenario(
        name=str(need("name")),
        model=str(need("model")),
        controller=str(need("controller")),
        sim=sim,
        delta=float(raw.get("delta", math.sqrt(sim.dt))),
        x0=tuple(float(v) for v in need("x0")),
        command=command,
        reference=reference,
        gains=gains,
        feedforward=bool(raw.get("feedforward", True)),
    )
    _validate(scenario)
    return scenario


def load_scenario_file(path) -> Scenario:
    """Load a scenario from a JSON file."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"not valid JSON: {exc}") from exc
    return scenario_from_dict(raw)


def apply_overrides(
    s: Scenario,
    dt: Optional[float] = None,
    t_end: Optional[float] = None,
    delta: Optional[float] = None,
    method: Optional[str] = None,
    feedforward: Optional[bool] = None,
) -> Scenario:
    """Scenario with command-line style overrides applied."""
    sim = s.sim
    if dt is not None or t_end is not None or method is not None:
        try:
            sim = SimConfig(
                dt=dt if dt is not None else sim.dt,
                t_end=t_end if t_end is not None else sim.t_end,
                method=method if method is not None else sim.method,
                record_stride=sim.record_stride,
            )
        except ValueError as exc:
            raise ConfigError("sim", str(exc)) from exc
    out = replace(
        s,
        sim=sim,
        delta=delta if delta is not None else s.delta,
        feedforward=feedforward if feedforward is not None else s.feedforward,
    )
    _validate(out)
    return out


# ---------------------------------------------------------------------------
# Convergence verification

UNIT_CYCLE = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def cycle_displacement(
    f: VectorField,
    g: VectorField,
    x0,
    delta: float,
    dt: float,
    method: str = "rk4",
) -> np.ndarray:
    """Net displacement of one unit four-leg cycle on x' = f u1 + g u2.

    Legs follow :data:`UNIT_CYCLE`, each held for ``delta`` seconds and
    integrated with the fine step ``dt`` (delta must be a multiple of dt so
    leg switches land on step boundaries).  For small delta the result
    approaches [f, g](x0) * delta**2.
    """
    steps_per_leg = round(delta / dt)
    if steps_per_leg < 1 or not math.isclose(steps_per_leg * dt, delta, rel_tol=1e-9):
        raise ValueError(f"delta={delta} is not an integer multiple of dt={dt}")

    def dynamics(x, u):
        return u[0] * f(x) + u[1] * g(x)

    def controller(t, x, k):
        k = 0 if k is None else k
        leg = min(k // steps_per_leg, 3)
        return np.array(UNIT_CYCLE[leg]), k + 1

    config = SimConfig(dt=dt, t_end=4 * steps_per_leg * dt, method=method)
    traj = simulate(dynamics, controller, x0, config)
    return traj.states[-1] - traj.states[0]


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    dt: float
    normalized_error: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-delta normalized errors and the fitted log-log slope."""

    rows: tuple[ConvergenceRow, ...]
    slope: float

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.normalized_error for r in self.rows])


def verify_convergence(
    deltas: Sequence[float],
    x0=(0.0, 0.0, 0.0),
    substeps: int = 100,
    method: str = "rk4",
) -> ConvergenceReport:
    """Check the per-cycle displacement law on the first-order car.

    For each leg duration delta, one unit cycle is integrated with the fine
    step delta/substeps and the error ||dx - [f, g](x0) delta^2|| / delta^2
    is recorded.  The law predicts the normalized error shrinks linearly
    with delta, so the fitted log-log slope should be at least about 1.
    """
    deltas = [float(d) for d in deltas]
    if len(deltas) < 2:
        raise ValueError("need at least two deltas to fit a slope")
    if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be positive and strictly decreasing")
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")

    f, g = dubins1_fields()
    x0 = np.asarray(x0, dtype=float)
    bracket = lie_bracket(f, g, x0)
    rows = []
    for delta in deltas:
        dt = delta / substeps
        dx = cycle_displacement(f, g, x0, delta, dt, method)
        err = float(np.linalg.norm(dx - bracket * delta**2) / delta**2)
        rows.append(ConvergenceRow(delta, dt, err))
    slope = float(
        np.polyfit(np.log([r.delta for r in rows]), np.log([r.normalized_error for r in rows]), 1)[0]
    )
    return ConvergenceReport(tuple(rows), slope)
