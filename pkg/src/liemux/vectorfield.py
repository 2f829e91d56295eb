"""Vector-field algebra on R^n: Jacobians, Lie brackets, span diagnostics.

The bracket of two fields f, g is the field

    [f, g](x) = dg/dx(x) . f(x) - df/dx(x) . g(x)

and is the direction a system can reach by cycling rapidly between f and g
even when neither field points that way.  Everything here works on plain
callables wrapped in :class:`VectorField`; analytic Jacobians are used when
a field carries one, central differences otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

DEFAULT_STEP = 1e-5
"""Central-difference step for direct Jacobians (unit-scale states)."""

NESTED_STEP = 1e-4
"""Looser step when differentiating derived bracket fields, where
evaluation noise compounds."""


class EvaluationError(RuntimeError):
    """A field evaluation produced a non-finite value."""

    def __init__(self, label: str, x: np.ndarray):
        self.label = label
        self.x = np.array(x, dtype=float)
        super().__init__(f"field '{label}' is non-finite at x={self.x.tolist()}")


@dataclass(frozen=True)
class VectorField:
    """A velocity field x -> f(x) on R^n.

    Args:
        dim: State dimension n.
        eval: Maps a length-n state vector to a length-n velocity vector.
        jacobian: Optional analytic df/dx, returning an n-by-n matrix.
            Operations fall back to central differences when absent.
        label: Short identifier used in error messages and derived names.

    Fields must be pure: evaluation may not mutate captured state, so handles
    can be shared freely between concurrent simulations.
    """

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = "f"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(
                f"field '{self.label}' expects a vector of length {self.dim}, "
                f"got shape {x.shape}"
            )
        out = np.asarray(self.eval(x), dtype=float)
        if out.shape != (self.dim,):
            raise ValueError(
                f"field '{self.label}' returned shape {out.shape}, "
                f"expected ({self.dim},)"
            )
        if not np.all(np.isfinite(out)):
            raise EvaluationError(self.label, x)
        return out


@dataclass(frozen=True)
class JacobianEstimate:
    """An n-by-n sensitivity matrix df/dx at a point.

    ``scheme`` is "analytic" when the field supplied its own Jacobian and
    "central" for the finite-difference fallback; ``step`` is the requested
    difference step either way.
    """

    matrix: np.ndarray
    step: float
    scheme: str


def jacobian_at(field: VectorField, x, step: float = DEFAULT_STEP) -> JacobianEstimate:
    """Jacobian of ``field`` at ``x``.

    Returns the analytic Jacobian when the field provides one, otherwise the
    central-difference estimate with column j = (f(x + h e_j) - f(x - h e_j)) / 2h.

    Raises:
        ValueError: On dimension mismatch or non-positive step.
        EvaluationError: If the field evaluates non-finite near x.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (field.dim,):
        raise ValueError(f"x has shape {x.shape}, expected ({field.dim},)")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if field.jacobian is not None:
        matrix = np.asarray(field.jacobian(x), dtype=float)
        if matrix.shape != (field.dim, field.dim):
            raise ValueError(
                f"analytic jacobian of '{field.label}' has shape {matrix.shape}, "
                f"expected ({field.dim}, {field.dim})"
            )
        if not np.all(np.isfinite(matrix)):
            raise EvaluationError(field.label, x)
        return JacobianEstimate(matrix, float(step), "analytic")

    n = field.dim
    matrix = np.empty((n, n))
    for j in range(n):
        h = np.zeros(n)
        h[j] = step
        matrix[:, j] = (field(x + h) - field(x - h)) / (2.0 * step)
    return JacobianEstimate(matrix, float(step), "central")


def lie_bracket(f: VectorField, g: VectorField, x, step: float = DEFAULT_STEP) -> np.ndarray:
    """Evaluate [f, g](x) = Jg(x) f(x) - Jf(x) g(x).

    Each side uses its field's analytic Jacobian when available and central
    differences with ``step`` otherwise.
    """
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: '{f.label}' is {f.dim}-d, '{g.label}' is {g.dim}-d")
    x = np.asarray(x, dtype=float)
    jf = jacobian_at(f, x, step).matrix
    jg = jacobian_at(g, x, step).matrix
    out = jg @ f(x) - jf @ g(x)
    if not np.all(np.isfinite(out)):
        raise EvaluationError(f"[{f.label},{g.label}]", x)
    return out


def bracket_field(f: VectorField, g: VectorField, step: float = NESTED_STEP) -> VectorField:
    """The derived field x -> [f, g](x).

    The result carries no analytic Jacobian: differentiating it (for nested
    brackets) falls back to central differences at the bracket's own ``step``.
    """
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: '{f.label}' is {f.dim}-d, '{g.label}' is {g.dim}-d")
    return VectorField(
        dim=f.dim,
        eval=lambda x: lie_bracket(f, g, x, step),
        jacobian=None,
        label=f"[{f.label},{g.label}]",
    )


def jacobi_residual(
    f: VectorField, g: VectorField, h: VectorField, x, step: float = NESTED_STEP
) -> np.ndarray:
    """Residual of [f,[g,h]] + [h,[f,g]] + [g,[h,f]] at ``x``.

    Identically zero for exact brackets; the numerical value is O(step) for
    smooth fields and serves as a self-check of the differentiation scheme.
    """
    fg = bracket_field(f, g, step)
    gh = bracket_field(g, h, step)
    hf = bracket_field(h, f, step)
    return (
        lie_bracket(f, gh, x, step)
        + lie_bracket(h, fg, x, step)
        + lie_bracket(g, hf, x, step)
    )


def lie_span_rank(
    fields: Sequence[VectorField],
    x,
    depth: int = 1,
    step: float = NESTED_STEP,
    tol: float = 1e-6,
) -> int:
    """Numerical rank of the directions reachable from ``fields`` at ``x``.

    Stacks the given fields and all iterated brackets up to nesting ``depth``
    (depth 1 adds [f_i, f_j], depth 2 adds [f_i, [f_j, f_k]], and so on),
    evaluates everything at ``x``, and counts singular values above
    ``tol`` times the largest.  Full rank n means every direction of R^n is
    locally reachable.
    """
    if not fields:
        raise ValueError("need at least one field")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    x = np.asarray(x, dtype=float)
    layers: list[list[VectorField]] = [list(fields)]
    for _ in range(depth):
        prev = layers[-1]
        layers.append([bracket_field(base, w, step) for base in fields for w in prev])
    vectors = [fld(x) for layer in layers for fld in layer]
    stacked = np.column_stack(vectors)
    svals = np.linalg.svd(stacked, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


def linear_field(a_matrix, label: str = "linear") -> VectorField:
    """Field x -> A x with its exact Jacobian A."""
    a_matrix = np.array(a_matrix, dtype=float)
    if a_matrix.ndim != 2 or a_matrix.shape[0] != a_matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a_matrix.shape}")
    n = a_matrix.shape[0]
    return VectorField(n, lambda x: a_matrix @ x, lambda x: a_matrix.copy(), label)


def constant_field(c, label: str = "const") -> VectorField:
    """Field x -> c with zero Jacobian."""
    c = np.array(c, dtype=float).reshape(-1)
    n = c.size
    return VectorField(n, lambda x: c.copy(), lambda x: np.zeros((n, n)), label)


def scaled(field: VectorField, factor: float) -> VectorField:
    """Field x -> factor * f(x), keeping the analytic Jacobian if present."""
    factor = float(factor)
    jac = None
    if field.jacobian is not None:
        jac = lambda x: factor * np.asarray(field.jacobian(x), dtype=float)
    return VectorField(
        dim=field.dim,
        eval=lambda x: factor * field(x),
        jacobian=jac,
        label=f"{factor:g}*{field.label}",
    )
