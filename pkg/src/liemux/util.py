"""Small shared numeric helpers."""

from __future__ import annotations

import math


def wrap_angle(theta: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    w = math.remainder(float(theta), math.tau)
    if w <= -math.pi:
        w += math.tau
    return w
