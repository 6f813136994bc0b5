"""Small shared numeric helpers."""

from __future__ import annotations

import math

import numpy as np


def angle_deg(u: np.ndarray, v: np.ndarray) -> float:
    """Angle between two vectors in degrees, in [0, 180].

    Returns 0.0 when either vector is (numerically) zero, which is the
    convention wanted by the callers: a missing direction imposes no turn
    constraint.
    """
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    c = float(np.dot(u, v)) / (nu * nv)
    c = min(1.0, max(-1.0, c))
    return math.degrees(math.acos(c))


def fmt(value: float) -> str:
    """Deterministic shortest round-trip formatting for CSV output."""
    return repr(float(value))
