"""Closed-form capacities of the erasure channels, depolarizing reference
values, and single-use coherent information maximisation over the Bloch ball."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .channels import KrausChannel, check_mixed_params, make_depolarizing
from .info import binary_entropy, coherent_information
from .linalg import bloch_state, maximally_mixed

# t/n above which no code corrects every pattern of t erasures (large n)
RAINS_ERASURE_FRACTION = 1 / 3


@dataclass(frozen=True)
class CapacityPoint:
    epsilon: float
    delta: float
    q: float
    q2: float
    c: float


@dataclass(frozen=True)
class DepolarizingThresholds:
    nonadditivity_low: float = 0.25239
    all_positive_below: float = 0.25408
    q_vanishes_at: float = 1 / 3
    q2_vanishes_at: float = 2 / 3
    all_vanish_at: float = 1.0

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


DEPOLARIZING_THRESHOLDS = DepolarizingThresholds()


def _check_eps(epsilon: float) -> float:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    return float(epsilon)


def qec_capacities(epsilon: float) -> CapacityPoint:
    eps = _check_eps(epsilon)
    return CapacityPoint(eps, 0.0, max(0.0, 1 - 2 * eps), 1 - eps, 1 - eps)


def pec_capacities(epsilon: float) -> CapacityPoint:
    eps = _check_eps(epsilon)
    return CapacityPoint(eps, 0.0, 1 - eps, 1 - eps, 1.0)


def mixed_capacities(epsilon: float, delta: float) -> CapacityPoint:
    """Erasure probability ``epsilon``, phase-erasure probability ``delta``."""
    eps, dlt = check_mixed_params(epsilon, delta)
    return CapacityPoint(eps, dlt, max(0.0, 1 - dlt - 2 * eps), 1 - dlt - eps, 1 - eps)


def depolarizing_one_shot_classical(epsilon: float) -> float:
    """1 - H2(eps/2): the BSC obtained from orthogonal inputs and a matching measurement."""
    return 1.0 - binary_entropy(_check_eps(epsilon) / 2)


def depolarizing_coherent_info(epsilon: float) -> float:
    """Single-use coherent information of the depolarizing channel at I/2."""
    return coherent_information(make_depolarizing(epsilon), maximally_mixed(2))


def depolarizing_coherent_zero(lo: float = 0.2, hi: float = 0.3, width: float = 1e-4) -> tuple[float, float, float]:
    """Root of the I/2 coherent information in epsilon.

    Returns ``(root, lower, upper)`` where the sign change is confirmed on
    ``[lower, upper]`` and ``upper - lower <= width``.
    """
    root = brentq(depolarizing_coherent_info, lo, hi, xtol=1e-12)
    half = width / 2
    a, b = root - half * 0.999, root + half * 0.999
    if not depolarizing_coherent_info(a) > 0 > depolarizing_coherent_info(b):
        raise RuntimeError("coherent information does not change sign around the root")
    return root, a, b


def _bloch_grid(points: int) -> list[tuple[float, float, float]]:
    axis = np.linspace(-1.0, 1.0, points)
    return [
        (float(x), float(y), float(z))
        for x, y, z in itertools.product(axis, axis, axis)
        if x * x + y * y + z * z <= 1 + 1e-12
    ]


def _clip_to_ball(r: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(r)
    return r / n if n > 1 else r


def max_coherent_information(
    channel: KrausChannel,
    tol: float = 1e-6,
    grid_points: int = 17,
    tie_tol: float = 1e-9,
) -> tuple[float, np.ndarray]:
    """Maximise single-use coherent information over qubit input states.

    A coarse Bloch-coordinate grid is scanned first; among near-ties the
    lexicographically smallest (x, y, z) wins. A compass search then refines
    the best grid point until the step drops below ``tol``.
    """
    if channel.dim_in != 2:
        raise ValueError("only qubit-input channels are supported")

    def value(r) -> float:
        return coherent_information(channel, bloch_state(*r))

    grid = _bloch_grid(grid_points)
    vals = np.array([value(r) for r in grid])
    best_val = vals.max()
    idx = int(np.flatnonzero(vals >= best_val - tie_tol)[0])
    best = np.array(grid[idx])
    best_val = float(vals[idx])

    step = 1.0 / (grid_points - 1)
    moves = np.vstack([np.eye(3), -np.eye(3)])
    while step >= tol:
        improved = False
        for mv in moves:
            cand = _clip_to_ball(best + step * mv)
            v = value(cand)
            if v > best_val + tie_tol:
                best, best_val, improved = cand, v, True
                break
        if not improved:
            step /= 2
    return best_val, bloch_state(*best)


@dataclass(frozen=True)
class CapacityCurve:
    family: str
    x: tuple[float, ...]
    points: tuple[CapacityPoint, ...]
    rains_line: float | None = None


FAMILIES = ("qec", "mixed_equal", "pec")


def capacity_curve(family: str, grid: Sequence[float]) -> CapacityCurve:
    """Capacity table for one channel family.

    For ``mixed_equal`` the abscissa is the total erasure probability
    delta + epsilon with delta = epsilon.
    """
    family = family.replace("-", "_")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    xs = [float(x) for x in grid]
    if any(not 0.0 <= x <= 1.0 for x in xs):
        raise ValueError("grid points must lie in [0, 1]")
    if family == "qec":
        pts = [qec_capacities(x) for x in xs]
        return CapacityCurve(family, tuple(xs), tuple(pts), RAINS_ERASURE_FRACTION)
    if family == "pec":
        return CapacityCurve(family, tuple(xs), tuple(pec_capacities(x) for x in xs))
    return CapacityCurve(family, tuple(xs), tuple(mixed_capacities(x / 2, x / 2) for x in xs))
