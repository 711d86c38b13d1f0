"""Floating-point brute-force probes that cross-validate the exact engine.

The probes never override exact results: callers compare a probe against a
claimed exact answer and flag disagreement.  Grid points are exact rationals
on an integer lattice (so membership at faces is classified exactly); only
the scalar estimates (limsup ratios, Hausdorff-excess ratios) run in floats.
Everything is deterministic: fixed iteration order, no randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactgeom import ConvexPoly, PolySet
from .linalg import Vec
from .multimaps import PolyMultimap

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"

DIVERGENCE_SENTINEL = 1e3


@dataclass(frozen=True)
class SamplingPlan:
    radius: Fraction = Fraction(1)
    grid_step: Fraction = Fraction(1, 64)
    direction_count: int = 16
    tolerance: float = 1e-6

    def __post_init__(self):
        if not (0 < self.grid_step < self.radius):
            raise ValueError("grid_step must be positive and below radius")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def _lattice(center: Vec, plan: SamplingPlan) -> tuple[np.ndarray, int]:
    """Integer-lattice grid of the box around center; returns (points, scale).

    Points are integers equal to scale * coordinate, so row tests against
    integer-canonical polyhedra are exact in int64.
    """
    denom = plan.grid_step.denominator
    for x in center:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    scale = denom
    step_int = int(plan.grid_step * scale)
    half = int(plan.radius / plan.grid_step)
    axes = []
    for x in center:
        c_int = int(x * scale)
        axes.append(c_int + step_int * np.arange(-half, half + 1, dtype=np.int64))
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
    return pts, scale


def _inside_poly(pts: np.ndarray, scale: int, poly: ConvexPoly) -> np.ndarray:
    # canonical H-forms have jointly-primitive integer rows, so the lattice
    # test pts @ a <= scale * b is exact in int64
    if poly.is_empty():
        return np.zeros(len(pts), dtype=bool)
    mask = np.ones(len(pts), dtype=bool)
    for a, b in poly.ineqs:
        av = np.array([int(x) for x in a], dtype=np.int64)
        mask &= pts @ av <= int(b) * scale
    for e, d in poly.eqs:
        ev = np.array([int(x) for x in e], dtype=np.int64)
        mask &= pts @ ev == int(d) * scale
    return mask


def _inside_set(pts: np.ndarray, scale: int, s: PolySet) -> np.ndarray:
    mask = np.zeros(len(pts), dtype=bool)
    for p in s.pieces:
        mask |= _inside_poly(pts, scale, p)
    return mask


def frechet_membership_probe(
    omega: PolySet,
    c: ConvexPoly,
    xbar: Vec,
    d: Vec,
    plan: SamplingPlan,
    claimed: bool,
) -> str:
    """Grid limsup plus radial test against a claimed exact membership."""
    pts, scale = _lattice(xbar, plan)
    mask = _inside_set(pts, scale, omega) & _inside_poly(pts, scale, c)
    center = np.array([int(x * scale) for x in xbar], dtype=np.int64)
    diffs = (pts[mask] - center).astype(np.float64) / scale
    norms = np.linalg.norm(diffs, axis=1)
    nz = norms > 0
    dvec = np.array([float(x) for x in d], dtype=np.float64)
    if nz.any():
        ratios = (diffs[nz] @ dvec) / norms[nz]
        limsup_ok = bool(ratios.max() <= plan.tolerance)
    else:
        limsup_ok = True
    radial_ok = any(
        c.contains(tuple(x + p * dd for x, dd in zip(xbar, d)))
        for p in (plan.grid_step, plan.radius)
    )
    probe_member = limsup_ok and radial_ok
    return CONSISTENT if probe_member == claimed else INCONSISTENT


def _axis_points(center: Fraction, plan: SamplingPlan, widen: int = 1):
    half = int(plan.radius / plan.grid_step) * widen
    return [center + k * plan.grid_step for k in range(-half, half + 1)]


def aubin_ratio_probe(
    F: PolyMultimap, c: ConvexPoly, xbar: Vec, ybar: Vec, plan: SamplingPlan
) -> float:
    """Max sampled Hausdorff-excess ratio for the Aubin inequality.

    Samples x, u in c cap B(xbar, radius); the excess of F(u) cap V over
    F(x) is estimated on output grids (a wider grid for the reference side).
    Returns math.inf as the divergence sentinel when some F(x) is empty
    while F(u) cap V is not.
    """
    if not F.graph.pieces:
        raise ValueError("empty samples")
    n, m = F.in_dim, F.out_dim
    import itertools

    x_grid = [
        pt
        for pt in itertools.product(*(_axis_points(xc, plan) for xc in xbar))
        if c.contains(pt)
    ]
    if not x_grid:
        raise ValueError("empty samples")
    y_big = list(itertools.product(*(_axis_points(yc, plan, widen=3) for yc in ybar)))
    y_big_arr = np.array([[float(v) for v in y] for y in y_big])
    in_v = np.array(
        [all(abs(v - yc) <= plan.radius for v, yc in zip(y, ybar)) for y in y_big]
    )

    samples: list[np.ndarray] = []
    samples_v: list[np.ndarray] = []
    keys: list[bytes] = []
    for x in x_grid:
        mask = np.array([F.contains(x, y) for y in y_big])
        samples.append(y_big_arr[mask])
        samples_v.append(y_big_arr[mask & in_v])
        keys.append(mask.tobytes())

    # the excess depends only on the two sample sets; fibers repeat across
    # grid points, so memoize by fiber signature
    excess_cache: dict[tuple[bytes, bytes], float] = {}

    def excess_of(j: int, i: int) -> float:
        key = (keys[j], keys[i])
        if key not in excess_cache:
            cand, ref = samples_v[j], samples[i]
            if len(cand) == 0:
                excess_cache[key] = 0.0
            elif len(ref) == 0:
                excess_cache[key] = math.inf
            else:
                d2 = cand[:, None, :] - ref[None, :, :]
                excess_cache[key] = float(
                    np.sqrt((d2 * d2).sum(axis=2)).min(axis=1).max()
                )
        return excess_cache[key]

    worst = 0.0
    xf = [np.array([float(v) for v in x]) for x in x_grid]
    for i in range(len(x_grid)):
        for j in range(len(x_grid)):
            if len(samples_v[j]) == 0:
                continue
            e = excess_of(j, i)
            if e == math.inf:
                return math.inf
            dist_xu = float(np.linalg.norm(xf[j] - xf[i]))
            if dist_xu == 0.0:
                continue
            worst = max(worst, e / dist_xu)
    return worst
