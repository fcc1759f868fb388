"""Planar convex polygons and meridian profiles of solids of revolution.

Everything lives on the unit-diameter scale used throughout the toolkit:
polygons are counterclockwise vertex arrays, profiles are piecewise-linear
concave radius functions r(x) whose revolution about the x-axis is a convex
body.  All containers are immutable after construction and all operations
are pure functions, so values can be shared freely across threads.

Randomness always comes from an explicitly seeded numpy PCG64 generator;
no module-level random state is ever touched.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

# Cross products below this fraction of the squared extent count as collinear.
COLLINEAR_REL_TOL = 1e-12
# Slack for the discrete concavity check on profile knots.
CONCAVITY_TOL = 1e-9

# Plain coordinate containers; heavier wrappers buy nothing here.
Point2 = tuple[float, float]
Point3 = tuple[float, float, float]


@dataclass(frozen=True)
class Direction2:
    """Orientation of a symmetrization line through the origin, in [0, pi)."""

    angle: float

    def __post_init__(self) -> None:
        a = float(self.angle) % math.pi
        if not math.isfinite(a):
            raise ValueError("direction angle must be finite")
        object.__setattr__(self, "angle", a)


def _signed_area2(v: np.ndarray) -> float:
    """Twice the signed (CCW-positive) area of the closed vertex loop."""
    x, y = v[:, 0], v[:, 1]
    return float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _edge_crosses(v: np.ndarray) -> np.ndarray:
    """Cross product at each vertex of the two incident edges."""
    prev = v - np.roll(v, 1, axis=0)
    nxt = np.roll(v, -1, axis=0) - v
    return prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0]


def _merge_collinear(v: np.ndarray, tol: float) -> np.ndarray:
    """Drop vertices whose turn is below ``tol``, keeping the polygon inscribed.

    Removals within one pass are pairwise non-adjacent, so each discards only
    the local sliver triangle (area <= tol/2) between its two neighbours; the
    polygon never grows and convexity is never manufactured out of a genuinely
    reflex vertex (large negative turns are kept and rejected by validation).
    """
    while len(v) > 3:
        cross = _edge_crosses(v)
        small = np.abs(cross) < tol
        if not small.any():
            break
        idx = np.flatnonzero(small)[::2]
        if len(idx) > 1 and idx[0] == 0 and idx[-1] == len(v) - 1:
            idx = idx[:-1]  # cyclic neighbours: drop one end of the pair
        keep = np.ones(len(v), dtype=bool)
        keep[idx] = False
        v = v[keep]
    return v


class ConvexPolygon:
    """Convex polygon stored as a read-only (n, 2) CCW vertex array.

    Construction normalizes the input: consecutive duplicates are dropped,
    clockwise input is reversed, near-collinear vertices (cross product below
    ``COLLINEAR_REL_TOL`` times the squared extent) are merged.  Anything that
    is not a strictly convex polygon after normalization is rejected.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices) -> None:
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("vertices must form an (n, 2) array")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        if len(v) >= 2:
            dup = np.all(v == np.roll(v, 1, axis=0), axis=1)
            v = v[~dup]
        if len(v) < 3:
            raise ValueError("degenerate polygon")
        if _signed_area2(v) < 0.0:
            v = v[::-1].copy()
        scale = float(np.max(np.abs(v)))
        tol = COLLINEAR_REL_TOL * max(scale * scale, 1e-300)
        v = _merge_collinear(v, tol)
        if len(v) < 3:
            raise ValueError("degenerate polygon")
        if _signed_area2(v) <= tol:
            raise ValueError("degenerate polygon")
        cross = _edge_crosses(v)
        if np.any(cross <= -tol):
            raise ValueError("polygon is not convex")
        v.setflags(write=False)
        self.vertices = v

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon(<{len(self.vertices)} vertices>)"


def polygon_area(polygon: ConvexPolygon) -> float:
    """Enclosed area (shoelace formula)."""
    return 0.5 * _signed_area2(polygon.vertices)


def polygon_diameter(polygon: ConvexPolygon) -> float:
    """Largest vertex-pair distance, found by rotating calipers.

    Exact for convex polygons: the diameter of a convex set is attained at
    extreme points.
    """
    v = polygon.vertices
    n = len(v)
    best = 0.0
    j = 1
    for i in range(n):
        i2 = (i + 1) % n
        ex, ey = v[i2, 0] - v[i, 0], v[i2, 1] - v[i, 1]
        for _ in range(n):
            j2 = (j + 1) % n
            sx, sy = v[j2, 0] - v[j, 0], v[j2, 1] - v[j, 1]
            if ex * sy - ey * sx > 0.0:
                j = j2
            else:
                break
        for k in (i, i2):
            d = (v[k, 0] - v[j, 0]) ** 2 + (v[k, 1] - v[j, 1]) ** 2
            if d > best:
                best = d
    return math.sqrt(best)


def polygon_contains(polygon: ConvexPolygon, point, tol: float = 1e-12) -> bool:
    """True if ``point`` lies in the polygon (boundary included)."""
    p = np.asarray(point, dtype=float)
    v = polygon.vertices
    nxt = np.roll(v, -1, axis=0)
    cross = (nxt[:, 0] - v[:, 0]) * (p[1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (p[0] - v[:, 0])
    scale = float(np.max(np.abs(v))) + abs(p[0]) + abs(p[1])
    return bool(np.all(cross >= -tol * max(scale, 1.0)))


def make_random_convex_polygon(n: int, seed: int) -> ConvexPolygon:
    """Convex hull of ``n`` points drawn uniformly from the unit disk.

    Deterministic for a given ``(n, seed)``; a degenerate draw (probability
    ~0) is retried on the same stream a bounded number of times.
    """
    if n < 3:
        raise ValueError("need at least 3 points")
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(100):
        radius = np.sqrt(rng.random(n))
        angle = rng.random(n) * (2.0 * math.pi)
        pts = np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))
        try:
            hull = ConvexHull(pts)
            return ConvexPolygon(pts[hull.vertices])
        except (QhullError, ValueError):
            continue
    raise ValueError("could not generate a non-degenerate polygon")


class RotationalProfile:
    """Piecewise-linear concave meridian radius r(x) of a convex revolution body.

    Knots are a read-only (n, 2) array of (x, r) pairs with strictly
    increasing x, r >= 0, and non-increasing slopes (within ``CONCAVITY_TOL``
    scaled by the local slope magnitude, so quadrature-level noise on steep
    segments does not reject a genuinely concave profile).
    """

    __slots__ = ("knots",)

    def __init__(self, knots) -> None:
        k = np.array(knots, dtype=float)
        if k.ndim != 2 or k.shape[1] != 2 or len(k) < 2:
            raise ValueError("knots must form an (n, 2) array with n >= 2")
        if not np.all(np.isfinite(k)):
            raise ValueError("knots must be finite")
        x, r = k[:, 0], k[:, 1]
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("knot abscissas must be strictly increasing")
        if np.any(r < -1e-12):
            raise ValueError("radii must be non-negative")
        np.clip(r, 0.0, None, out=r)
        slopes = np.diff(r) / np.diff(x)
        if len(slopes) > 1:
            slack = CONCAVITY_TOL * np.maximum(
                1.0, np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:]))
            )
            if np.any(np.diff(slopes) > slack):
                raise ValueError("profile is not concave")
        k.setflags(write=False)
        self.knots = k

    @property
    def x(self) -> np.ndarray:
        return self.knots[:, 0]

    @property
    def r(self) -> np.ndarray:
        return self.knots[:, 1]

    def __len__(self) -> int:
        return len(self.knots)

    def __repr__(self) -> str:
        return f"RotationalProfile(<{len(self.knots)} knots>)"


def profile_interp(profile: RotationalProfile, x) -> np.ndarray:
    """Radius at ``x`` by linear interpolation (0 outside the support)."""
    return np.interp(x, profile.x, profile.r, left=0.0, right=0.0)


def profile_to_polygon(profile: RotationalProfile, samples_per_segment: int = 1) -> ConvexPolygon:
    """Meridian cross-section {(x, +-r(x))} of the revolution body, CCW.

    Convex because r is concave.  Extra samples per segment land on the
    linear pieces and are merged away again by the polygon constructor.
    """
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be >= 1")
    if float(np.max(profile.r)) <= 0.0:
        raise ValueError("degenerate profile")
    xk = profile.x
    xs = [
        np.linspace(xk[i], xk[i + 1], samples_per_segment + 1)[:-1]
        for i in range(len(xk) - 1)
    ]
    xs.append(xk[-1:])
    x = np.concatenate(xs)
    r = profile_interp(profile, x)
    lower = np.column_stack((x, -r))
    upper = np.column_stack((x[::-1], r[::-1]))
    return ConvexPolygon(np.vstack((lower, upper)))


def polygon_to_json(polygon: ConvexPolygon) -> str:
    """Serialize as {"vertices": [[x, y], ...]}; round-trips exactly."""
    return json.dumps({"vertices": polygon.vertices.tolist()})


def polygon_from_json(text: str) -> ConvexPolygon:
    data = json.loads(text)
    return ConvexPolygon(data["vertices"])


def profile_to_json(profile: RotationalProfile) -> str:
    """Serialize as {"knots": [[x, r], ...]}; round-trips exactly."""
    return json.dumps({"knots": profile.knots.tolist()})


def profile_from_json(text: str) -> RotationalProfile:
    data = json.loads(text)
    return RotationalProfile(data["knots"])
