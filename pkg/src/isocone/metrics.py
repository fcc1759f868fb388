"""Independent numerical oracles: set distances, revolution measures, Monte Carlo.

Every closed form in the toolkit is validated against something here that
computes the same quantity along a different route: exact per-segment
quadrature for revolution volumes, the meridian pair reduction for
revolution diameters, membership sampling for volumes, and support-function
or projection-based distances for convex sets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .closed_form import delta_params, profile_radius
from .geometry import ConvexPolygon, RotationalProfile

__all__ = [
    "VolumeEstimate",
    "delta_bounding_box",
    "delta_membership",
    "delta_membership_mask",
    "delta_volume_quadrature",
    "hausdorff",
    "hausdorff_to_centered_disk",
    "monte_carlo_volume",
    "revolution_diameter",
    "revolution_volume",
    "sup_distance",
]


def _distances_to_convex(points: np.ndarray, polygon: ConvexPolygon) -> np.ndarray:
    """Distance from each point to the polygon; 0 for points inside.

    Edge-wise closest-point projection, so nested sets get directed
    distance 0 rather than a spurious vertex-vertex gap.
    """
    v = polygon.vertices
    e = np.roll(v, -1, axis=0) - v
    rel = points[:, None, :] - v[None, :, :]  # (k, m, 2)
    cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
    inside = np.all(cross >= -1e-12, axis=1)
    ee = np.einsum("ij,ij->i", e, e)
    t = np.clip(np.einsum("kmj,mj->km", rel, e) / ee[None, :], 0.0, 1.0)
    foot = v[None, :, :] + t[:, :, None] * e[None, :, :]
    d = np.sqrt(np.min(np.einsum("kmj,kmj->km", points[:, None, :] - foot,
                                 points[:, None, :] - foot), axis=1))
    d[inside] = 0.0
    return d


def hausdorff(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Hausdorff distance between two convex polygons.

    Max of the two directed distances; each directed distance is evaluated
    from the source's vertices only, which is exact for convex sets because
    the distance-to-a-convex-set function attains its maximum at an extreme
    point.
    """
    d_ab = float(np.max(_distances_to_convex(a.vertices, b)))
    d_ba = float(np.max(_distances_to_convex(b.vertices, a)))
    return max(d_ab, d_ba)


def hausdorff_to_centered_disk(polygon: ConvexPolygon, radius: float) -> float:
    """Hausdorff distance to the origin-centered disk of the given radius.

    Uses the support-function identity for convex bodies: the distance is
    the largest deviation of the polygon's support function from the disk's
    constant support.  Candidate minimizers of the polygon support are the
    edge outward normals plus, when the origin is not interior, the
    directions opposite each vertex.
    """
    v = polygon.vertices
    norms = np.sqrt(np.einsum("ij,ij->i", v, v))
    outer = float(np.max(norms)) - radius

    e = np.roll(v, -1, axis=0) - v
    elen = np.sqrt(np.einsum("ij,ij->i", e, e))
    # Outward normal of a CCW edge is (ey, -ex).
    support = (v[:, 0] * e[:, 1] - v[:, 1] * e[:, 0]) / elen
    min_support = float(np.min(support))
    if min_support <= 0.0:
        # Origin on or outside the boundary: minima may also sit opposite vertices.
        u = -v / np.maximum(norms, 1e-300)[:, None]
        min_support = min(min_support, float(np.min(np.max(v @ u.T, axis=0))))
    inner = radius - min_support
    return max(outer, inner, 0.0)


def sup_distance(a, b) -> float:
    """sup of pairwise distances between the two vertex sets.

    Attained at extreme points for convex sets, so vertex pairs are exact.
    Accepts polygons or raw point arrays (single points included).
    """
    va = a.vertices if isinstance(a, ConvexPolygon) else np.atleast_2d(np.asarray(a, float))
    vb = b.vertices if isinstance(b, ConvexPolygon) else np.atleast_2d(np.asarray(b, float))
    diff = va[:, None, :] - vb[None, :, :]
    return float(np.sqrt(np.max(np.einsum("kmj,kmj->km", diff, diff))))


def revolution_volume(profile: RotationalProfile) -> float:
    """pi * integral of r(x)^2 dx, exact for the piecewise-linear radius.

    Each segment's integrand is a quadratic integrated in closed form, so
    the only error in oracle comparisons is the modelling error of the
    profile itself.
    """
    x, r = profile.x, profile.r
    dx = np.diff(x)
    r0, r1 = r[:-1], r[1:]
    return float(math.pi * np.sum(dx * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0))


def revolution_diameter(profile: RotationalProfile, block: int = 1024) -> float:
    """Diameter of the revolution body generated by the profile.

    For a body of revolution the farthest pair lies in a common meridian
    plane at antipodal azimuths, so the 3D diameter reduces to the maximum
    of sqrt((x1-x2)^2 + (r(x1)+r(x2))^2); for a piecewise-linear profile
    that maximum is attained at knot pairs.
    """
    x, r = profile.x, profile.r
    best = 0.0
    for i in range(0, len(x), block):
        dx = x[i : i + block, None] - x[None, :]
        rr = r[i : i + block, None] + r[None, :]
        best = max(best, float(np.max(dx * dx + rr * rr)))
    return math.sqrt(best)


def delta_membership(theta: float, point) -> bool:
    """True iff the 3D point lies in the extremal body for this aperture."""
    x1, x2, x3 = (float(c) for c in point)
    if not 0.0 <= x1 <= 1.0:
        return False
    return math.hypot(x2, x3) <= profile_radius(theta, x1)


def delta_membership_mask(theta: float, points: np.ndarray) -> np.ndarray:
    """Vectorized membership for an (n, 3) array of points."""
    pts = np.asarray(points, dtype=float)
    x1 = pts[:, 0]
    ok = (x1 >= 0.0) & (x1 <= 1.0)
    r = np.zeros(len(pts))
    if ok.any():
        r[ok] = profile_radius(theta, x1[ok])
    return ok & (pts[:, 1] ** 2 + pts[:, 2] ** 2 <= r * r)


def delta_bounding_box(theta: float) -> tuple[tuple[float, float], ...]:
    """Tight axis-aligned box [0,1] x [-r_max, r_max]^2 around the body."""
    p = delta_params(theta)
    r_max = 0.5 if p.b > p.a else p.r_j
    return ((0.0, 1.0), (-r_max, r_max), (-r_max, r_max))


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo volume with its binomial standard error."""

    value: float
    std_error: float
    samples: int
    seed: int
    zero_hits: bool = False

    def to_json(self) -> str:
        data = {
            "value": self.value,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }
        if self.zero_hits:
            data["warning"] = "zero hits"
        return json.dumps(data)


def monte_carlo_volume(member, bbox, n: int, seed: int, chunk: int = 1_000_000) -> VolumeEstimate:
    """Hit-fraction volume estimate inside an axis-aligned bounding box.

    ``member`` must accept an (k, 3) array and return a boolean mask; the
    box must contain the body.  Sampling is chunked but consumes the seeded
    PCG64 stream in a fixed order, so results are deterministic per seed.
    """
    if n < 1000:
        raise ValueError("need at least 1000 samples")
    lo = np.array([float(interval[0]) for interval in bbox])
    hi = np.array([float(interval[1]) for interval in bbox])
    if lo.shape != (3,) or np.any(hi <= lo):
        raise ValueError("bbox must be three non-empty intervals")
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    remaining = n
    while remaining > 0:
        m = min(chunk, remaining)
        pts = lo + rng.random((m, 3)) * (hi - lo)
        hits += int(np.count_nonzero(member(pts)))
        remaining -= m
    box_volume = float(np.prod(hi - lo))
    p_hat = hits / n
    return VolumeEstimate(
        value=p_hat * box_volume,
        std_error=box_volume * math.sqrt(p_hat * (1.0 - p_hat) / n),
        samples=n,
        seed=seed,
        zero_hits=hits == 0,
    )


def delta_volume_quadrature(theta: float) -> float:
    """Total volume by adaptive quadrature of the meridian radius squared.

    Independent of the printed volume formulas: integrates
    pi * r(x)^2 over [0, 1] with the junction abscissas as split points.
    """
    p = delta_params(theta)

    def integrand(x: float) -> float:
        return profile_radius(theta, x) ** 2

    value, _ = integrate.quad(integrand, 0.0, 1.0, points=[p.a, p.b], limit=200)
    return math.pi * value
