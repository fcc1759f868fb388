"""Steiner symmetrization of convex polygons and revolution symmetrals.

The planar symmetrization replaces every chord parallel to a line L through
the origin by an equal-length chord centered on the perpendicular line
through the origin.  For polygons this is computed exactly: chord length is
piecewise linear in the abscissa along the perpendicular, so collecting the
vertex abscissas as breakpoints loses nothing.  Area is preserved and the
diameter never grows.

The 3D symmetral replaces each cross-section perpendicular to an axis by a
centered disk of equal area, turning any convex body into a solid of
revolution of the same volume; it is represented here by slicing.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .geometry import ConvexPolygon, Direction2, RotationalProfile, polygon_area
from .metrics import hausdorff_to_centered_disk

__all__ = [
    "ConvergenceTrace",
    "SlicedBody",
    "random_symmetrization_run",
    "slice_convex_hull",
    "sliced_body_volume",
    "steiner_symmetral_profile",
    "steiner_symmetrize",
]


def _rotate(points: np.ndarray, angle: float) -> np.ndarray:
    if angle == 0.0:
        return points.copy()
    c, s = math.cos(angle), math.sin(angle)
    return points @ np.array([[c, s], [-s, c]])


def _boundary_chains(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper boundary chains of a CCW convex vertex loop.

    Both chains come back with strictly increasing x spanning the full
    extent; a vertical edge at either extreme is folded into the chain on
    its own side.
    """
    n = len(v)
    order = np.lexsort((v[:, 1], v[:, 0]))
    i_min, i_max = order[0], order[-1]
    rolled = np.roll(v, -i_min, axis=0)
    j = (i_max - i_min) % n
    lower = rolled[: j + 1]
    upper = np.vstack((rolled[j:], rolled[:1]))[::-1]
    if len(lower) > 1 and lower[-1, 0] == lower[-2, 0]:
        lower = lower[:-1]
    if len(upper) > 1 and upper[0, 0] == upper[1, 0]:
        upper = upper[1:]
    return lower, upper


def steiner_symmetrize(polygon: ConvexPolygon, direction) -> ConvexPolygon:
    """Steiner symmetrization of the polygon about a line through the origin.

    ``direction`` is the orientation of the chord line L (a ``Direction2``
    or a plain angle in radians); the output is symmetric about the
    perpendicular line through the origin, convex, of equal area, and of no
    larger diameter.
    """
    phi = direction.angle if isinstance(direction, Direction2) else float(direction) % math.pi
    tilt = 0.5 * math.pi - phi  # rotate so chords become vertical
    w = _rotate(polygon.vertices, tilt)
    lower, upper = _boundary_chains(w)
    breaks = np.unique(w[:, 0])
    y_low = np.interp(breaks, lower[:, 0], lower[:, 1])
    y_up = np.interp(breaks, upper[:, 0], upper[:, 1])
    half = 0.5 * np.clip(y_up - y_low, 0.0, None)
    bottom = np.column_stack((breaks, -half))
    top = np.column_stack((breaks[::-1], half[::-1]))
    return ConvexPolygon(_rotate(np.vstack((bottom, top)), -tilt))


@dataclass(frozen=True)
class ConvergenceTrace:
    """Per-step record of a random symmetrization run.

    The lists hold ``steps + 1`` entries: the initial state followed by one
    entry per symmetrization.  Areas stay constant across the trace;
    distances are to the origin-centered disk of equal area.
    """

    steps: int
    hausdorff_to_disk: tuple[float, ...]
    areas: tuple[float, ...]
    seed: int

    def to_csv(self, stream: io.TextIOBase) -> None:
        stream.write("step,area,hausdorff_to_disk\n")
        for i, (area, dist) in enumerate(zip(self.areas, self.hausdorff_to_disk)):
            stream.write(f"{i},{area!r},{dist!r}\n")

    def metadata(self) -> dict:
        """Sidecar data from which the direction list can be regenerated."""
        return {
            "seed": self.seed,
            "steps": self.steps,
            "generator": "PCG64",
            "directions": "uniform on [0, pi)",
        }

    def metadata_json(self) -> str:
        return json.dumps(self.metadata())


def random_symmetrization_run(polygon: ConvexPolygon, k: int, seed: int) -> ConvergenceTrace:
    """Apply ``k`` symmetrizations with i.i.d. uniform directions on [0, pi).

    Deterministic per ``(polygon, k, seed)``.  After each step the polygon
    is rescaled about the origin by the (sub-1e-8) factor that restores the
    initial area exactly, so vertex merging inside long runs cannot
    accumulate area drift; each individual symmetrization is area-exact on
    its own.
    """
    if k < 1:
        raise ValueError("need at least one step")
    rng = np.random.Generator(np.random.PCG64(seed))
    area0 = polygon_area(polygon)
    disk_radius = math.sqrt(area0 / math.pi)
    areas = [area0]
    dists = [hausdorff_to_centered_disk(polygon, disk_radius)]
    current = polygon
    for _ in range(k):
        phi = float(rng.random()) * math.pi
        current = steiner_symmetrize(current, phi)
        area = polygon_area(current)
        factor = math.sqrt(area0 / area)
        if factor != 1.0:
            current = ConvexPolygon(current.vertices * factor)
            area = polygon_area(current)
        areas.append(area)
        dists.append(hausdorff_to_centered_disk(current, disk_radius))
    return ConvergenceTrace(
        steps=k,
        hausdorff_to_disk=tuple(dists),
        areas=tuple(areas),
        seed=seed,
    )


@dataclass(frozen=True)
class SlicedBody:
    """Convex 3D body given by parallel cross-sections along an axis."""

    slices: tuple[tuple[float, ConvexPolygon], ...]

    def __post_init__(self) -> None:
        xs = [x for x, _ in self.slices]
        if any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
            raise ValueError("slice abscissas must be strictly increasing")


def steiner_symmetral_profile(body: SlicedBody) -> RotationalProfile:
    """Meridian profile of the revolution body with equal-area circular sections.

    Each section of area A becomes a disk of radius sqrt(A/pi); the
    revolution volume matches the sliced body's volume as the slice count
    grows.
    """
    if len(body.slices) < 2:
        raise ValueError("empty slices")
    knots = [
        (x, math.sqrt(max(polygon_area(section), 0.0) / math.pi))
        for x, section in body.slices
    ]
    return RotationalProfile(knots)


def sliced_body_volume(body: SlicedBody) -> float:
    """Trapezoidal volume of the sliced body from its section areas."""
    xs = np.array([x for x, _ in body.slices])
    areas = np.array([polygon_area(section) for _, section in body.slices])
    return float(np.trapezoid(areas, xs))


def _axis_frame(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``direction`` to an orthonormal frame."""
    t = np.array([1.0, 0.0, 0.0]) if abs(direction[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = t - np.dot(t, direction) * direction
    u /= np.linalg.norm(u)
    return u, np.cross(direction, u)


def slice_convex_hull(points, n_slices: int = 256, direction=(1.0, 0.0, 0.0)) -> SlicedBody:
    """Cross-sections of the convex hull of 3D points, perpendicular to an axis.

    Sections are taken at the ``n_slices`` midplanes of an even split of the
    hull's extent along ``direction``; each is the exact polygon where the
    plane cuts the hull.  Slices too thin to form a polygon are skipped.
    """
    pts = np.asarray(points, dtype=float)
    if n_slices < 2:
        raise ValueError("need at least 2 slices")
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("direction must be a nonzero vector")
    d = d / norm
    u, w = _axis_frame(d)
    hull = ConvexHull(pts)
    edges = np.unique(
        np.sort(
            np.vstack([hull.simplices[:, [0, 1]], hull.simplices[:, [1, 2]], hull.simplices[:, [0, 2]]]),
            axis=1,
        ),
        axis=0,
    )
    s = pts @ d
    y = pts @ u
    z = pts @ w
    s0, s1 = float(np.min(s[hull.vertices])), float(np.max(s[hull.vertices]))
    step = (s1 - s0) / n_slices
    sa, sb = s[edges[:, 0]], s[edges[:, 1]]
    slices: list[tuple[float, ConvexPolygon]] = []
    for i in range(n_slices):
        xc = s0 + (i + 0.5) * step
        crossing = ((sa - xc) * (sb - xc) <= 0.0) & (sa != sb)
        if np.count_nonzero(crossing) < 3:
            continue
        t = (xc - sa[crossing]) / (sb[crossing] - sa[crossing])
        ys = y[edges[crossing, 0]] + t * (y[edges[crossing, 1]] - y[edges[crossing, 0]])
        zs = z[edges[crossing, 0]] + t * (z[edges[crossing, 1]] - z[edges[crossing, 0]])
        section = np.column_stack((ys, zs))
        try:
            polygon = ConvexPolygon(section[ConvexHull(section).vertices])
        except (QhullError, ValueError):
            continue
        slices.append((xc, polygon))
    if len(slices) < 2:
        raise ValueError("degenerate body")
    return SlicedBody(tuple(slices))
