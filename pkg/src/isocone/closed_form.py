"""Closed forms for the extremal cone-constrained body of unit diameter.

For an aperture theta the body consists of three pieces of revolution about
the x-axis: the cone segment up to x = a, the band of the radius-1/2 ball
centered at ((a+b)/2, 0, 0) on [a, b], and the unit spherical cap beyond
x = b.  This module evaluates the constants a and b, the junction radius,
the piecewise meridian radius, the three part volumes and the total volume,
all as explicit functions of theta.

Everything is expressed through cos(theta) to stay stable at both ends of
the admissible range.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point2, RotationalProfile

THETA_MIN = math.pi / 3.0

__all__ = [
    "THETA_MIN",
    "DeltaParams",
    "PartVolumes",
    "check_aperture",
    "delta_params",
    "delta_profile",
    "part_volumes",
    "profile_radius",
    "sweep_table",
    "tan_half_angle",
    "write_sweep_csv",
]


def check_aperture(theta: float) -> float:
    """Validate the aperture against the admissible range [pi/3, pi)."""
    theta = float(theta)
    if not (THETA_MIN <= theta < math.pi):
        raise ValueError("aperture out of range")
    return theta


def tan_half_angle(theta: float) -> float:
    """tan(theta/2), computed in the form that stays stable across the range."""
    c = math.cos(theta)
    if c > -0.9:
        return math.sin(theta) / (1.0 + c)
    return math.tan(0.5 * theta)


@dataclass(frozen=True)
class DeltaParams:
    """Derived constants and junction points of the extremal body."""

    theta: float
    a: float
    b: float
    m: float  # (a + b) / 2, center abscissa of the middle ball
    r_j: float  # common junction radius at x = a and x = b
    c: float  # sqrt(1 - b^2), second coordinate of the upper cap junction
    p_plus: Point2
    p_minus: Point2
    q_plus: Point2
    q_minus: Point2


def delta_params(theta: float) -> DeltaParams:
    """Constants a, b, junction radius and junction points for the aperture."""
    theta = check_aperture(theta)
    c0 = math.cos(theta)
    s = 5.0 - 4.0 * c0
    rs = math.sqrt(s)
    a = (1.0 + c0) / rs
    b = (2.0 - c0) / rs
    r_j = math.sin(theta) / rs
    m = 0.5 * (a + b)
    c = math.sqrt(max(1.0 - b * b, 0.0))
    half_tan = tan_half_angle(theta)
    p_y = a * half_tan
    return DeltaParams(
        theta=theta,
        a=a,
        b=b,
        m=m,
        r_j=r_j,
        c=c,
        p_plus=(a, p_y),
        p_minus=(a, -p_y),
        q_plus=(b, c),
        q_minus=(b, -c),
    )


def profile_radius(theta: float, x):
    """Meridian radius r(x) of the extremal body, for x in [0, 1].

    Piecewise: x*tan(theta/2) on [0, a], the radius-1/2 circle arc on
    [a, b], and the unit-circle arc on [b, 1]; continuous at both junctions.
    Accepts a scalar or an array and mirrors the input shape.
    """
    p = delta_params(theta)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > 1.0) or not np.all(np.isfinite(xa)):
        raise ValueError("abscissa out of range")
    cone = xa * tan_half_angle(theta)
    band = np.sqrt(np.clip(0.25 - (xa - p.m) ** 2, 0.0, None))
    cap = np.sqrt(np.clip(1.0 - xa * xa, 0.0, None))
    r = np.where(xa <= p.a, cone, np.where(xa <= p.b, band, cap))
    if np.isscalar(x) or xa.ndim == 0:
        return float(r)
    return r


@dataclass(frozen=True)
class PartVolumes:
    """Volumes of the cone part, the middle band, the spherical cap, and their sum."""

    v1: float
    v2: float
    v3: float
    total: float


def part_volumes(theta: float) -> PartVolumes:
    """The three part volumes and the total volume of the extremal body."""
    theta = check_aperture(theta)
    c0 = math.cos(theta)
    s = 5.0 - 4.0 * c0
    s32 = s * math.sqrt(s)
    sin2 = 1.0 - c0 * c0
    v1 = math.pi * (1.0 + c0) * sin2 / (3.0 * s32)
    # the band and cap terms vanish at the ends of the range (cos(theta)
    # at 1/2 and at -1); clamp their cancellation noise to keep parts >= 0
    v2 = max(math.pi * (7.0 - 18.0 * c0 + 6.0 * c0 * c0 + 4.0 * c0 ** 3) / (6.0 * s32), 0.0)
    v3 = max(
        2.0 * math.pi / 3.0
        + math.pi * (2.0 - c0) ** 3 / (3.0 * s32)
        - math.pi * (2.0 - c0) / math.sqrt(s),
        0.0,
    )
    total = 2.0 * math.pi / 3.0 - math.pi * (35.0 - 38.0 * c0 + 8.0 * c0 * c0) / (6.0 * s32)
    return PartVolumes(v1=v1, v2=v2, v3=v3, total=total)


def _allocate(lengths: list[float], n_free: int) -> list[int]:
    """Split ``n_free`` interior samples across pieces, proportional to length."""
    total = sum(lengths)
    raw = [length / total * n_free for length in lengths]
    counts = [int(c) for c in raw]
    remainder = n_free - sum(counts)
    order = sorted(range(len(raw)), key=lambda i: raw[i] - counts[i], reverse=True)
    for i in order[:remainder]:
        counts[i] += 1
    return counts


def delta_profile(theta: float, n_knots: int = 256) -> RotationalProfile:
    """Discretized meridian profile with exact knots at both junctions.

    Knots are spread over the three pieces proportionally to arc length; the
    junction abscissas a and b carry the exact junction radius so junction
    identities hold exactly at knots.
    """
    p = delta_params(theta)
    if n_knots < 8:
        raise ValueError("n_knots must be at least 8")
    half_tan = tan_half_angle(theta)
    band = p.b - p.a > 1e-15

    cone_len = math.hypot(p.a, p.r_j)
    cap_angle = math.acos(min(p.b, 1.0))
    if band:
        psi_a = math.atan2(p.r_j, p.a - p.m)
        psi_b = math.atan2(p.r_j, p.b - p.m)
        band_len = 0.5 * (psi_a - psi_b)
        lengths = [cone_len, band_len, cap_angle]
    else:
        lengths = [cone_len, cap_angle]

    # Interior samples: junctions and endpoints are placed explicitly.
    n_free = n_knots - (4 if band else 3)
    counts = _allocate(lengths, max(n_free, 0))

    xs: list[np.ndarray] = []
    rs: list[np.ndarray] = []

    cone_x = np.linspace(0.0, p.a, counts[0] + 2)
    cone_r = cone_x * half_tan
    cone_r[-1] = p.r_j
    xs.append(cone_x)
    rs.append(cone_r)

    if band:
        psi = np.linspace(psi_a, psi_b, counts[1] + 2)[1:]
        band_x = p.m + 0.5 * np.cos(psi)
        band_r = 0.5 * np.sin(psi)
        band_x[-1] = p.b
        band_r[-1] = p.r_j
        xs.append(band_x)
        rs.append(band_r)

    phi = np.linspace(cap_angle, 0.0, counts[-1] + 2)[1:]
    cap_x = np.cos(phi)
    cap_r = np.sin(phi)
    cap_x[-1] = 1.0
    cap_r[-1] = 0.0
    xs.append(cap_x)
    rs.append(cap_r)

    x = np.concatenate(xs)
    r = np.concatenate(rs)
    # Guard against floating-point ties right after a junction.
    keep = np.concatenate(([True], np.diff(x) > 0.0))
    return RotationalProfile(np.column_stack((x[keep], r[keep])))


def sweep_table(theta_min: float, theta_max: float, n: int) -> list[tuple[float, ...]]:
    """Rows (theta, a, b, r_j, v1, v2, v3, v_total) on an even theta grid."""
    if not (THETA_MIN <= theta_min < theta_max < math.pi) or n < 2:
        raise ValueError("invalid sweep range")
    rows = []
    for theta in np.linspace(theta_min, theta_max, n):
        p = delta_params(float(theta))
        v = part_volumes(float(theta))
        rows.append((p.theta, p.a, p.b, p.r_j, v.v1, v.v2, v.v3, v.total))
    return rows


SWEEP_HEADER = "theta,a,b,r_j,v1,v2,v3,v_total"


def write_sweep_csv(rows: list[tuple[float, ...]], stream: io.TextIOBase) -> None:
    """Write sweep rows as CSV: 17-significant-digit decimals, LF endings."""
    stream.write(SWEEP_HEADER + "\n")
    for row in rows:
        stream.write(",".join(format(v, ".17g") for v in row) + "\n")
