"""Distance, volume, and membership oracles."""

import json
import math

import numpy as np
import pytest

from isocone.closed_form import delta_params, delta_profile, part_volumes
from isocone.geometry import (
    ConvexPolygon,
    RotationalProfile,
    make_random_convex_polygon,
    polygon_diameter,
)
from isocone.metrics import (
    delta_bounding_box,
    delta_membership,
    delta_membership_mask,
    hausdorff,
    hausdorff_to_centered_disk,
    monte_carlo_volume,
    revolution_diameter,
    revolution_volume,
    sup_distance,
)

UNIT_SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def translated(polygon, tx, ty):
    return ConvexPolygon(polygon.vertices + (tx, ty))


class TestHausdorff:
    def test_identical(self):
        assert hausdorff(UNIT_SQUARE, UNIT_SQUARE) == 0.0

    def test_translation(self):
        assert hausdorff(UNIT_SQUARE, translated(UNIT_SQUARE, 0.3, 0.0)) == pytest.approx(0.3)

    def test_nested_directed_zero(self):
        inner = ConvexPolygon(UNIT_SQUARE.vertices * 0.5 + 0.25)
        # inner is strictly inside, so the distance is sup over the square
        # of the distance to the shrunken square: attained at a corner
        assert hausdorff(inner, UNIT_SQUARE) == pytest.approx(0.25 * math.sqrt(2.0))

    def test_against_dense_sampling(self):
        angles = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        radius = 1.0 / math.sqrt(math.pi)  # unit-area disk
        disk = ConvexPolygon(np.column_stack((radius * np.cos(angles), radius * np.sin(angles))))
        square = ConvexPolygon([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
        exact = hausdorff(disk, square)

        def boundary_points(polygon, per_edge=200):
            v = polygon.vertices
            nxt = np.roll(v, -1, axis=0)
            t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
            return (v[:, None, :] + t[None, :, None] * (nxt - v)[:, None, :]).reshape(-1, 2)

        pa = boundary_points(disk)
        pb = boundary_points(square)
        d = np.sqrt(np.sum((pa[:, None, :] - pb[None, :, :]) ** 2, axis=-1))
        brute = max(d.min(axis=1).max(), d.min(axis=0).max())
        assert exact == pytest.approx(brute, abs=1e-3)
        assert exact > 0.0

    def test_metric_properties(self):
        polygons = [make_random_convex_polygon(12, seed) for seed in range(30)]
        for i in range(0, 28, 3):
            a, b, c = polygons[i], polygons[i + 1], polygons[i + 2]
            assert abs(hausdorff(a, b) - hausdorff(b, a)) < 1e-12
            assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12

    def test_triangle_inequality_random_triples(self):
        rng = np.random.Generator(np.random.PCG64(11))
        for _ in range(200):
            i, j, k = rng.integers(0, 4000, 3)
            a = make_random_convex_polygon(8, int(i))
            b = make_random_convex_polygon(8, int(j))
            c = make_random_convex_polygon(8, int(k))
            assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12


class TestHausdorffToDisk:
    def test_square_vs_disk_support_formula(self):
        square = ConvexPolygon([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
        rho = math.sqrt(1.0 / math.pi)
        # corners stick out by sqrt(2)/2 - rho; edges fall short by rho - 1/2
        expected = max(math.sqrt(0.5) - rho, rho - 0.5)
        assert hausdorff_to_centered_disk(square, rho) == pytest.approx(expected, abs=1e-15)

    def test_polygon_off_origin(self):
        shifted = translated(UNIT_SQUARE, 3.0, 0.0)  # origin outside
        d = hausdorff_to_centered_disk(shifted, 0.5)
        # farthest disk point from the square is (-0.5, 0); farthest square
        # vertex from the disk is (4, 1)
        expected = max(3.5, math.hypot(4.0, 1.0) - 0.5)
        assert d == pytest.approx(expected, abs=1e-12)


class TestSupDistance:
    def test_square_to_itself(self):
        assert sup_distance(UNIT_SQUARE, UNIT_SQUARE) == pytest.approx(math.sqrt(2.0))

    def test_single_points(self):
        assert sup_distance([(0.0, 0.0)], [(3.0, 4.0)]) == pytest.approx(5.0)

    def test_equals_diameter_on_self(self):
        for seed in range(50):
            p = make_random_convex_polygon(16, seed)
            assert sup_distance(p, p) == pytest.approx(polygon_diameter(p), abs=1e-12)

    def test_dominates_hausdorff(self):
        for seed in range(0, 2000, 2):
            a = make_random_convex_polygon(8, seed)
            b = make_random_convex_polygon(8, seed + 1)
            assert sup_distance(a, b) >= hausdorff(a, b) - 1e-12


class TestRevolutionVolume:
    def test_unit_cylinder(self):
        assert revolution_volume(RotationalProfile([(0, 1), (1, 1)])) == pytest.approx(math.pi)

    def test_unit_cone(self):
        assert revolution_volume(RotationalProfile([(0, 0), (1, 1)])) == pytest.approx(math.pi / 3)

    def test_unit_ball(self):
        x = np.cos(np.linspace(math.pi, 0.0, 4096))
        profile = RotationalProfile(np.column_stack((x, np.sqrt(np.clip(1 - x * x, 0, None)))))
        assert revolution_volume(profile) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-6)

    def test_matches_closed_form_on_grid(self):
        # fine enough that the inscribed-profile deficit sits below 1e-9
        for theta in np.linspace(math.pi / 3, math.pi - 1e-3, 49):
            v = revolution_volume(delta_profile(float(theta), 65536))
            assert v == pytest.approx(part_volumes(float(theta)).total, abs=1e-9)


class TestRevolutionDiameter:
    def test_half_ball_profile(self):
        x = 0.5 * np.cos(np.linspace(math.pi, 0.0, 2048))
        profile = RotationalProfile(np.column_stack((x, np.sqrt(np.clip(0.25 - x * x, 0, None)))))
        assert revolution_diameter(profile) == pytest.approx(1.0, abs=1e-6)

    def test_unit_cone_rim(self):
        # rim-to-rim beats apex-to-rim: max(sqrt(2), 2) = 2
        assert revolution_diameter(RotationalProfile([(0, 0), (1, 1)])) == pytest.approx(2.0)

    def test_matches_brute_force_sampling(self):
        rng = np.random.Generator(np.random.PCG64(5))
        for _ in range(5):
            x = np.sort(rng.random(12))
            x[0], x[-1] = 0.0, 1.0
            bumps = np.sqrt(np.clip((x - x[0]) * (x[-1] - x), 0.0, None))
            profile = RotationalProfile(np.column_stack((x, 0.8 * bumps)))
            exact = revolution_diameter(profile)

            # antipodal meridian pairs on a fine abscissa grid
            grid = np.linspace(0.0, 1.0, 400)
            r = np.interp(grid, x, profile.r)
            dx = grid[:, None] - grid[None, :]
            rr = r[:, None] + r[None, :]
            antipodal = math.sqrt(float(np.max(dx * dx + rr * rr)))
            assert exact == pytest.approx(antipodal, abs=1e-3)

            # random 3D surface pairs never exceed the reduction
            phi1 = rng.random(10_000) * 2 * math.pi
            phi2 = rng.random(10_000) * 2 * math.pi
            x1 = rng.random(10_000)
            x2 = rng.random(10_000)
            r1 = np.interp(x1, x, profile.r)
            r2 = np.interp(x2, x, profile.r)
            d3 = np.sqrt(
                (x1 - x2) ** 2
                + (r1 * np.cos(phi1) - r2 * np.cos(phi2)) ** 2
                + (r1 * np.sin(phi1) - r2 * np.sin(phi2)) ** 2
            )
            assert float(np.max(d3)) <= exact + 1e-12


class TestDeltaMembership:
    def test_origin(self):
        assert delta_membership(math.pi / 2, (0.0, 0.0, 0.0))

    def test_sphere_pole(self):
        assert delta_membership(math.pi / 2, (1.0, 0.0, 0.0))

    def test_just_outside_middle_ball(self):
        m = delta_params(math.pi / 2).m
        assert not delta_membership(math.pi / 2, (m, 0.5 + 1e-9, 0.0))
        assert delta_membership(math.pi / 2, (m, 0.5, 0.0))

    def test_mask_agrees_with_scalar(self):
        rng = np.random.Generator(np.random.PCG64(2))
        pts = rng.random((500, 3)) * np.array([1.4, 1.2, 1.2]) - np.array([0.2, 0.6, 0.6])
        mask = delta_membership_mask(math.pi / 2, pts)
        for point, flag in zip(pts[:100], mask[:100]):
            assert delta_membership(math.pi / 2, point) == bool(flag)


class TestMonteCarlo:
    def test_unit_ball(self):
        def member(pts):
            return np.einsum("ij,ij->i", pts, pts) <= 1.0

        est = monte_carlo_volume(member, ((-1, 1), (-1, 1), (-1, 1)), 1_000_000, 123)
        assert abs(est.value - 4.0 * math.pi / 3.0) <= 4.0 * est.std_error

    def test_deterministic(self):
        def member(pts):
            return np.einsum("ij,ij->i", pts, pts) <= 1.0

        a = monte_carlo_volume(member, ((-1, 1), (-1, 1), (-1, 1)), 100_000, 9)
        b = monte_carlo_volume(member, ((-1, 1), (-1, 1), (-1, 1)), 100_000, 9)
        assert a == b

    def test_chunking_invariance(self):
        def member(pts):
            return np.einsum("ij,ij->i", pts, pts) <= 1.0

        a = monte_carlo_volume(member, ((-1, 1), (-1, 1), (-1, 1)), 50_000, 4, chunk=7_919)
        b = monte_carlo_volume(member, ((-1, 1), (-1, 1), (-1, 1)), 50_000, 4)
        assert a.value == b.value

    def test_delta_body_quick(self):
        theta = math.pi / 2
        est = monte_carlo_volume(
            lambda pts: delta_membership_mask(theta, pts),
            delta_bounding_box(theta),
            200_000,
            17,
        )
        assert abs(est.value - part_volumes(theta).total) <= 5.0 * est.std_error

    def test_delta_body_across_grid(self):
        # 4 standard errors at 1e6 samples per aperture, one reseed allowed
        for i, theta in enumerate(np.linspace(math.pi / 3, math.pi - 1e-3, 49)):
            closed = part_volumes(float(theta)).total
            for seed in (1000 + i, 2000 + i):
                est = monte_carlo_volume(
                    lambda pts: delta_membership_mask(float(theta), pts),
                    delta_bounding_box(float(theta)),
                    1_000_000,
                    seed,
                )
                if abs(est.value - closed) <= 4.0 * est.std_error:
                    break
            else:
                pytest.fail(f"estimate off by >4se for both seeds at theta={theta}")

    def test_zero_hits_flag(self):
        est = monte_carlo_volume(
            lambda pts: np.zeros(len(pts), dtype=bool), ((0, 1), (0, 1), (0, 1)), 1000, 1
        )
        assert est.value == 0.0 and est.zero_hits

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            monte_carlo_volume(lambda pts: np.ones(len(pts), bool), ((0, 1),) * 3, 10, 1)

    def test_json_schema(self):
        est = monte_carlo_volume(
            lambda pts: np.ones(len(pts), dtype=bool), ((0, 1), (0, 1), (0, 1)), 1000, 3
        )
        data = json.loads(est.to_json())
        assert set(data) == {"value", "std_error", "samples", "seed"}
        assert data["value"] == 1.0 and data["std_error"] == 0.0
