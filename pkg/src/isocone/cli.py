"""Command-line surface: parameters, tables, figures, traces, estimates, search.

Every command is deterministic given its flags; randomized commands require
an explicit --seed.  Angles are radians unless --degrees is passed.
Exit codes: 0 success, 2 usage or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .closed_form import (
    delta_params,
    delta_profile,
    part_volumes,
    sweep_table,
    write_sweep_csv,
)
from .geometry import (
    make_random_convex_polygon,
    polygon_area,
    polygon_diameter,
    polygon_from_json,
    polygon_to_json,
)
from .metrics import (
    delta_bounding_box,
    delta_membership_mask,
    delta_volume_quadrature,
    monte_carlo_volume,
    revolution_diameter,
    revolution_volume,
    sup_distance,
)
from .optimize import (
    FeasibleSpec,
    optimize_profile,
    wall_optimize,
    wall_spec,
    write_runlog_csv,
)
from .symmetrization import (
    random_symmetrization_run,
    slice_convex_hull,
    steiner_symmetral_profile,
    steiner_symmetrize,
)


def _theta(args) -> float:
    return math.radians(args.theta) if getattr(args, "degrees", False) else args.theta


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)


def _fmt(value: float) -> str:
    return format(value, ".6f")


def render_section_svg(theta: float) -> str:
    """Meridian-section figure: three boundary pieces plus junction planes.

    Fixed viewBox on the unit-sphere scale; coordinates are emitted with six
    decimals so the output is byte-stable and diffable.
    """
    p = delta_params(theta)

    def pt(x: float, y: float) -> str:
        yy = -y  # SVG y-axis points down
        if yy == 0.0:
            yy = 0.0  # normalize -0.0
        return f"{_fmt(x)},{_fmt(yy)}"

    cone_d = f"M {pt(p.a, p.p_plus[1])} L {pt(0.0, 0.0)} L {pt(p.a, p.p_minus[1])}"
    band_d = (
        f"M {pt(p.a, p.r_j)} A 0.5 0.5 0 0 1 {pt(p.b, p.c)} "
        f"M {pt(p.b, -p.c)} A 0.5 0.5 0 0 1 {pt(p.a, -p.r_j)}"
    )
    cap_d = f"M {pt(p.b, p.c)} A 1 1 0 0 1 {pt(p.b, -p.c)}"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.25 -1.25 2.5 2.5" '
        'width="500" height="500">',
        f'  <title>meridian section, aperture {_fmt(theta)} rad</title>',
        '  <g id="axes" stroke="#aaaaaa" stroke-width="0.005">',
        '    <line x1="-1.200000" y1="0.000000" x2="1.200000" y2="0.000000"/>',
        '    <line x1="0.000000" y1="-1.200000" x2="0.000000" y2="1.200000"/>',
        "  </g>",
        '  <g id="junction-planes" stroke="#444444" stroke-width="0.005">',
        f'    <line id="plane-a" x1="{_fmt(p.a)}" y1="-1.100000" x2="{_fmt(p.a)}" y2="1.100000"/>',
        f'    <line id="plane-b" x1="{_fmt(p.b)}" y1="-1.100000" x2="{_fmt(p.b)}" y2="1.100000"/>',
        "  </g>",
        '  <g id="boundary" fill="none" stroke="#000000" stroke-width="0.012">',
        f'    <path id="cone-piece" d="{cone_d}"/>',
        f'    <path id="band-piece" d="{band_d}"/>',
        f'    <path id="cap-piece" d="{cap_d}"/>',
        "  </g>",
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def _load_polygon(args):
    if args.infile is not None:
        with open(args.infile, "r", encoding="utf-8") as stream:
            return polygon_from_json(stream.read())
    if args.random is None:
        raise ValueError("provide --in FILE or --random N with --polygon-seed")
    if args.polygon_seed is None:
        raise ValueError("--random requires --polygon-seed")
    return make_random_convex_polygon(args.random, args.polygon_seed)


def cmd_params(args) -> int:
    p = delta_params(_theta(args))
    _emit(
        json.dumps(
            {
                "theta": p.theta,
                "a": p.a,
                "b": p.b,
                "m": p.m,
                "r_j": p.r_j,
                "c": p.c,
                "p_plus": list(p.p_plus),
                "p_minus": list(p.p_minus),
                "q_plus": list(p.q_plus),
                "q_minus": list(p.q_minus),
            },
            indent=2,
        ),
        args.out,
    )
    return 0


def cmd_volume(args) -> int:
    theta = _theta(args)
    v = part_volumes(theta)
    _emit(
        json.dumps(
            {"theta": theta, "v1": v.v1, "v2": v.v2, "v3": v.v3, "v_total": v.total},
            indent=2,
        ),
        args.out,
    )
    return 0


def cmd_table(args) -> int:
    rows = sweep_table(args.theta_min, args.theta_max, args.n)
    buffer = io.StringIO()
    write_sweep_csv(rows, buffer)
    _emit(buffer.getvalue(), args.out)
    return 0


def cmd_profile_svg(args) -> int:
    _emit(render_section_svg(_theta(args)), args.out)
    return 0


def cmd_symmetrize(args) -> int:
    polygon = _load_polygon(args)
    phi = math.radians(args.phi) if args.degrees else args.phi
    result = steiner_symmetrize(polygon, phi)
    _emit(polygon_to_json(result), args.out)
    return 0


def cmd_converge(args) -> int:
    polygon = _load_polygon(args)
    trace = random_symmetrization_run(polygon, args.steps, args.seed)
    buffer = io.StringIO()
    trace.to_csv(buffer)
    _emit(buffer.getvalue(), args.out)
    if args.out is not None:
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as stream:
            stream.write(trace.metadata_json() + "\n")
    return 0


def cmd_mc_volume(args) -> int:
    theta = _theta(args)
    estimate = monte_carlo_volume(
        lambda pts: delta_membership_mask(theta, pts),
        delta_bounding_box(theta),
        args.n,
        args.seed,
    )
    _emit(estimate.to_json(), args.out)
    return 0


def _run_search(args, runner, spec) -> int:
    result = runner(spec, args.budget, args.seed)
    _emit(result.to_json(), args.out)
    if args.log is not None:
        with open(args.log, "w", encoding="utf-8", newline="\n") as stream:
            write_runlog_csv(result, stream)
    return 0


def cmd_optimize(args) -> int:
    spec = FeasibleSpec(theta=_theta(args), n_knots=args.knots, mode="full_cone")
    return _run_search(args, optimize_profile, spec)


def cmd_wall(args) -> int:
    spec = wall_spec(_theta(args), args.knots)
    return _run_search(args, wall_optimize, spec)


def _verify_checks(quick: bool):
    """Self-contained invariant suites; fixed internal seeds."""
    grid_n = 13 if quick else 49
    trials = 60 if quick else 300
    thetas = np.linspace(math.pi / 3, math.pi - 1e-3, grid_n)

    def closed_form_identities():
        worst = 0.0
        for theta in thetas:
            p = delta_params(float(theta))
            v = part_volumes(float(theta))
            worst = max(worst, abs(v.v1 + v.v2 + v.v3 - v.total))
            worst = max(worst, abs(math.hypot(p.b - p.a, p.p_plus[1] + p.c) - 1.0))
            worst = max(worst, abs(p.p_plus[1] - p.r_j), abs(p.c - p.r_j))
        return worst <= 1e-12, f"max deviation {worst:.2e}"

    def quadrature_agreement():
        worst = 0.0
        for theta in thetas[:: max(1, grid_n // 9)]:
            worst = max(
                worst,
                abs(delta_volume_quadrature(float(theta)) - part_volumes(float(theta)).total),
            )
        return worst <= 1e-9, f"max |quadrature - closed form| {worst:.2e}"

    def diameter_oracle():
        worst = 0.0
        for theta in (1.2, math.pi / 2, 2.5):
            d = revolution_diameter(delta_profile(theta, 2048))
            worst = max(worst, abs(d - 1.0))
        return worst <= 1e-6, f"max |diameter - 1| {worst:.2e}"

    def discretized_volume():
        theta = math.pi / 2
        d = abs(revolution_volume(delta_profile(theta, 4096)) - part_volumes(theta).total)
        return d <= 1e-6, f"|discretized - closed form| {d:.2e}"

    def symmetrization_properties():
        area_bad = diam_bad = 0
        for i in range(trials):
            polygon = make_random_convex_polygon(24, 1000 + i)
            phi = (i / trials) * math.pi
            image = steiner_symmetrize(polygon, phi)
            if abs(polygon_area(image) - polygon_area(polygon)) > 1e-9 * polygon_area(polygon):
                area_bad += 1
            if polygon_diameter(image) > polygon_diameter(polygon) + 1e-12:
                diam_bad += 1
        return area_bad == 0 and diam_bad == 0, f"{area_bad} area / {diam_bad} diameter violations"

    def sup_contraction():
        bad = 0
        for i in range(trials // 2):
            x_poly = make_random_convex_polygon(16, 2000 + i)
            y_poly = make_random_convex_polygon(16, 3000 + i)
            phi = (i / max(trials // 2, 1)) * math.pi
            before = sup_distance(x_poly, y_poly)
            after = sup_distance(steiner_symmetrize(x_poly, phi), steiner_symmetrize(y_poly, phi))
            if after > before + 1e-12:
                bad += 1
        return bad == 0, f"{bad} contraction violations"

    def convergence_run():
        polygon = make_random_convex_polygon(64, 1)
        steps = 60 if quick else 200
        trace = random_symmetrization_run(polygon, steps, 2)
        drift = max(abs(a - trace.areas[0]) for a in trace.areas) / trace.areas[0]
        shrunk = trace.hausdorff_to_disk[-1] < 0.1 * polygon_diameter(polygon)
        return shrunk and drift < 1e-9, (
            f"final distance {trace.hausdorff_to_disk[-1]:.2e}, area drift {drift:.2e}"
        )

    def symmetral_diameter():
        rng = np.random.Generator(np.random.PCG64(4))
        slices = 64 if quick else 128
        bad = 0
        for _ in range(5 if quick else 20):
            pts = rng.normal(size=(40, 3))
            pts /= np.linalg.norm(pts, axis=1)[:, None]
            pts *= 0.5
            body = slice_convex_hull(pts, slices)
            profile = steiner_symmetral_profile(body)
            diff = pts[:, None, :] - pts[None, :, :]
            body_diameter = math.sqrt(float(np.max(np.einsum("ijk,ijk->ij", diff, diff))))
            if revolution_diameter(profile) > body_diameter + 2.0 / slices:
                bad += 1
        return bad == 0, f"{bad} diameter violations"

    def optimizer_short():
        knots = 16 if quick else 32
        budget = 6000 if quick else 20000
        spec = FeasibleSpec(theta=math.pi / 2, n_knots=knots)
        result = optimize_profile(spec, budget, 3)
        target = part_volumes(math.pi / 2).total
        ok = result.feasible and result.best_volume <= target + 1e-6
        ok &= result.best_volume >= 0.95 * target
        return ok, f"volume {result.best_volume:.6f} vs closed form {target:.6f}"

    return [
        ("closed-form identities (sum, junctions, unit chord)", closed_form_identities),
        ("quadrature oracle agreement", quadrature_agreement),
        ("revolution diameter oracle", diameter_oracle),
        ("discretized profile volume", discretized_volume),
        ("symmetrization area/diameter properties", symmetrization_properties),
        ("sup-distance contraction", sup_contraction),
        ("random symmetrization convergence", convergence_run),
        ("symmetral diameter bound", symmetral_diameter),
        ("optimizer re-discovery (short run)", optimizer_short),
    ]


def cmd_verify(args) -> int:
    checks = _verify_checks(args.quick)
    width = max(len(name) for name, _ in checks) + 2
    failures = 0
    for name, check in checks:
        ok, detail = check()
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        sys.stdout.write(f"{name:<{width}} {status}  {detail}\n")
    sys.stdout.write(f"{failures} failure(s) out of {len(checks)} checks\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isocone",
        description="Cone-constrained isodiametric geometry toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_theta(p) -> None:
        p.add_argument("--theta", type=float, required=True, help="aperture (radians)")
        p.add_argument("--degrees", action="store_true", help="interpret angles as degrees")

    p = sub.add_parser("params", help="closed-form constants and junction points")
    add_theta(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("volume", help="part volumes and total volume")
    add_theta(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("table", help="CSV sweep of constants and volumes")
    p.add_argument("--from", dest="theta_min", type=float, required=True)
    p.add_argument("--to", dest="theta_max", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("profile-svg", help="meridian-section figure")
    add_theta(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile_svg)

    p = sub.add_parser("symmetrize", help="Steiner symmetrization of a polygon")
    p.add_argument("--in", dest="infile")
    p.add_argument("--random", type=int, help="generate the input as a random n-gon")
    p.add_argument("--polygon-seed", type=int)
    p.add_argument("--phi", type=float, required=True, help="direction of the chord line")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("converge", help="random symmetrization convergence trace")
    p.add_argument("--in", dest="infile")
    p.add_argument("--random", type=int)
    p.add_argument("--polygon-seed", type=int)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="direction stream seed")
    p.add_argument("--out", help="trace CSV path; a .json metadata sidecar is added")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("mc-volume", help="Monte Carlo volume estimate of the body")
    add_theta(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mc_volume)

    p = sub.add_parser("optimize", help="re-discover the extremal body by search")
    add_theta(p)
    p.add_argument("--knots", type=int, default=64)
    p.add_argument("--budget", type=int, default=200000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--log", help="run-log CSV path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("wall", help="slab-constrained search with pinned end disks")
    add_theta(p)
    p.add_argument("--knots", type=int, default=64)
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--log")
    p.set_defaults(func=cmd_wall)

    p = sub.add_parser("verify", help="run the invariant suites and report pass/fail")
    p.add_argument("--quick", action="store_true", help="reduced trial counts")
    p.set_defaults(func=cmd_verify)

    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
