"""Cone-constrained isodiametric geometry toolkit.

Constructs the extremal unit-diameter body inside a right circular cone
from closed forms, validates every formula against independent numerical
oracles, and re-discovers the optimum by constrained derivative-free shape
search.  Includes exact Steiner symmetrization of convex polygons and a
random-symmetrization convergence experiment.
"""

__version__ = "0.1.0"

from .closed_form import (
    DeltaParams,
    PartVolumes,
    delta_params,
    delta_profile,
    part_volumes,
    profile_radius,
    sweep_table,
)
from .geometry import (
    ConvexPolygon,
    Direction2,
    RotationalProfile,
    make_random_convex_polygon,
    polygon_area,
    polygon_diameter,
    profile_to_polygon,
)
from .metrics import (
    VolumeEstimate,
    delta_membership,
    hausdorff,
    monte_carlo_volume,
    revolution_diameter,
    revolution_volume,
    sup_distance,
)
from .optimize import (
    FeasibleSpec,
    OptResult,
    optimize_profile,
    project_feasible,
    wall_optimize,
    wall_spec,
)
from .symmetrization import (
    ConvergenceTrace,
    SlicedBody,
    random_symmetrization_run,
    slice_convex_hull,
    steiner_symmetral_profile,
    steiner_symmetrize,
)

__all__ = [
    "ConvergenceTrace",
    "ConvexPolygon",
    "DeltaParams",
    "Direction2",
    "FeasibleSpec",
    "OptResult",
    "PartVolumes",
    "RotationalProfile",
    "SlicedBody",
    "VolumeEstimate",
    "delta_membership",
    "delta_params",
    "delta_profile",
    "hausdorff",
    "make_random_convex_polygon",
    "monte_carlo_volume",
    "optimize_profile",
    "part_volumes",
    "polygon_area",
    "polygon_diameter",
    "profile_radius",
    "profile_to_polygon",
    "project_feasible",
    "random_symmetrization_run",
    "revolution_diameter",
    "revolution_volume",
    "slice_convex_hull",
    "steiner_symmetral_profile",
    "steiner_symmetrize",
    "sup_distance",
    "sweep_table",
    "wall_optimize",
    "wall_spec",
]
