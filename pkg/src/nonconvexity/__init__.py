"""Non-convexity measures of finite planar point sets and their Minkowski sums."""

from .closed_forms import (
    ParallelogramSpec,
    TriangleKind,
    TriangleSpec,
    classify_triangle,
    parallelogram_d,
    parallelogram_monotonicity_audit,
    triangle_d,
)
from .delaunay import Triangulation, VoronoiSkeleton, audit_empty_circumcircle, triangulate, voronoi_skeleton
from .estimator import HullDistance
from .geometry import (
    Circle,
    ConvexPolygon,
    GeometryError,
    Location,
    Orientation,
    Tolerance,
    convex_hull,
    min_enclosing_circle,
    orientation,
    point_in_polygon,
    segment_line_intersection,
)
from .instances import InstanceError, format_pointset, generate, parse_pointset
from .measures import (
    MeasureResult,
    Profile,
    d_exact,
    d_grid_oracle,
    profile,
    rad,
    v_at_point,
    v_exact,
    v_squared_at_points,
)
from .sumset import (
    Decomposition,
    DecompositionError,
    DecompositionKind,
    ParallelogramWitness,
    SubadditivityRecord,
    SumsetDecomposer,
    boundary_decomposition_check,
    check_subadditivity,
    decompose,
    meyer_bound_1d,
    min_crossing_pair,
    minkowski_finite,
    minkowski_segment_polygon,
    translate_bound_check,
)
from .validation import PointSet, as_pointset, check_points

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "ConvexPolygon",
    "Decomposition",
    "DecompositionError",
    "DecompositionKind",
    "GeometryError",
    "HullDistance",
    "InstanceError",
    "Location",
    "MeasureResult",
    "Orientation",
    "ParallelogramSpec",
    "ParallelogramWitness",
    "PointSet",
    "Profile",
    "SubadditivityRecord",
    "SumsetDecomposer",
    "Tolerance",
    "TriangleKind",
    "TriangleSpec",
    "Triangulation",
    "VoronoiSkeleton",
    "as_pointset",
    "audit_empty_circumcircle",
    "boundary_decomposition_check",
    "check_points",
    "check_subadditivity",
    "classify_triangle",
    "convex_hull",
    "d_exact",
    "d_grid_oracle",
    "decompose",
    "format_pointset",
    "generate",
    "meyer_bound_1d",
    "min_crossing_pair",
    "min_enclosing_circle",
    "minkowski_finite",
    "minkowski_segment_polygon",
    "orientation",
    "parallelogram_d",
    "parallelogram_monotonicity_audit",
    "parse_pointset",
    "point_in_polygon",
    "profile",
    "rad",
    "segment_line_intersection",
    "translate_bound_check",
    "triangle_d",
    "triangulate",
    "v_at_point",
    "v_exact",
    "v_squared_at_points",
    "voronoi_skeleton",
]
