"""Ray-crossing depth of points against hyperplane families.

Exact rational computation of dual depth, depth-maximizing central points,
dual Tverberg partitions with interior certificates, and Monte Carlo
verification of the measure-level counterparts.
"""

__version__ = "1.0.0"

from .geometry import (
    DegenerateInstanceError,
    DegenerateSubfamilyError,
    DimensionMismatchError,
    GeneralPositionResult,
    GeometryError,
    Hyperplane,
    Instance,
    ZeroDirectionError,
    check_general_position,
    ensure_general_position,
    intersect_subfamily,
    project_onto,
    side_of,
)
from .depth import (
    CellSignature,
    DepthCertificate,
    FixedPointResult,
    center_fixed_point,
    depth_from_signature,
    discrete_centerpoint,
    dual_depth,
    hemisphere_depth,
    max_depth_point,
    ray_crossings,
    signature_of,
    tukey_depth,
)
from .tverberg import (
    PartitionResult,
    SimplexSpec,
    colorful_dual_tverberg_search,
    common_interior_point,
    dual_tverberg_plane,
    dual_tverberg_search,
    form_simplex,
)
from .measures import (
    Flat,
    FlatMeasureSpec,
    VerificationReport,
    flat_intersects_ray,
    sample_flats,
    search_center_sampled,
    sphere_covering,
    verify_dual_cpt_measure,
    verify_dual_ctr,
)
from .generators import MODELS, gen_instance
from .io import (
    FORMAT_VERSION,
    ParseError,
    instance_measure,
    parse_instance,
    parse_scalar,
    scalar_to_str,
    write_instance,
)
from .svg import UnsupportedDimensionError, render_svg

__all__ = [
    "__version__",
    "GeometryError",
    "DimensionMismatchError",
    "ZeroDirectionError",
    "DegenerateSubfamilyError",
    "DegenerateInstanceError",
    "GeneralPositionResult",
    "Hyperplane",
    "Instance",
    "check_general_position",
    "ensure_general_position",
    "intersect_subfamily",
    "project_onto",
    "side_of",
    "CellSignature",
    "DepthCertificate",
    "FixedPointResult",
    "center_fixed_point",
    "depth_from_signature",
    "discrete_centerpoint",
    "dual_depth",
    "hemisphere_depth",
    "max_depth_point",
    "ray_crossings",
    "signature_of",
    "tukey_depth",
    "PartitionResult",
    "SimplexSpec",
    "colorful_dual_tverberg_search",
    "common_interior_point",
    "dual_tverberg_plane",
    "dual_tverberg_search",
    "form_simplex",
    "Flat",
    "FlatMeasureSpec",
    "VerificationReport",
    "flat_intersects_ray",
    "sample_flats",
    "search_center_sampled",
    "sphere_covering",
    "verify_dual_cpt_measure",
    "verify_dual_ctr",
    "MODELS",
    "gen_instance",
    "FORMAT_VERSION",
    "ParseError",
    "instance_measure",
    "parse_instance",
    "parse_scalar",
    "scalar_to_str",
    "write_instance",
    "UnsupportedDimensionError",
    "render_svg",
]
