"""Exact arithmetic and finite-radius geometry for coset graphs.

The package builds Cayley balls of finitely generated groups with exact
normal-form arithmetic, projects them onto coset graphs of a distinguished
subgroup, and extracts finite-radius evidence: Hausdorff coset distances,
end counts, path-lifting constants, homotopy-ladder certificates, and
escape routes.  Every number comes with a stabilization or trust window so
a truncated computation is reported as such instead of being guessed.
"""

from .cayley import (
    DEFAULT_VERTEX_BUDGET,
    Ball,
    PathInBall,
    StarResult,
    build_ball,
    cached_ball,
    load_ball,
    save_ball,
    star,
    walk_path,
)
from .cosetgraph import (
    DEFAULT_TRUST_MARGIN,
    CosetPatch,
    DegreeProfile,
    LambdaPath,
    build_coset_patch,
    degree_profile,
    project_path,
)
from .dot import export_dot, write_dot
from .ends import (
    EndsReport,
    default_schedule,
    ends_report,
    escape_route,
    filtered_ends_report,
    stable_hausdorff_bound,
    verify_escape_route,
)
from .errors import (
    BallOverflowError,
    ConfigError,
    ConstantViolationError,
    CosetGeomError,
    EmptyCosetInBallError,
    EscapeBlockedError,
    InsufficientRadiusError,
    NoRouteWithinBallError,
    NoTransferVertexError,
    NotStabilizedError,
    ScheduleExceedsBallError,
)
from .groups import (
    GroupSpec,
    ascending_hnn,
    baumslag_solitar,
    canonical_key,
    evaluate_word,
    free_abelian_group,
    free_group,
    group_for,
    identity,
    inverse_word,
    invert,
    multiply,
    parse_group_spec,
    parse_word,
    render_word,
)
from .homotopy import (
    Ladder,
    LadderReport,
    LadderViolation,
    RaySystem,
    build_ladder,
    build_ray_system,
    rays_meeting,
    verify_ladder,
)
from .lifting import (
    ConstantScan,
    LiftConstants,
    LiftResult,
    approximate_lift,
    compute_f,
    compute_m,
    lift_constants,
)
from .metrics import (
    CommensurationReport,
    HausdorffProfile,
    IntersectionEvidence,
    RadiusValue,
    commensuration_verdict,
    default_radii,
    default_test_elements,
    hausdorff_profile,
    intersection_index_evidence,
)
from .subgroups import (
    SubgroupSpec,
    base_coset_key,
    coset_key,
    is_member,
    k_letters,
    q_letters,
    vertex_subgroup,
    word_subgroup,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallOverflowError",
    "CommensurationReport",
    "ConfigError",
    "ConstantScan",
    "ConstantViolationError",
    "CosetGeomError",
    "CosetPatch",
    "DEFAULT_TRUST_MARGIN",
    "DEFAULT_VERTEX_BUDGET",
    "DegreeProfile",
    "EmptyCosetInBallError",
    "EndsReport",
    "EscapeBlockedError",
    "GroupSpec",
    "HausdorffProfile",
    "InsufficientRadiusError",
    "IntersectionEvidence",
    "Ladder",
    "LadderReport",
    "LadderViolation",
    "LambdaPath",
    "LiftConstants",
    "LiftResult",
    "NoRouteWithinBallError",
    "NoTransferVertexError",
    "NotStabilizedError",
    "PathInBall",
    "RadiusValue",
    "RaySystem",
    "ScheduleExceedsBallError",
    "StarResult",
    "SubgroupSpec",
    "__version__",
    "approximate_lift",
    "ascending_hnn",
    "base_coset_key",
    "baumslag_solitar",
    "build_ball",
    "build_coset_patch",
    "build_ladder",
    "build_ray_system",
    "cached_ball",
    "canonical_key",
    "commensuration_verdict",
    "compute_f",
    "compute_m",
    "coset_key",
    "default_radii",
    "default_schedule",
    "default_test_elements",
    "degree_profile",
    "ends_report",
    "escape_route",
    "evaluate_word",
    "export_dot",
    "filtered_ends_report",
    "free_abelian_group",
    "free_group",
    "group_for",
    "hausdorff_profile",
    "identity",
    "intersection_index_evidence",
    "inverse_word",
    "invert",
    "is_member",
    "k_letters",
    "lift_constants",
    "load_ball",
    "multiply",
    "parse_group_spec",
    "parse_word",
    "project_path",
    "q_letters",
    "rays_meeting",
    "render_word",
    "save_ball",
    "stable_hausdorff_bound",
    "star",
    "verify_escape_route",
    "verify_ladder",
    "vertex_subgroup",
    "walk_path",
    "word_subgroup",
    "write_dot",
]
