"""Area minimization for triangulated discs with fixed boundary.

The public surface re-exported here: validated disc complexes and
their embeddings (``mesh``), the hinged quadrilateral family
(``quad``), hinge measurements and combinatorial moves (``flips``),
the cutting-plane saddle test (``saddle``), the minimization loop
(``optimize``), and file formats plus scenarios (``meshio``).
"""

from .errors import (
    AlphaOutOfRange,
    BoundaryEdge,
    BudgetExceeded,
    CycleBoundsBoundary,
    DegenerateParameters,
    DegenerateTriangle,
    DegenerationBlocked,
    DisconnectedComplex,
    DiscminError,
    EmptyStar,
    FlipForbidden,
    InvalidSpec,
    MultipleBoundaryComponents,
    NonManifoldEdge,
    NotAViolation,
    NotCuttable,
    ParseError,
    TopologyError,
    WrongEuler,
)
from .flips import (
    FanReduction,
    FlipCheck,
    HingeMeasurement,
    bulk_hinges,
    can_flip,
    flat_convex_check,
    flat_convex_quad,
    flip,
    hinge_from_points,
    measure_hinge,
    reduce_fan,
)
from .mesh import (
    DEGENERACY_EPS,
    DiscComplex,
    PolyhedralDisc,
    build_from_triangles,
    canonical_triangle,
    edge_key,
    triangle_areas,
)
from .meshio import (
    TentScenario,
    dumps_obj,
    load_obj,
    loads_obj,
    make_tent,
    random_instance,
    save_obj,
)
from .optimize import (
    FlipPassResult,
    FlipRecord,
    IterationRecord,
    LineSearch,
    MoveRecord,
    OptimizationTrace,
    OptimizerConfig,
    edge_length_area_derivative,
    edge_length_area_gradient,
    flip_pass,
    heron_area,
    minimize,
    position_area_gradient,
    vertex_descent_step,
)
from .quad import (
    HingeState,
    QuadSpec,
    alpha_range,
    area_curve,
    area_of_alpha,
    d_area_d_alpha,
    diagonal_from_alpha,
    embed_planar,
)
from .saddle import (
    NON_SADDLE,
    SADDLE,
    SaddleCertificate,
    StarVerdict,
    VertexVerdict,
    brute_force_cutting_direction,
    certify_saddle,
    cutting_direction,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaOutOfRange",
    "BoundaryEdge",
    "BudgetExceeded",
    "CycleBoundsBoundary",
    "DEGENERACY_EPS",
    "DegenerateParameters",
    "DegenerateTriangle",
    "DegenerationBlocked",
    "DiscComplex",
    "DisconnectedComplex",
    "DiscminError",
    "EmptyStar",
    "FanReduction",
    "FlipCheck",
    "FlipForbidden",
    "FlipPassResult",
    "FlipRecord",
    "HingeMeasurement",
    "HingeState",
    "InvalidSpec",
    "IterationRecord",
    "LineSearch",
    "MoveRecord",
    "MultipleBoundaryComponents",
    "NON_SADDLE",
    "NonManifoldEdge",
    "NotAViolation",
    "NotCuttable",
    "OptimizationTrace",
    "OptimizerConfig",
    "ParseError",
    "PolyhedralDisc",
    "QuadSpec",
    "SADDLE",
    "SaddleCertificate",
    "StarVerdict",
    "TentScenario",
    "TopologyError",
    "VertexVerdict",
    "WrongEuler",
    "alpha_range",
    "area_curve",
    "area_of_alpha",
    "brute_force_cutting_direction",
    "build_from_triangles",
    "bulk_hinges",
    "can_flip",
    "canonical_triangle",
    "certify_saddle",
    "cutting_direction",
    "d_area_d_alpha",
    "diagonal_from_alpha",
    "dumps_obj",
    "edge_key",
    "edge_length_area_derivative",
    "edge_length_area_gradient",
    "embed_planar",
    "flat_convex_check",
    "flat_convex_quad",
    "flip",
    "flip_pass",
    "heron_area",
    "hinge_from_points",
    "load_obj",
    "loads_obj",
    "make_tent",
    "measure_hinge",
    "minimize",
    "position_area_gradient",
    "random_instance",
    "reduce_fan",
    "save_obj",
    "triangle_areas",
    "vertex_descent_step",
]
