"""Representations of finite posets: combinatorics of the associated bound
quiver, stability analysis of subspace systems, and a gradient-flow solver
for orthoscalar (weighted unitary) representatives.
"""

from .bound_quiver import (
    AssignmentReport,
    BoundQuiver,
    CartanMatrix,
    DimVector,
    QuiverRep,
    QuotientDim,
    assignment_report,
    bound_quiver_of,
    cartan_matrix,
    commutativity_ideal,
    enumerate_assignments,
    euler_form,
    minimal_relation_counts,
    quiver_to_rep,
    quotient_dim_lower_bound,
    rep_to_quiver,
)
from .errors import (
    CheckFailed,
    CycleError,
    DuplicateElement,
    InvalidElement,
    LatticeTooLarge,
    NestingViolation,
    NoTraceIdentity,
    NotHasseQuiver,
    NotSubspaceRep,
    NumericalBreakdown,
    ParseError,
    PosetMismatch,
    PosetRepError,
    RankDeficient,
    RelationViolation,
    SingularMetric,
    WrongShape,
)
from .families import (
    EXCEPTIONAL_LAMBDAS,
    FOUR_ANTICHAIN,
    FOURSPACE_WEIGHT,
    N4_GROUPS,
    N4_ROOT_DIM,
    TAME_DIM_VECTORS,
    four_lines_rep,
    is_exceptional,
    parse_lambda,
    sphere_projection_system,
)
from .linrep import (
    POLYSTABLE_NOT_STABLE,
    SEMISTABLE_NOT_POLYSTABLE,
    STABLE,
    UNSTABLE,
    Decomposition,
    StabilityOptions,
    StabilityVerdict,
    SubspaceRep,
    Weight,
    decompose,
    decompose_full,
    direct_sum,
    endomorphism_algebra,
    make_rep,
    saturate_subspace,
    stability_check,
    subspace_lattice,
    subspace_score,
)
from .moment import (
    CheckReport,
    FlowOptions,
    FlowReport,
    ProjectionSystem,
    fourspace_parameters,
    hopf_normal_form,
    kempf_ness_flow,
    kn_directional_derivative,
    moment_value,
    orthoscalar_check,
    unitary_invariants,
)
from .poset import (
    CRITICAL_POSETS,
    ROOT,
    FinitenessResult,
    Poset,
    PrimitivityResult,
    Quiver,
    build_poset,
    hasse_quiver,
    is_primitive,
    is_representation_finite,
    n4_poset,
    n_poset,
    order_isomorphic,
    primitive_poset,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentReport",
    "BoundQuiver",
    "CRITICAL_POSETS",
    "CartanMatrix",
    "CheckFailed",
    "CheckReport",
    "CycleError",
    "Decomposition",
    "DimVector",
    "DuplicateElement",
    "EXCEPTIONAL_LAMBDAS",
    "FOURSPACE_WEIGHT",
    "FOUR_ANTICHAIN",
    "FinitenessResult",
    "FlowOptions",
    "FlowReport",
    "InvalidElement",
    "LatticeTooLarge",
    "N4_GROUPS",
    "N4_ROOT_DIM",
    "NestingViolation",
    "NoTraceIdentity",
    "NotHasseQuiver",
    "NotSubspaceRep",
    "NumericalBreakdown",
    "POLYSTABLE_NOT_STABLE",
    "ParseError",
    "Poset",
    "PosetMismatch",
    "PosetRepError",
    "PrimitivityResult",
    "ProjectionSystem",
    "Quiver",
    "QuiverRep",
    "QuotientDim",
    "ROOT",
    "RankDeficient",
    "RelationViolation",
    "SEMISTABLE_NOT_POLYSTABLE",
    "STABLE",
    "SingularMetric",
    "StabilityOptions",
    "StabilityVerdict",
    "SubspaceRep",
    "TAME_DIM_VECTORS",
    "UNSTABLE",
    "Weight",
    "WrongShape",
    "assignment_report",
    "bound_quiver_of",
    "build_poset",
    "cartan_matrix",
    "commutativity_ideal",
    "decompose",
    "decompose_full",
    "direct_sum",
    "endomorphism_algebra",
    "enumerate_assignments",
    "euler_form",
    "four_lines_rep",
    "fourspace_parameters",
    "hasse_quiver",
    "hopf_normal_form",
    "is_exceptional",
    "is_primitive",
    "is_representation_finite",
    "kempf_ness_flow",
    "kn_directional_derivative",
    "make_rep",
    "minimal_relation_counts",
    "moment_value",
    "n4_poset",
    "n_poset",
    "order_isomorphic",
    "orthoscalar_check",
    "parse_lambda",
    "primitive_poset",
    "quiver_to_rep",
    "quotient_dim_lower_bound",
    "rep_to_quiver",
    "saturate_subspace",
    "sphere_projection_system",
    "stability_check",
    "subspace_lattice",
    "subspace_score",
    "unitary_invariants",
]
