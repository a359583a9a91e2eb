"""Third-order moment ideals, membership tests, and polytopes for linear
non-Gaussian polytree models."""

from .errors import (
    AsymmetricInput,
    BadLabels,
    CyclicGraph,
    DimensionMismatch,
    Disconnected,
    DownstreamEdge,
    Infeasible,
    InputError,
    InvalidGraph,
    NonPositiveDiagonal,
    NoTrek,
    NotPartition,
    NotPolytree,
    ShapeMismatch,
    SingularSystem,
    TrekMomentsError,
    Unbounded,
)
from .graph import (
    DirectedGraph,
    GraphClass,
    Trek,
    classify,
    enumerate_simple_treks,
    simple_trek,
    top,
    topological_order,
)
from .latent import (
    UpstreamPartition,
    check_homogeneous,
    monomial_multidegree,
    observed_generators,
    restricted_matrix,
    validate_upstream,
    variable_multidegree,
)
from .membership import (
    MembershipResult,
    ResidualReport,
    Violation,
    decide_membership,
    evaluate_generators,
    recover_lambda,
)
from .moments import (
    ModelParameters,
    MomentData,
    SampleConfig,
    Scalar,
    SimpleTrekParams,
    forward_moments,
    is_positive_definite,
    moments_equal,
    params_to_ab,
    sample_params,
    trek_rule_moments,
)
from .nontree import (
    BUILTINS,
    F_DETERMINANT,
    F_LITERAL,
    MomentPolynomial,
    NonTreeCase,
    build_matrix,
    builtin,
    evaluate_polynomial,
    minor_vanishing_report,
    polynomial_vanishing_report,
    sample_cyclic_moments,
)
from .polytope import (
    ExponentVector,
    HRep,
    LPResult,
    check_vh_equality,
    exponent_vector,
    h_rep,
    lp_maximize,
    point_in_h,
    vertex_set,
)
from .report import discrepancy_report, render_report
from .trekmat import (
    Binomial,
    GeneratorSet,
    MomentVariable,
    Monomial,
    TrekMatrix,
    compare_vars,
    decompose_binomial,
    degree2_span_rank,
    edge_generator_set,
    emit,
    full_generator_set,
    linear_generators,
    parse_generator_set,
    trek_matrix,
    two_minors,
)

__version__ = "1.0.0"
