"""Proximity structure on finite metric graphs.

Verification and solvers for cyclic maps between two tagged sides of a
finite metric space with a directed edge relation: gauge-controlled
contraction checks, best-proximity-point iteration, common fixed points of
alternating map pairs, and a periodic boundary-value solver driven by the
same contraction machinery.
"""
from __future__ import annotations

from .bpp_solver import (
    BppResult,
    EquivalenceReport,
    OrbitTrace,
    check_cardinality,
    check_equivalence_theorem,
    enumerate_bpps,
    iterate_orbit,
    solve_bpp,
    x_t2_a_set,
)
from .corpus import (
    EXAMPLE_IDS,
    CyclicInstance,
    FixedPointInstance,
    PbvpInstance,
    build,
    build_random_chain,
)
from .cyclic_contraction import (
    ContractionReport,
    CyclicMapTable,
    GaugeSpec,
    contraction_rhs,
    eligible_pair,
    eval_gauge,
    kappa,
    kappa_total,
    m_value,
    verify_g_cyclic_contraction,
    verify_gauge_classes,
    verify_t2_preserves_edges,
)
from .errors import (
    BetaNotContractive,
    ConditionIvViolated,
    EmptySide,
    EvaluationFailure,
    GaugeClassViolation,
    HypothesisViolated,
    InstanceFormatError,
    InvalidPsi,
    MonotonicityBroken,
    NoConvergence,
    NotLowerSolution,
    OutOfDomain,
    ParamOutOfRange,
    ProxigraphError,
    SeedNotEligible,
    SideMismatch,
    UnknownPoint,
)
from .fixed_point import (
    PairMaps,
    PsiContractionReport,
    PsiGauge,
    apriori_bound,
    check_uniqueness_regime,
    psi_from_phi,
    solve_common_fixed_point,
    verify_g_psi_contraction,
)
from .metric_graph import (
    CheckResult,
    FiniteMetricGraph,
    PairGeometry,
    check_property_star,
    component_of,
    components,
    has_property_uc,
    is_g_chebyshev,
    is_sharp_proximal,
    is_weakly_connected,
    pair_distance,
)
from .pbvp import (
    GreensKernel,
    GridFunction,
    PbvpReport,
    RhsFunction,
    TimeGrid,
    greens_kernel_value,
    integral_operator,
    is_lower_solution,
    kernel_matrix,
    make_h,
    solve_common_pbvp,
    solve_pbvp,
    verify_condition_iv,
)

__version__ = "0.1.0"
