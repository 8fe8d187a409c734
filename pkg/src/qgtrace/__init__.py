"""Spectra and regularized trace identities for Schrodinger operators on
compact metric graphs with general self-adjoint vertex couplings."""

from .basis import basis_asymptotic, basis_values, wronskian_defect
from .contour import (
    ContourPath,
    circle_path,
    integrate_contour,
    rectangle_path,
    residue_integrand,
    residue_reference,
    rouche_verify,
    sine_margin,
)
from .errors import (
    BoundaryTooClose,
    CommensurateResonance,
    CountMismatch,
    EpsilonTooLarge,
    ForbiddenRegion,
    GraphSpecError,
    IncompatibleIndex,
    LengthMismatch,
    MinusOneInSpectrum,
    NonHermitianInput,
    NonUnitaryBlock,
    OverlappingEndpoints,
    PoleOnPath,
    QGraphError,
    QuadratureNotConverged,
    SineZero,
    SizeMismatch,
    ToleranceNotMet,
    ZeroWavenumber,
)
from .graphio import dump_graph, graph_from_dict, graph_to_dict, load_graph
from .graphs import (
    ConstantPotential,
    Edge,
    MetricGraph,
    PolynomialPotential,
    TablePotential,
    ZeroPotential,
    assemble_flower_unitary,
    coupling_hermitian,
    epsilon_bound,
    hermitian_coupling,
    potential_moments,
    resolve_epsilon,
    unitary_coupling,
    validate_graph,
    vertex_coupling,
)
from .secular import (
    log_ratio,
    log_ratio_numeric,
    phi,
    phi_expanded,
    phi_lam,
    product_ksin,
)
from .spectrum import (
    EigenvalueList,
    Partition,
    allowed_level,
    allowed_margin,
    count_zeros_box,
    find_eigenvalues,
    level_schedule,
    mu_sequence,
    partition,
    weyl_count,
)
from .trace import (
    AsymptoticPrediction,
    ClusterPrediction,
    TraceReport,
    asymptotic_rows,
    convergence_report,
    predict_cluster_sum,
    predict_eigenvalue,
    trace_lhs_contour,
    trace_lhs_partial,
    trace_rhs,
    trace_terms,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
