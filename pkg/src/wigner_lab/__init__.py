"""Monte Carlo laboratory for eigenvalue and eigenvector statistics of Wigner
random matrices.

The package samples Wigner ensembles (Gaussian and discrete moment-matched
variants), decomposes them with phase-controlled eigenvector normalizations,
draws exact Haar reference matrices, evaluates resolvent coefficients by two
independent routes, and turns Monte Carlo samples into pass/fail statistical
verdicts.  All indices in the public API are 0-based.
"""
from . import atoms, cli, ensembles, haar, resolvent, spectral, stats
from .atoms import (
    AtomDistribution,
    condition_c1_bound,
    discrete,
    gaussian_complex,
    gaussian_real,
    matches_to_order,
    moment,
    moment_table,
    symmetric_three_point,
)
from .ensembles import (
    MatrixSample,
    WignerSpec,
    goe_spec,
    gue_spec,
    matched_goe_spec,
    rescale,
)
from .errors import (
    DegenerateSpectrumError,
    HypothesisViolationError,
    InfeasibleMomentError,
    NonHermitianError,
    SingularityError,
    UnsupportedOrderError,
    WignerLabError,
)
from .haar import HaarMatrix, ReferenceLaw, goe_gue_reference, haar_sample, minor
from .resolvent import (
    ResolventQuery,
    inverse_coeff,
    level_repulsion_margin,
    local_law_deviation,
    m_sc,
    resolvent_coeff_direct,
    resolvent_coeff_spectral,
    rigidity_split,
)
from .spectral import (
    ObservableTuple,
    SpectralDecomposition,
    decompose,
    delocalization_sup,
    gap,
    middle_index,
    min_gap,
    normalize_eigenvector,
    phi_observable,
    projection_coeff,
    q_statistic,
    with_normalization,
)
from .stats import (
    CltReport,
    EmpiricalSample,
    ObservableConfig,
    SmoothFunctional,
    TestReport,
    clt_projection_experiment,
    coefficient_samples,
    four_moment_compare,
    functional_estimate,
    gaussian_bump,
    ks_statistic,
    moment_report,
    orthonormal_family_clt,
)

__version__ = "0.1.0"
