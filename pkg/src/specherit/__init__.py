"""Spectral profile-likelihood heritability estimation for high-dimensional
linear mixed models, with sparse-aware standard errors and a seeded
Monte-Carlo study harness."""

from .errors import (
    ConfigurationError,
    DataError,
    DataParseError,
    DegenerateDataError,
    MonomorphicColumnError,
    NumericalFailureError,
    RankDeficientCovariatesError,
    ShapeMismatchError,
    SpecheritError,
    UnidentifiableModelError,
)
from .harness import (
    EstimateReport,
    ReplicateRecord,
    StudySpec,
    estimate_files,
    estimate_from_design,
    mp_check,
    run_replicate,
    run_study,
    summarize_replicates,
)
from .inference import (
    build_report,
    confidence_interval,
    gamma2_limit,
    gamma_n2,
    normal_quantile,
    s_empirical,
    s_limit,
    se_q1,
    tau2,
    var_quadform_oracle,
)
from .likelihood import (
    SolverConfig,
    SolverResult,
    d2loglik,
    dloglik,
    g,
    grid_oracle,
    loglik,
    newton_estimate,
    profile_sigma2,
)
from .spectral import (
    MPLaw,
    SpectralDecomposition,
    StandardizedDesign,
    decompose,
    eigendecompose,
    esd,
    kinship,
    mp_cdf,
    mp_integrate,
    residualize,
    rotate,
    standardize,
)
from .synthcohort import (
    EffectVector,
    GenotypeMatrix,
    SimulatedCohort,
    SimulationConfig,
    effect_scale,
    replicate_rng,
    sample_allele_frequencies,
    sample_effects,
    sample_genotypes,
    simulate_cohort,
    simulate_phenotype,
)

__version__ = "0.1.0"
