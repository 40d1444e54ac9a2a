"""zetamix: the Zeta distribution as continuous mixtures.

The Zeta PMF (x+1)^{-s}/zeta(s) on {0, 1, 2, ...} arises by averaging
Negative Binomial counts over a shape-dependent success-parameter density
(a signed quasi-density when the shape is below one) and, equivalently, by
averaging Poisson counts over a unique rate density. This package evaluates
those mixing densities, verifies every mixture identity numerically, and
samples the distribution directly and through each hierarchical chain.
"""

from .distributions import (
    GammaParams,
    NbParams,
    YuleParams,
    ZetaParams,
    beta_pdf,
    gamma_pdf,
    nb_pmf,
    nb_tail_point,
    poisson_pmf,
    poisson_tail_point,
    yule_pmf,
    yule_tail_point,
    zeta_pmf,
    zeta_tail_point,
)
from .mixing import (
    MixingDensityKind,
    MixingKind,
    MultipleSignChangesError,
    find_sign_change,
    gamma_transform_pdf,
    lambda_mixing_pdf,
    lambda_mixing_pdf_via_r,
    mixing_pdf,
    mixing_pdf_r1,
    mixing_pdf_r2_closed,
    mixing_pdf_r_gt1,
    mixing_quasi_pdf_r_lt1,
    quasi_total_variation,
)
from .mixtures import (
    DEFAULT_GRID,
    DEFAULT_R_PRIORS,
    VERSION,
    GridConfig,
    IdentityCheck,
    MixtureEvaluation,
    VerificationReport,
    gamma_poisson_pmf,
    gamma_poisson_pmf_many,
    mgf_series_harmonic,
    mgf_series_hurwitz,
    mixing_mgf_quadrature,
    mixing_moment,
    moment_identity_check,
    nb_mixture_pmf,
    nb_mixture_pmf_many,
    poisson_mixture_pmf,
    poisson_mixture_pmf_many,
    random_r_mixture_pmf,
    report_to_csv_rows,
    report_to_json_dict,
    run_verification_grid,
    yule_mixture_pmf,
    yule_mixture_pmf_many,
)
from .quadrature import (
    BatchQuadratureResult,
    EndpointHint,
    NonFiniteIntegrandError,
    QuadratureConvergenceError,
    QuadratureResult,
    QuadratureSpec,
    integrate_interval,
    integrate_semi_infinite,
    integrate_unit,
)
from .samplers import (
    FitSummary,
    SeededStream,
    fit_against_zeta,
    sample_mixing_p_r1,
    sample_zeta_direct,
    sample_zeta_via_geometric_chain,
    sample_zeta_via_poisson_chain,
)
from .special import (
    DEFAULT_ACCURACY,
    SpecialFnAccuracy,
    generalized_harmonic,
    hurwitz_zeta,
    log_gamma,
    riemann_zeta,
)

__version__ = VERSION
