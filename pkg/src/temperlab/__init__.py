"""temperlab: thermodynamic response functions of tempered posteriors.

Sample tempered posteriors with HMC across a logarithmic inverse-
temperature grid and compute the full response hierarchy: order
parameters, susceptibilities, heat capacity, WAIC complexity, WBIC,
thermodynamic-integration log Z, free energy, and the RLCT slope, with
gauge-invariance and covariance-identity checks against exact oracles.
"""

__version__ = "0.1.0"

from .hmc import ChainOutput, HmcConfig, SamplerAbort, leapfrog, run_chain
from .model import (
    Dataset,
    ModelSpec,
    apply_gauge,
    check_gradient,
    grad_log_tempered,
    log_tempered_density,
)
from .models import (
    ConjugateGaussianModel,
    MixtureModel,
    RRRModel,
    TwoLayerNetModel,
    make_synthetic_dataset,
)
from .observables import (
    Observable,
    check_invariance,
    eval_observable,
    get_observable,
    n_eff,
    singular_values,
)
from .quadrature import QuadratureSpec, default_spec, grid_expectation, grid_log_normalizer
from .responses import (
    IdentityReport,
    ResponseCurve,
    build_response_curve,
    covariance_identity_check,
    find_susceptibility_peak,
    heat_capacity,
    log_partition_curve,
    order_parameter,
    quadrature_identity_check,
    response_speed_bound_check,
    rlct_estimate,
    susceptibility,
    waic_complexity,
    wbic,
)
from .stats import (
    EssDiagnostics,
    MomentAccumulator,
    accumulate,
    covariance,
    effective_sample_size,
    nonuniform_derivative,
)
from .sweep import BetaGrid, SweepResult, make_beta_grid, run_sweep
