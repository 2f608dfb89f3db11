"""Mean likelihood, maximum likelihood, and Jeffreys-prior Bayes estimators
for the binomial, exponential, and MA(1) models, with exact and Monte Carlo
risk and Pitman-closeness comparisons."""

from . import binomial, compare, exponential, ma1, mele_core, numerics
from .compare import ComparisonPoint, PairedErrors, SimConfig, sweep
from .exceptions import (
    DataFormatError,
    DegenerateCurveError,
    DegenerateDataError,
    DomainError,
    EvaluationError,
    MeanlikError,
)
from .mele_core import (
    LikelihoodCurve,
    PriorSpec,
    jeffreys_binomial_prior,
    jeffreys_exponential_prior,
    jeffreys_ma1_prior,
    mean_squared_risk,
    mele,
    posterior_mean,
    uniform_prior,
)
from .numerics import (
    QuadratureRule,
    RngStream,
    gaussian_draws,
    gaussian_stream,
    integrate,
    maximize_scalar,
    reg_incomplete_gamma_p,
    simpson_rule,
)

__version__ = "0.1.0"

__all__ = [
    "binomial",
    "compare",
    "exponential",
    "ma1",
    "mele_core",
    "numerics",
    "ComparisonPoint",
    "PairedErrors",
    "SimConfig",
    "sweep",
    "LikelihoodCurve",
    "PriorSpec",
    "uniform_prior",
    "jeffreys_binomial_prior",
    "jeffreys_exponential_prior",
    "jeffreys_ma1_prior",
    "mele",
    "posterior_mean",
    "mean_squared_risk",
    "QuadratureRule",
    "RngStream",
    "simpson_rule",
    "integrate",
    "maximize_scalar",
    "reg_incomplete_gamma_p",
    "gaussian_stream",
    "gaussian_draws",
    "MeanlikError",
    "DomainError",
    "EvaluationError",
    "DegenerateCurveError",
    "DegenerateDataError",
    "DataFormatError",
]
