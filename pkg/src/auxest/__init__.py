"""Survey-sampling estimators of a population mean and variance that use auxiliary information.

The package covers ratio, product, exponential and almost unbiased
estimators built on a continuous auxiliary variable or a binary attribute,
their first-order bias and MSE, Monte Carlo and exact-enumeration checks of
that theory, and recomputation of published efficiency tables.
"""

from . import mean_estimators, variance_estimators
from .errors import AuxEstError, ConfigError, EstimationError
from .mean_estimators import estimate_mean
from .montecarlo import (SimulationConfig, SimulationReport, Tolerance, compare_theory_empirical,
                         exact_moments_enumeration, run_simulation)
from .naming import parse_estimator, parse_estimator_list
from .population import (DesignConstants, Population, PopulationSummary, SynthesisTarget,
                         load_population_csv, summarize, synthesize_population, write_population_csv)
from .sampling import compute_sample_stats, compute_two_phase_stats, draw_srswor, draw_two_phase
from .tables import build_table, table_ids
from .theory import (TheoryMoments, efficiency_conditions, min_mse_mean, min_mse_variance, pre,
                     theory, theory_mean, theory_variance)
from .variance_estimators import estimate_variance

__version__ = "0.1.0"

__all__ = [
    "AuxEstError", "ConfigError", "EstimationError",
    "Population", "PopulationSummary", "DesignConstants", "SynthesisTarget",
    "load_population_csv", "write_population_csv", "summarize", "synthesize_population",
    "draw_srswor", "draw_two_phase", "compute_sample_stats", "compute_two_phase_stats",
    "mean_estimators", "variance_estimators", "estimate_mean", "estimate_variance",
    "parse_estimator", "parse_estimator_list",
    "TheoryMoments", "theory", "theory_mean", "theory_variance", "pre",
    "min_mse_mean", "min_mse_variance", "efficiency_conditions",
    "SimulationConfig", "SimulationReport", "Tolerance", "run_simulation",
    "exact_moments_enumeration", "compare_theory_empirical",
    "build_table", "table_ids",
]
