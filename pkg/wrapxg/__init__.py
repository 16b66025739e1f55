"WrapXG: the wrapped xgamma distribution for circular data."

__project__ = "WrapXG"
__version__ = "0.1.0-dev"
__author__ = "The WrapXG developers"
__copyright__ = "2024, The WrapXG developers"

from wrapxg.angles import AngleUnit, CircularSample, normalize
from wrapxg.errors import (
    ConvergenceError,
    DataError,
    DegenerateStatisticError,
    DomainError,
    ShapeMismatchError,
    SimulationError,
    WrapXGError,
)
from wrapxg.estimate import (
    FitResult,
    InformationCriteria,
    SearchConfig,
    fit_mle,
    information_criteria,
    log_likelihood,
    model_mean_direction,
    model_summary,
)
from wrapxg.gof import GofReport, ad_stat, cvm_stat, gof_report, ks_test, watson_u2
from wrapxg.linear import LinearModelKind, Rate, xg_cdf, xg_cf, xg_pdf, xg_sample
from wrapxg.moments import (
    CharacteristicsTable,
    CircularSummary,
    TrigMomentSet,
    characterize_table,
    circular_summary,
    trig_moments,
    wrxg_cf,
)
from wrapxg.simulation import (
    SimCell,
    SimGrid,
    SimulationConfig,
    TolerancePolicy,
    compare_to_reference,
    load_reference,
    simulate_cell,
    simulate_grid,
)
from wrapxg.wrapped import (
    SeriesTruncation,
    WrappedModelKind,
    wrap_pdf_series,
    wrapped_sample,
    wrxg_cdf,
    wrxg_pdf,
)

__all__ = [
    "AngleUnit",
    "CharacteristicsTable",
    "CircularSample",
    "CircularSummary",
    "ConvergenceError",
    "DataError",
    "DegenerateStatisticError",
    "DomainError",
    "FitResult",
    "GofReport",
    "InformationCriteria",
    "LinearModelKind",
    "Rate",
    "SearchConfig",
    "SeriesTruncation",
    "ShapeMismatchError",
    "SimCell",
    "SimGrid",
    "SimulationConfig",
    "SimulationError",
    "TolerancePolicy",
    "TrigMomentSet",
    "WrapXGError",
    "WrappedModelKind",
    "ad_stat",
    "characterize_table",
    "circular_summary",
    "compare_to_reference",
    "cvm_stat",
    "fit_mle",
    "gof_report",
    "information_criteria",
    "ks_test",
    "load_reference",
    "log_likelihood",
    "model_mean_direction",
    "model_summary",
    "normalize",
    "simulate_cell",
    "simulate_grid",
    "trig_moments",
    "watson_u2",
    "wrap_pdf_series",
    "wrapped_sample",
    "wrxg_cdf",
    "wrxg_cf",
    "wrxg_pdf",
    "xg_cdf",
    "xg_cf",
    "xg_pdf",
    "xg_sample",
]
