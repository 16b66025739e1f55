import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from wrapxg.angles import CircularSample, normalize
from wrapxg.errors import ConvergenceError, DomainError
from wrapxg.linear import Rate, linear_cf
from wrapxg.moments import circular_summary
from wrapxg.wrapped import WrappedModelKind, wrapped_logpdf

logger = logging.getLogger(__name__)

# How close, in log scale, an estimate must be to a search bound to be flagged.
_BOUNDARY_TOLERANCE = 1e-4


@dataclass(frozen=True)
class SearchConfig:
    """
    Where and how precisely :func:`fit_mle` searches for the rate.

    Args:
        lower: The smallest rate considered.

        upper: The largest rate considered.

        rtol: The relative tolerance on the estimate.

        grid_points: The number of log-spaced rates across the bounds that the
            estimate is verified against.

        log_scale: Whether the search runs over ln λ rather than λ itself.
    """

    lower: float = 1e-3
    upper: float = 1e3
    rtol: float = 1e-8
    grid_points: int = 21
    log_scale: bool = True

    def __post_init__(self) -> None:
        if not (
            math.isfinite(self.lower)
            and math.isfinite(self.upper)
            and 0.0 < self.lower < self.upper
        ):
            msg = (
                "Search bounds must satisfy 0 < lower < upper,"
                f" got [{self.lower}, {self.upper}]."
            )
            raise DomainError(msg)
        if not self.rtol > 0.0:
            msg = f"Search tolerance must be > 0, got {self.rtol}."
            raise DomainError(msg)
        if self.grid_points < 2:  # noqa: PLR2004
            msg = f"The verification grid needs at least 2 points, got {self.grid_points}."
            raise DomainError(msg)


@dataclass(frozen=True)
class InformationCriteria:
    aic: float
    caic: float
    bic: float
    hqic: float


@dataclass(frozen=True)
class FitResult:
    """
    The outcome of fitting one wrapped model to one sample.

    `criteria` is None for samples too small for every criterion to be
    defined, i.e. n < 3. `std_error` is NaN when the observed information at
    the estimate is not positive, which typically happens at a search bound.
    """

    model: WrappedModelKind
    lambda_hat: Rate
    std_error: float
    log_lik: float
    n: int
    criteria: InformationCriteria | None
    at_boundary: bool = False

    @property
    def k(self) -> int:
        return 1


def log_likelihood(kind: WrappedModelKind, rate: Rate, sample: CircularSample) -> float:
    """
    The log-likelihood of a rate for the given model, summed over every
    observation of the sample.

    >>> import math
    >>> from wrapxg.wrapped import wrxg_pdf
    >>> sample = CircularSample.fromValues([math.pi])
    >>> math.isclose(
    ...     log_likelihood(WrappedModelKind.WRXG, Rate(1.0), sample),
    ...     math.log(wrxg_pdf(math.pi, Rate(1.0))),
    ... )
    True
    """

    return math.fsum(np.ravel(wrapped_logpdf(kind, sample.angles, rate)))


def information_criteria(log_lik: float, k: int, n: int) -> InformationCriteria:
    """
    Computes the AIC, its small-sample correction CAIC, the BIC and the
    Hannan-Quinn criterion of a fit with k free parameters on n observations.

    Raises:
        DomainError: when n < 3 or n <= k + 1.

    Example:

    >>> c = information_criteria(-156.0570 / 2, k=1, n=60)
    >>> round(c.aic, 4), round(c.caic, 4), round(c.bic, 4), round(c.hqic, 4)
    (158.057, 158.126, 160.1513, 158.8762)
    """

    if k < 0:
        msg = f"The parameter count must be >= 0, got {k}."
        raise DomainError(msg)
    if n < 3 or n <= k + 1:  # noqa: PLR2004
        msg = f"Information criteria need n >= 3 and n > k + 1, got n={n}, k={k}."
        raise DomainError(msg)

    deviance = -2.0 * log_lik
    aic = deviance + 2.0 * k
    return InformationCriteria(
        aic=aic,
        caic=aic + 2.0 * k * (k + 1) / (n - k - 1),
        bic=deviance + k * math.log(n),
        hqic=deviance + 2.0 * k * math.log(math.log(n)),
    )


def _minimize(
    kind: WrappedModelKind,
    sample: CircularSample,
    lower: float,
    upper: float,
    search: SearchConfig,
) -> float:
    if search.log_scale:

        def objective(u: float) -> float:
            return -log_likelihood(kind, Rate(math.exp(u)), sample)

        bounds = (math.log(lower), math.log(upper))
        xatol = search.rtol
    else:

        def objective(u: float) -> float:
            return -log_likelihood(kind, Rate(u), sample)

        bounds = (lower, upper)
        xatol = search.rtol * lower

    result = optimize.minimize_scalar(
        objective,
        bounds=bounds,
        method="bounded",
        options={"xatol": xatol, "maxiter": 1000},
    )

    logger.debug(
        "Bounded search for %s over [%g, %g]: %d evaluations, status %s.",
        kind.value,
        lower,
        upper,
        result.nfev,
        result.status,
    )

    if not result.success or not math.isfinite(result.fun):
        msg = (
            f"Likelihood maximization for {kind.value} did not converge:"
            f" {result.message}"
        )
        raise ConvergenceError(msg)

    estimate = float(result.x)
    return math.exp(estimate) if search.log_scale else estimate


def _observed_information(
    kind: WrappedModelKind, sample: CircularSample, lam: float
) -> float:
    h = min(max(1e-5, 1e-4 * lam), 0.5 * lam)
    center = log_likelihood(kind, Rate(lam), sample)
    above = log_likelihood(kind, Rate(lam + h), sample)
    below = log_likelihood(kind, Rate(lam - h), sample)
    return -(above - 2.0 * center + below) / (h * h)


def fit_mle(
    kind: WrappedModelKind,
    sample: CircularSample,
    search: SearchConfig | None = None,
) -> FitResult:
    """
    Fits the rate of a wrapped model to a circular sample by maximum
    likelihood.

    The likelihood is maximized by a bounded one-dimensional search, then
    checked against a log-spaced grid across the bounds. If an interior grid
    point beats the search result, the search is rerun around that grid point;
    if a bound beats it, the bound is taken as the estimate.

    Args:
        kind: The wrapped model to fit.

        sample: The observations.

        search: The search bounds and tolerance. Defaults to
            `SearchConfig()`.

    Returns:
        A FitResult.

    Raises:
        ConvergenceError: if the search fails.
    """

    search = search if search is not None else SearchConfig()

    lam = _minimize(kind, sample, search.lower, search.upper, search)
    best = log_likelihood(kind, Rate(lam), sample)

    grid = np.geomspace(search.lower, search.upper, search.grid_points)
    grid_values = [log_likelihood(kind, Rate(float(g)), sample) for g in grid]
    top = int(np.argmax(grid_values))

    beaten = grid_values[top] > best + 1e-9 * max(1.0, abs(best))
    if beaten and top in (0, len(grid) - 1):
        logger.debug(
            "Search bound λ=%g beats the search result λ=%g for %s.",
            grid[top],
            lam,
            kind.value,
        )
        lam = float(grid[top])
        best = grid_values[top]
    elif beaten:
        logger.warning(
            "Grid point λ=%g beats the search result λ=%g for %s; refining.",
            grid[top],
            lam,
            kind.value,
        )
        lower = float(grid[max(top - 1, 0)])
        upper = float(grid[min(top + 1, len(grid) - 1)])
        lam = _minimize(kind, sample, lower, upper, search)
        best = log_likelihood(kind, Rate(lam), sample)

    at_boundary = min(
        abs(math.log(lam) - math.log(search.lower)),
        abs(math.log(lam) - math.log(search.upper)),
    ) < _BOUNDARY_TOLERANCE
    if at_boundary:
        logger.warning(
            "The %s estimate λ=%g lies on the search bound [%g, %g].",
            kind.value,
            lam,
            search.lower,
            search.upper,
        )

    information = _observed_information(kind, sample, lam)
    if information > 0.0 and math.isfinite(information):
        std_error = 1.0 / math.sqrt(information)
    else:
        logger.warning(
            "Observed information %g at λ=%g is not positive; no standard error.",
            information,
            lam,
        )
        std_error = math.nan

    criteria = None
    if sample.n >= 3:  # noqa: PLR2004
        criteria = information_criteria(best, k=1, n=sample.n)

    return FitResult(
        model=kind,
        lambda_hat=Rate(lam),
        std_error=std_error,
        log_lik=best,
        n=sample.n,
        criteria=criteria,
        at_boundary=at_boundary,
    )


def model_mean_direction(fit: FitResult) -> tuple[float, float]:
    """
    The mean direction and resultant length of a fitted wrapped xgamma model.

    Raises:
        DomainError: if the fit is not for the wrapped xgamma model.
    """

    if fit.model is not WrappedModelKind.WRXG:
        msg = f"Expected a {WrappedModelKind.WRXG.value} fit, got {fit.model.value}."
        raise DomainError(msg)

    summary = circular_summary(fit.lambda_hat)
    return summary.mean_direction, summary.resultant_length


def model_summary(fit: FitResult) -> tuple[float, float]:
    """
    The mean direction and resultant length of any fitted wrapped model, from
    the characteristic function of its linear model at 1.
    """

    phi = linear_cf(fit.model.base, 1.0, fit.lambda_hat)
    return float(normalize(cmath.phase(phi))), abs(phi)
