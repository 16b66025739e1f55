import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import stats

from wrapxg.angles import CircularSample
from wrapxg.arrays import FloatArray, RealLike, as_array
from wrapxg.errors import DataError, DegenerateStatisticError
from wrapxg.estimate import FitResult
from wrapxg.wrapped import WrappedModelKind, wrapped_cdf

logger = logging.getLogger(__name__)

ModelCdf = Callable[[FloatArray], RealLike]


@dataclass(frozen=True)
class GofReport:
    """
    Goodness-of-fit statistics of one fitted model on one sample.

    When the Anderson-Darling statistic is undefined because the model CDF is
    exactly 0 or 1 at a sample point, `a2` is NaN and `a2_degenerate` is set.
    """

    model: WrappedModelKind
    n: int
    d: float
    ks_p: float
    w2: float
    a2: float
    u2: float
    a2_degenerate: bool = False


def _transformed(sample: CircularSample, cdf: ModelCdf) -> FloatArray:
    if sample.n == 0:
        msg = "Goodness-of-fit statistics need a non-empty sample."
        raise DataError(msg)

    values = np.sort(as_array(cdf(sample.sorted())).reshape(-1))
    if values.size != sample.n or not np.all(np.isfinite(values)):
        msg = "The model CDF must return one finite value per angle."
        raise DataError(msg)

    return np.clip(values, 0.0, 1.0)


def _ks_statistic(u: FloatArray) -> float:
    n = u.size
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(max(np.max(i / n - u), np.max(u - (i - 1.0) / n)))


def ks_test(sample: CircularSample, cdf: ModelCdf) -> tuple[float, float]:
    """
    The Kolmogorov-Smirnov statistic D of the sample against the model CDF,
    and its p-value from the asymptotic Kolmogorov distribution of sqrt(n) D.

    The p-value ignores that the model was fitted to the same sample, and is
    therefore anti-conservative.

    >>> sample = CircularSample.fromValues([math.pi])
    >>> d, p = ks_test(sample, lambda t: t / (2 * math.pi))
    >>> d, round(p, 4)
    (0.5, 0.9639)
    """

    u = _transformed(sample, cdf)
    d = _ks_statistic(u)
    p = float(stats.kstwobign.sf(math.sqrt(u.size) * d))
    return d, min(max(p, 0.0), 1.0)


def cvm_stat(sample: CircularSample, cdf: ModelCdf) -> float:
    """
    The Cramér-von Mises statistic W² of the sample against the model CDF.
    """

    u = _transformed(sample, cdf)
    n = u.size
    i = np.arange(1, n + 1, dtype=np.float64)
    return 1.0 / (12.0 * n) + math.fsum(((2.0 * i - 1.0) / (2.0 * n) - u) ** 2)


def ad_stat(sample: CircularSample, cdf: ModelCdf) -> float:
    """
    The Anderson-Darling statistic A² of the sample against the model CDF.

    Raises:
        DegenerateStatisticError: when the CDF is exactly 0 or 1 at a sample
            point, where the statistic is undefined.

    Example:

    >>> sample = CircularSample.fromValues([math.pi])
    >>> round(ad_stat(sample, lambda t: t / (2 * math.pi)), 6)
    0.386294
    """

    u = _transformed(sample, cdf)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        msg = (
            "The Anderson-Darling statistic is undefined: the model CDF is 0 or 1"
            " at a sample point."
        )
        raise DegenerateStatisticError(msg)

    n = u.size
    i = np.arange(1, n + 1, dtype=np.float64)
    terms = (2.0 * i - 1.0) * (np.log(u) + np.log1p(-u[::-1]))
    return -n - math.fsum(terms) / n


def watson_u2(sample: CircularSample, cdf: ModelCdf) -> float:
    """
    Watson's U², the Cramér-von Mises statistic corrected for the choice of
    origin on the circle: U² = W² − n (ū − ½)², with ū the mean of the
    transformed values.
    """

    u = _transformed(sample, cdf)
    w2 = cvm_stat(sample, cdf)
    return w2 - u.size * (math.fsum(u) / u.size - 0.5) ** 2


def gof_report(
    kind: WrappedModelKind, sample: CircularSample, fit: FitResult
) -> GofReport:
    """
    Computes every goodness-of-fit statistic of a fitted model on the sample
    it was fitted to.
    """

    def cdf(theta: FloatArray) -> RealLike:
        return wrapped_cdf(kind, theta, fit.lambda_hat)

    d, p = ks_test(sample, cdf)

    a2_degenerate = False
    try:
        a2 = ad_stat(sample, cdf)
    except DegenerateStatisticError:
        logger.warning(
            "Anderson-Darling statistic undefined for %s at λ=%g.",
            kind.value,
            fit.lambda_hat.value,
        )
        a2 = math.nan
        a2_degenerate = True

    return GofReport(
        model=kind,
        n=sample.n,
        d=d,
        ks_p=p,
        w2=cvm_stat(sample, cdf),
        a2=a2,
        u2=watson_u2(sample, cdf),
        a2_degenerate=a2_degenerate,
    )
