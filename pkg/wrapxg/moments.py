"""
Trigonometric moments and circular summary measures of the wrapped xgamma
distribution.

The trigonometric moment of order p of a wrapped variable is the characteristic
function of the linear variable at the integer p. Every angle derived here comes
from the argument of that complex number (quadrant-aware), never from a
composition of real arctangents, which drops a half turn whenever
λ² + λ − p² < 0.
"""

import cmath
import logging
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from wrapxg.angles import CircularSample, normalize
from wrapxg.errors import DataError, DomainError
from wrapxg.linear import Rate, xg_cf

logger = logging.getLogger(__name__)

# Below this resultant length, a sample's mean direction is reported undefined.
_UNDEFINED_RESULTANT = 1e-12

TABLE_LAMBDAS: tuple[float, ...] = (0.1, 0.7, 1.0, 2.5, 4.0, 8.0)


@dataclass(frozen=True)
class TrigMomentSet:
    """
    The trigonometric moment of order p, in polar form (rho, mu), as non-central
    components (alpha, beta), and as central components (alpha_bar, beta_bar),
    the latter taken about the mean direction.
    """

    p: int
    rho: float
    mu: float
    alpha: float
    beta: float
    alpha_bar: float
    beta_bar: float


@dataclass(frozen=True)
class CircularSummary:
    mean_direction: float
    resultant_length: float
    circ_variance: float
    circ_stddev: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class SampleSummary:
    """
    Empirical counterpart of :class:`CircularSummary` for an observed sample.

    When the resultant vector of the sample vanishes, the mean direction is
    undefined and `mean_direction` is None.
    """

    n: int
    mean_direction: float | None
    resultant_length: float
    circ_variance: float
    circ_stddev: float

    @property
    def defined(self) -> bool:
        return self.mean_direction is not None


def _check_order(p: int) -> int:
    if isinstance(p, bool) or int(p) != p:
        msg = f"Trigonometric moment orders are integers, got {p!r}."
        raise DomainError(msg)
    return int(p)


def wrxg_cf(p: int, rate: Rate) -> complex:
    """
    Characteristic function of the wrapped xgamma distribution at the integer
    order p. It coincides with the linear xgamma characteristic function at p.

    >>> wrxg_cf(1, Rate(1.0))
    (0.125+0.375j)
    """

    return xg_cf(float(_check_order(p)), rate)


def resultant_closed_form(p: int, rate: Rate) -> float:
    """
    The length of the order-p trigonometric moment, from its real closed form.
    Agrees with ``abs(wrxg_cf(p, rate))``.
    """

    p = _check_order(p)
    lam = rate.value
    a = lam * lam + lam - p * p
    return (lam * lam / (1.0 + lam)) * math.sqrt(
        (a * a + 4.0 * p * p * lam * lam) / (lam * lam + p * p) ** 3
    )


def arctan_mean_direction(p: int, rate: Rate) -> float:
    """
    The order-p moment angle as the real-arctangent composition
    3 atan(p/λ) − atan(2pλ / (λ² + λ − p²)), normalized to [0, 2π).

    This composition is only correct when λ² + λ − p² > 0, and is kept as a
    cross-check on :func:`trig_moments`.

    Raises:
        DomainError: when λ² + λ − p² <= 0.
    """

    p = _check_order(p)
    lam = rate.value
    a = lam * lam + lam - p * p
    if a <= 0.0:
        msg = (
            f"The arctangent form is invalid for p={p}, λ={lam}: λ² + λ − p² = {a}."
        )
        raise DomainError(msg)
    return normalize(3.0 * math.atan(p / lam) - math.atan(2.0 * p * lam / a))


def _polar(p: int, rate: Rate) -> tuple[float, float]:
    phi = wrxg_cf(p, rate)
    return abs(phi), normalize(cmath.phase(phi))


def trig_moments(p: int, rate: Rate) -> TrigMomentSet:
    """
    Computes the trigonometric moment of order p of the wrapped xgamma
    distribution.

    Args:
        p: The order, at least 1.

        rate: The distribution's rate.

    Returns:
        A TrigMomentSet. Its `mu` is in [0, 2π).

    Example:

    >>> m = trig_moments(1, Rate(1.0))
    >>> round(m.rho, 5), round(m.mu, 5)
    (0.39528, 1.24905)
    >>> m.beta_bar
    0.0
    """

    p = _check_order(p)
    if p < 1:
        msg = f"Trigonometric moment order must be >= 1, got {p}."
        raise DomainError(msg)

    rho, mu = _polar(p, rate)
    _, mu_1 = _polar(1, rate) if p != 1 else (rho, mu)

    central = mu - p * mu_1
    beta_bar = 0.0 if p == 1 else rho * math.sin(central)
    alpha_bar = rho if p == 1 else rho * math.cos(central)

    return TrigMomentSet(
        p=p,
        rho=rho,
        mu=mu,
        alpha=rho * math.cos(mu),
        beta=rho * math.sin(mu),
        alpha_bar=alpha_bar,
        beta_bar=beta_bar,
    )


def circular_summary(rate: Rate) -> CircularSummary:
    """
    Mean direction, resultant length, circular variance and standard deviation,
    and the skewness and kurtosis coefficients of the wrapped xgamma
    distribution.

    >>> s = circular_summary(Rate(2.5))
    >>> round(s.mean_direction, 5), round(s.resultant_length, 5)
    (0.56855, 0.84367)
    """

    first = trig_moments(1, rate)
    second = trig_moments(2, rate)

    rho = first.rho
    variance = 1.0 - rho

    return CircularSummary(
        mean_direction=first.mu,
        resultant_length=rho,
        circ_variance=variance,
        circ_stddev=math.sqrt(-2.0 * math.log(1.0 - variance)),
        skewness=second.beta_bar / variance**1.5,
        kurtosis=(second.alpha_bar - (1.0 - variance) ** 4) / variance**2,
    )


@dataclass(frozen=True)
class CharacteristicsTable:
    """
    Characteristics of the wrapped xgamma distribution over a list of rates,
    one column per rate, laid out row by row in a fixed order: summary
    measures, non-central moments, central moments, then the skewness and
    kurtosis coefficients.
    """

    lambdas: tuple[float, ...]
    p_max: int
    summaries: tuple[CircularSummary, ...]
    moments: tuple[tuple[TrigMomentSet, ...], ...]
    labels: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        orders = range(1, self.p_max + 1)
        labels = [
            "mu",
            "rho",
            "V0",
            "sigma0",
            *(f"alpha_{p}" for p in orders),
            *(f"beta_{p}" for p in orders),
            *(f"alpha_bar_{p}" for p in orders),
            *(f"beta_bar_{p}" for p in orders),
            "zeta1",
            "zeta2",
        ]
        object.__setattr__(self, "labels", tuple(labels))

    def _column(self, index: int) -> list[float]:
        summary = self.summaries[index]
        moments = self.moments[index]
        return [
            summary.mean_direction,
            summary.resultant_length,
            summary.circ_variance,
            summary.circ_stddev,
            *(m.alpha for m in moments),
            *(m.beta for m in moments),
            *(m.alpha_bar for m in moments),
            *(m.beta_bar for m in moments),
            summary.skewness,
            summary.kurtosis,
        ]

    def rows(self) -> Iterator[tuple[str, tuple[float, ...]]]:
        columns = [self._column(i) for i in range(len(self.lambdas))]
        for row, label in enumerate(self.labels):
            yield label, tuple(column[row] for column in columns)

    def value(self, label: str, lam: float) -> float:
        row = self.labels.index(label)
        column = self.lambdas.index(lam)
        return self._column(column)[row]


def characterize_table(
    lambdas: Iterable[Rate | float] = TABLE_LAMBDAS, p_max: int = 2
) -> CharacteristicsTable:
    """
    Tabulates the characteristics of the wrapped xgamma distribution for each
    given rate.

    Args:
        lambdas: The rates, one table column each, in the given order.

        p_max: The highest moment order tabulated. Must be at least 2, since
            the skewness and kurtosis need the second order.

    >>> table = characterize_table()
    >>> len(table.labels), len(table.lambdas)
    (14, 6)
    """

    if p_max < 2:  # noqa: PLR2004
        msg = f"p_max must be at least 2, got {p_max}."
        raise DomainError(msg)

    rates = [Rate.coerce(lam) for lam in lambdas]
    if not rates:
        msg = "At least one rate is needed."
        raise DomainError(msg)

    return CharacteristicsTable(
        lambdas=tuple(r.value for r in rates),
        p_max=p_max,
        summaries=tuple(circular_summary(r) for r in rates),
        moments=tuple(
            tuple(trig_moments(p, r) for p in range(1, p_max + 1)) for r in rates
        ),
    )


def sample_circular_summary(sample: CircularSample) -> SampleSummary:
    """
    Empirical mean direction and resultant length of a sample.

    >>> from wrapxg.angles import CircularSample
    >>> s = sample_circular_summary(CircularSample.fromValues([0.0, math.pi]))
    >>> s.defined
    False
    """

    if sample.n == 0:
        msg = "Cannot summarize an empty sample."
        raise DataError(msg)

    angles = sample.angles
    c = float(np.sum(np.cos(angles)))
    s = float(np.sum(np.sin(angles)))
    length = min(math.hypot(c, s) / sample.n, 1.0)

    mean_direction: float | None = normalize(math.atan2(s, c))
    if length < _UNDEFINED_RESULTANT:
        logger.warning(
            "Resultant length %.3g of a %d-point sample is too small for a mean"
            " direction.",
            length,
            sample.n,
        )
        mean_direction = None

    stddev = math.sqrt(-2.0 * math.log(length)) if length > 0.0 else math.inf

    return SampleSummary(
        n=sample.n,
        mean_direction=mean_direction,
        resultant_length=length,
        circ_variance=1.0 - length,
        circ_stddev=stddev,
    )
