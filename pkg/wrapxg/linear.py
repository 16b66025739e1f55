import enum
import math
from dataclasses import dataclass

import numpy as np

from wrapxg.arrays import FloatArray, RealLike, SeedLike, as_array, as_output
from wrapxg.errors import DomainError


@dataclass(frozen=True)
class Rate:
    """
    A validated, strictly positive rate parameter.

    Every distribution in WrapXG is parameterized by a Rate. Validation happens
    here once, so that downstream operations can assume the value is usable.

    Args:
        value: The rate. Must be finite and strictly positive.

    Example:

    >>> from wrapxg.linear import Rate
    >>> Rate(2.5).value
    2.5
    >>> Rate(0.0)
    Traceback (most recent call last):
    ...
    wrapxg.errors.DomainError: Rate must be finite and > 0, got 0.0.
    """

    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value) or value <= 0.0:
            msg = f"Rate must be finite and > 0, got {self.value!r}."
            raise DomainError(msg)
        object.__setattr__(self, "value", value)

    @classmethod
    def coerce(cls, rate: "Rate | float") -> "Rate":
        return rate if isinstance(rate, Rate) else cls(rate)

    def __float__(self) -> float:
        return self.value


class LinearModelKind(enum.Enum):
    XGAMMA = "xgamma"
    LINDLEY = "lindley"
    EXPONENTIAL = "exponential"


def _check_support(x: RealLike, *, allow_infinity: bool = False) -> FloatArray:
    arr = as_array(x)
    bad = np.isnan(arr) | (arr < 0.0)
    if not allow_infinity:
        bad |= ~np.isfinite(arr)
    if np.any(bad):
        msg = f"Linear variates must be finite and >= 0, got {x!r}."
        raise DomainError(msg)
    return arr


def mixture_weights(rate: Rate) -> tuple[float, float]:
    """
    Returns the weights of the exponential and of the gamma component in the
    xgamma (and Lindley) mixture decomposition.

    >>> mixture_weights(Rate(1.0))
    (0.5, 0.5)
    """

    lam = rate.value
    return lam / (1.0 + lam), 1.0 / (1.0 + lam)


def xg_pdf(x: RealLike, rate: Rate) -> RealLike:
    """
    Density of the xgamma distribution.

    Args:
        x: One or more nonnegative, finite values.

        rate: The distribution's rate.

    Returns:
        The density, as a float for scalar input, else an array of the same
        shape as `x`.

    >>> xg_pdf(0.0, Rate(1.0))
    0.5
    """

    arr = _check_support(x)
    lam = rate.value
    pdf = (lam * lam / (1.0 + lam)) * (1.0 + 0.5 * lam * arr * arr) * np.exp(-lam * arr)
    return as_output(pdf, x)


def xg_cdf(x: RealLike, rate: Rate) -> RealLike:
    """
    Cumulative distribution function of the xgamma distribution. Positive
    infinity is accepted and maps to 1.

    >>> xg_cdf(0.0, Rate(2.5))
    0.0
    >>> xg_cdf(float("inf"), Rate(1.0))
    1.0
    """

    arr = _check_support(x, allow_infinity=True)
    lam = rate.value

    with np.errstate(invalid="ignore"):
        lx = lam * arr
        # 1 - (1 + (lx + lx^2/2) / (1 + lam)) e^-lx, with the leading
        # 1 - e^-lx taken through expm1.
        cdf = -np.expm1(-lx) - (lx + 0.5 * lx * lx) / (1.0 + lam) * np.exp(-lx)

    cdf = np.where(np.isposinf(arr), 1.0, cdf)
    return as_output(np.clip(cdf, 0.0, 1.0), x)


def xg_cf(t: float, rate: Rate) -> complex:
    """
    Characteristic function of the xgamma distribution, evaluated with complex
    arithmetic throughout.

    >>> xg_cf(0.0, Rate(4.0)) == 1
    True
    """

    if not math.isfinite(t):
        msg = f"Characteristic function argument must be finite, got {t!r}."
        raise DomainError(msg)

    lam = rate.value
    denominator = complex(lam, -t) ** 3
    numerator = complex(lam * lam + lam - t * t, -2.0 * t * lam)
    return (lam * lam / (1.0 + lam)) * numerator / denominator


def xg_sample(rate: Rate, n: int, seed: SeedLike) -> FloatArray:
    """
    Draws i.i.d. xgamma variates through the exact mixture decomposition: an
    exponential with probability lam/(1+lam), else a gamma of shape 3, both
    with rate lam.

    Args:
        rate: The distribution's rate.

        n: How many variates to draw. Must be at least 1.

        seed: An integer seed, a numpy SeedSequence or a Generator. The same
            integer seed always yields the same draws.

    Returns:
        An array of n nonnegative floats.
    """

    return _mixture_sample(rate, n, seed, gamma_shape=3.0)


def _mixture_sample(
    rate: Rate, n: int, seed: SeedLike, *, gamma_shape: float
) -> FloatArray:
    if n < 1:
        msg = f"Sample size must be at least 1, got {n}."
        raise DomainError(msg)

    rng = np.random.default_rng(seed)
    scale = 1.0 / rate.value
    weight, _ = mixture_weights(rate)

    from_exponential = rng.random(n) < weight
    exponential = rng.exponential(scale, n)
    gamma = rng.gamma(gamma_shape, scale, n)

    return np.where(from_exponential, exponential, gamma)


def _lindley_pdf(x: RealLike, rate: Rate) -> RealLike:
    arr = _check_support(x)
    lam = rate.value
    pdf = (lam * lam / (1.0 + lam)) * (1.0 + arr) * np.exp(-lam * arr)
    return as_output(pdf, x)


def _lindley_cdf(x: RealLike, rate: Rate) -> RealLike:
    arr = _check_support(x, allow_infinity=True)
    lam = rate.value

    with np.errstate(invalid="ignore"):
        lx = lam * arr
        cdf = -np.expm1(-lx) - lx / (1.0 + lam) * np.exp(-lx)

    cdf = np.where(np.isposinf(arr), 1.0, cdf)
    return as_output(np.clip(cdf, 0.0, 1.0), x)


def _exponential_pdf(x: RealLike, rate: Rate) -> RealLike:
    arr = _check_support(x)
    lam = rate.value
    return as_output(lam * np.exp(-lam * arr), x)


def _exponential_cdf(x: RealLike, rate: Rate) -> RealLike:
    arr = _check_support(x, allow_infinity=True)
    return as_output(-np.expm1(-rate.value * arr), x)


def linear_pdf(kind: LinearModelKind, x: RealLike, rate: Rate) -> RealLike:
    """
    Density of the given linear model.

    >>> linear_pdf(LinearModelKind.LINDLEY, 0.0, Rate(1.0))
    0.5
    """

    match kind:
        case LinearModelKind.XGAMMA:
            return xg_pdf(x, rate)
        case LinearModelKind.LINDLEY:
            return _lindley_pdf(x, rate)
        case LinearModelKind.EXPONENTIAL:
            return _exponential_pdf(x, rate)


def linear_cdf(kind: LinearModelKind, x: RealLike, rate: Rate) -> RealLike:
    """
    Cumulative distribution function of the given linear model.

    >>> round(linear_cdf(LinearModelKind.EXPONENTIAL, 0.5, Rate(2.0)), 6)
    0.632121
    """

    match kind:
        case LinearModelKind.XGAMMA:
            return xg_cdf(x, rate)
        case LinearModelKind.LINDLEY:
            return _lindley_cdf(x, rate)
        case LinearModelKind.EXPONENTIAL:
            return _exponential_cdf(x, rate)


def linear_cf(kind: LinearModelKind, t: float, rate: Rate) -> complex:
    """
    Characteristic function of the given linear model.
    """

    if kind is LinearModelKind.XGAMMA:
        return xg_cf(t, rate)

    if not math.isfinite(t):
        msg = f"Characteristic function argument must be finite, got {t!r}."
        raise DomainError(msg)

    lam = rate.value
    base = lam / complex(lam, -t)

    if kind is LinearModelKind.EXPONENTIAL:
        return base

    # Lindley: lam/(1+lam) Exp(lam) + 1/(1+lam) Gamma(2, lam).
    exp_weight, gamma_weight = mixture_weights(rate)
    return exp_weight * base + gamma_weight * base * base


def linear_sample(kind: LinearModelKind, rate: Rate, n: int, seed: SeedLike) -> FloatArray:
    """
    Draws i.i.d. variates from the given linear model. Deterministic given an
    integer seed.
    """

    match kind:
        case LinearModelKind.XGAMMA:
            return xg_sample(rate, n, seed)
        case LinearModelKind.LINDLEY:
            return _mixture_sample(rate, n, seed, gamma_shape=2.0)
        case LinearModelKind.EXPONENTIAL:
            if n < 1:
                msg = f"Sample size must be at least 1, got {n}."
                raise DomainError(msg)
            return np.random.default_rng(seed).exponential(1.0 / rate.value, n)
