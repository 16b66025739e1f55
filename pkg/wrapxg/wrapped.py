"""
Wrapped distributions on the circle.

A linear variate X on the positive half-line is wrapped onto the circle as
θ = X mod 2π. The wrapped density is the lattice sum of the linear density over
θ + 2πk, k = 0, 1, 2, ...; for the three rate families handled here that sum is
geometric and has a closed form, which is what this module evaluates.

The truncated lattice sum is also available through :func:`wrap_pdf_series`,
and serves as an independent check on the closed forms.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from wrapxg.angles import TWO_PI, AngleUnit, CircularSample, normalize
from wrapxg.arrays import FloatArray, RealLike, SeedLike, as_array, as_output
from wrapxg.errors import DomainError
from wrapxg.linear import LinearModelKind, Rate, linear_pdf, linear_sample


class WrappedModelKind(enum.Enum):
    WRXG = "wrxg"
    WL = "wl"
    WE = "we"

    @property
    def base(self) -> LinearModelKind:
        """
        The linear model this wrapped model is obtained from.
        """

        return _BASES[self]


_BASES = {
    WrappedModelKind.WRXG: LinearModelKind.XGAMMA,
    WrappedModelKind.WL: LinearModelKind.LINDLEY,
    WrappedModelKind.WE: LinearModelKind.EXPONENTIAL,
}


@dataclass(frozen=True)
class _Geometric:
    """
    The geometric-series quantities shared by all closed forms, for q = e^-2πλ:
    the sums of q^k, k q^k and k^2 q^k over k >= 0.
    """

    q: float
    one_minus_q: float

    @classmethod
    def forRate(cls, rate: Rate) -> "_Geometric":
        a = TWO_PI * rate.value
        return cls(q=math.exp(-a), one_minus_q=-math.expm1(-a))

    @property
    def s0(self) -> float:
        return 1.0 / self.one_minus_q

    @property
    def s1(self) -> float:
        return self.q / self.one_minus_q**2

    @property
    def s2(self) -> float:
        return self.q * (1.0 + self.q) / self.one_minus_q**3


def _density_angles(theta: RealLike) -> FloatArray:
    # Any finite angle is accepted; 2π itself maps to 0.
    return as_array(normalize(theta))


def _cdf_angles(theta: RealLike) -> FloatArray:
    arr = as_array(theta)
    if not np.all(np.isfinite(arr)) or np.any((arr < 0.0) | (arr > TWO_PI)):
        msg = f"Wrapped CDF arguments must lie in [0, 2π], got {theta!r}."
        raise DomainError(msg)
    return arr


def _wrxg_bracket(theta: FloatArray, lam: float, geo: _Geometric) -> FloatArray:
    pi = math.pi
    return (
        1.0
        + 0.5 * lam * theta * theta
        + TWO_PI * lam * ((pi - theta) * geo.q + (theta + pi)) * geo.s1
    )


def _wl_bracket(theta: FloatArray, geo: _Geometric) -> FloatArray:
    return 1.0 + theta + TWO_PI * geo.q / geo.one_minus_q


def wrxg_pdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Density of the wrapped xgamma distribution.

    Args:
        theta: One or more angles, in radians. Finite angles outside [0, 2π)
            are normalized first.

        rate: The rate of the underlying xgamma distribution.

    Returns:
        The density, strictly positive on the circle.

    >>> round(wrxg_pdf(0.0, Rate(1.0)), 4)
    0.5195
    """

    arr = _density_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)
    scale = lam * lam / ((1.0 + lam) * geo.one_minus_q)
    pdf = scale * np.exp(-lam * arr) * _wrxg_bracket(arr, lam, geo)
    return as_output(pdf, theta)


def wrxg_cdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Cumulative distribution function of the wrapped xgamma distribution, from
    the origin of the circle, counterclockwise.

    >>> wrxg_cdf(0.0, Rate(2.5))
    0.0
    >>> round(wrxg_cdf(2 * math.pi, Rate(1.0)), 10)
    1.0
    """

    arr = _cdf_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)

    lt = lam * arr
    decay = np.exp(-lt)
    one_minus_decay = -np.expm1(-lt)

    linear_part = one_minus_decay - (lt + 0.5 * lt * lt) / (1.0 + lam) * decay
    first_moment = one_minus_decay - lt * decay

    cdf = (
        linear_part * geo.s0
        + (TWO_PI * lam / (1.0 + lam)) * first_moment * geo.s1
        + (2.0 * math.pi**2 * lam * lam / (1.0 + lam)) * one_minus_decay * geo.s2
    )
    return as_output(np.clip(cdf, 0.0, 1.0), theta)


def wl_pdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Density of the wrapped Lindley distribution.
    """

    arr = _density_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)
    scale = lam * lam / ((1.0 + lam) * geo.one_minus_q)
    pdf = scale * np.exp(-lam * arr) * _wl_bracket(arr, geo)
    return as_output(pdf, theta)


def wl_cdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Cumulative distribution function of the wrapped Lindley distribution.
    """

    arr = _cdf_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)

    lt = lam * arr
    decay = np.exp(-lt)
    one_minus_decay = -np.expm1(-lt)

    cdf = (one_minus_decay - lt * decay / (1.0 + lam)) * geo.s0 + (
        TWO_PI * lam / (1.0 + lam)
    ) * one_minus_decay * geo.s1
    return as_output(np.clip(cdf, 0.0, 1.0), theta)


def we_pdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Density of the wrapped exponential distribution.
    """

    arr = _density_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)
    return as_output(lam * np.exp(-lam * arr) / geo.one_minus_q, theta)


def we_cdf(theta: RealLike, rate: Rate) -> RealLike:
    """
    Cumulative distribution function of the wrapped exponential distribution.
    """

    arr = _cdf_angles(theta)
    geo = _Geometric.forRate(rate)
    cdf = -np.expm1(-rate.value * arr) / geo.one_minus_q
    return as_output(np.clip(cdf, 0.0, 1.0), theta)


def wrapped_pdf(kind: WrappedModelKind, theta: RealLike, rate: Rate) -> RealLike:
    match kind:
        case WrappedModelKind.WRXG:
            return wrxg_pdf(theta, rate)
        case WrappedModelKind.WL:
            return wl_pdf(theta, rate)
        case WrappedModelKind.WE:
            return we_pdf(theta, rate)


def wrapped_cdf(kind: WrappedModelKind, theta: RealLike, rate: Rate) -> RealLike:
    match kind:
        case WrappedModelKind.WRXG:
            return wrxg_cdf(theta, rate)
        case WrappedModelKind.WL:
            return wl_cdf(theta, rate)
        case WrappedModelKind.WE:
            return we_cdf(theta, rate)


def wrapped_logpdf(kind: WrappedModelKind, theta: RealLike, rate: Rate) -> RealLike:
    """
    Natural logarithm of the wrapped density, computed in log space so that it
    stays finite where the density itself underflows, e.g. for very large
    rates far from the origin.

    >>> import math
    >>> lam = Rate(1.0)
    >>> math.isclose(
    ...     wrapped_logpdf(WrappedModelKind.WRXG, 2.0, lam),
    ...     math.log(wrxg_pdf(2.0, lam)),
    ... )
    True
    """

    arr = _density_angles(theta)
    lam = rate.value
    geo = _Geometric.forRate(rate)
    log_norm = -math.log(geo.one_minus_q) - lam * arr

    match kind:
        case WrappedModelKind.WRXG:
            log_pdf = (
                2.0 * math.log(lam)
                - math.log1p(lam)
                + log_norm
                + np.log(_wrxg_bracket(arr, lam, geo))
            )
        case WrappedModelKind.WL:
            log_pdf = (
                2.0 * math.log(lam)
                - math.log1p(lam)
                + log_norm
                + np.log(_wl_bracket(arr, geo))
            )
        case WrappedModelKind.WE:
            log_pdf = math.log(lam) + log_norm

    return as_output(log_pdf, theta)


def _envelope(kind: LinearModelKind, x: float, lam: float) -> float:
    # Polynomial factor P of the linear density f(x) = P(x) e^-λx. P is
    # increasing, so P(2π(k+1)) e^-2πλk bounds f over [2πk, 2π(k+1)).
    match kind:
        case LinearModelKind.XGAMMA:
            return lam * lam / (1.0 + lam) * (1.0 + 0.5 * lam * x * x)
        case LinearModelKind.LINDLEY:
            return lam * lam / (1.0 + lam) * (1.0 + x)
        case LinearModelKind.EXPONENTIAL:
            return lam


@dataclass(frozen=True)
class SeriesTruncation:
    """
    How many lattice terms :func:`wrap_pdf_series` sums, and an upper bound on
    the density mass left out by stopping there.

    Args:
        k_max: The index of the last term summed. Terms k = 0 to k_max are
            included.

        tail_bound: An upper bound, valid for every angle, on the sum of the
            omitted terms. Infinite when no bound could be established.
    """

    k_max: int
    tail_bound: float = math.inf

    def __post_init__(self) -> None:
        if self.k_max < 0:
            msg = f"k_max must be >= 0, got {self.k_max}."
            raise DomainError(msg)

    @classmethod
    def forRate(
        cls, kind: WrappedModelKind, rate: Rate, k_max: int | None = None
    ) -> "SeriesTruncation":
        """
        Returns a truncation for the given model and rate, together with its
        tail bound. By default, k_max is chosen so that the geometric decay
        e^-2πλk reaches about e^-30 past the last term.

        >>> SeriesTruncation.forRate(WrappedModelKind.WRXG, Rate(8.0)).k_max
        6
        """

        lam = rate.value
        if k_max is None:
            k_max = math.ceil(30.0 / (TWO_PI * lam)) + 5

        base = kind.base
        first_omitted = _envelope(base, TWO_PI * (k_max + 2), lam)
        ratio = math.exp(-TWO_PI * lam) * (
            _envelope(base, TWO_PI * (k_max + 3), lam) / first_omitted
        )

        if ratio >= 1.0:
            return cls(k_max=k_max)

        tail = first_omitted * math.exp(-TWO_PI * lam * (k_max + 1)) / (1.0 - ratio)
        return cls(k_max=k_max, tail_bound=tail)


def wrap_pdf_series(
    kind: WrappedModelKind,
    theta: RealLike,
    rate: Rate,
    trunc: SeriesTruncation,
) -> RealLike:
    """
    Evaluates the wrapped density as the explicit partial lattice sum of the
    linear density, f(θ) + f(θ + 2π) + ... + f(θ + 2π k_max).

    >>> from wrapxg.linear import xg_pdf
    >>> lam = Rate(1.0)
    >>> wrap_pdf_series(WrappedModelKind.WRXG, 1.0, lam, SeriesTruncation(0)) == (
    ...     xg_pdf(1.0, lam)
    ... )
    True
    """

    arr = _density_angles(theta)
    shifts = TWO_PI * np.arange(trunc.k_max + 1, dtype=np.float64)
    terms = as_array(linear_pdf(kind.base, arr[..., np.newaxis] + shifts, rate))
    return as_output(terms.sum(axis=-1), theta)


def wrapped_sample(
    kind: WrappedModelKind, rate: Rate, n: int, seed: SeedLike
) -> CircularSample:
    """
    Draws n angles from the given wrapped model by sampling the linear model
    and reducing modulo 2π. Deterministic given an integer seed.
    """

    linear = linear_sample(kind.base, rate, n, seed)
    return CircularSample(
        angles=as_array(normalize(linear)),
        source_unit=AngleUnit.RADIANS,
    )
