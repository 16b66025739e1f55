from collections.abc import Mapping, Sequence

import numpy as np

from wrapxg.angles import TWO_PI, CircularSample
from wrapxg.arrays import as_array
from wrapxg.errors import DomainError
from wrapxg.linear import Rate
from wrapxg.report import Table
from wrapxg.wrapped import WrappedModelKind, wrapped_cdf, wrapped_pdf


def _check_count(name: str, count: int, minimum: int = 1) -> None:
    if count < minimum:
        msg = f"{name} must be >= {minimum}, got {count}."
        raise DomainError(msg)


def density_grid(points: int) -> np.ndarray:
    """
    `points` evenly spaced angles covering [0, 2π), starting at 0.
    """

    _check_count("The number of curve points", points, 2)
    return TWO_PI * np.arange(points, dtype=np.float64) / points


def histogram(sample: CircularSample, bins: int) -> Table:
    """
    Linear histogram of the sample over [0, 2π), as bin edges and densities.
    Densities times bin widths sum to 1.
    """

    _check_count("The number of bins", bins)
    density, edges = np.histogram(
        sample.angles, bins=bins, range=(0.0, TWO_PI), density=True
    )
    return Table.fromColumns(
        "histogram",
        {
            "left": edges[:-1].tolist(),
            "right": edges[1:].tolist(),
            "density": density.tolist(),
        },
    )


def rose(sample: CircularSample, sectors: int) -> Table:
    """
    Rose diagram sector counts. The counts sum to the sample size.
    """

    _check_count("The number of sectors", sectors)
    counts, edges = np.histogram(sample.angles, bins=sectors, range=(0.0, TWO_PI))
    return Table.fromColumns(
        "rose",
        {
            "start": edges[:-1].tolist(),
            "end": edges[1:].tolist(),
            "count": [int(c) for c in counts],
        },
    )


def pdf_curves(
    models: Mapping[str, tuple[WrappedModelKind, Rate]], points: int
) -> Table:
    """
    Density curves of the given models, one column each, over a common grid of
    angles.

    Args:
        models: The curves to draw, by column name.

        points: The number of grid angles.
    """

    theta = density_grid(points)
    columns: dict[str, list[float]] = {"theta": theta.tolist()}
    for name, (kind, rate) in models.items():
        columns[name] = as_array(wrapped_pdf(kind, theta, rate)).tolist()
    return Table.fromColumns("pdf", columns)


def cdf_curves(
    models: Mapping[str, tuple[WrappedModelKind, Rate]], points: int
) -> Table:
    """
    Distribution function curves over [0, 2π], both ends included.
    """

    _check_count("The number of curve points", points, 2)
    theta = np.linspace(0.0, TWO_PI, points)
    columns: dict[str, list[float]] = {"theta": theta.tolist()}
    for name, (kind, rate) in models.items():
        columns[name] = as_array(wrapped_cdf(kind, theta, rate)).tolist()
    return Table.fromColumns("cdf", columns)


def ecdf_overlay(
    sample: CircularSample, models: Mapping[str, tuple[WrappedModelKind, Rate]]
) -> Table:
    """
    Steps of the sample's empirical CDF, at each sorted angle, with each
    model's CDF at the same angles.
    """

    theta = sample.sorted()
    columns: dict[str, list[float]] = {
        "theta": theta.tolist(),
        "ecdf": (np.arange(1, sample.n + 1) / sample.n).tolist(),
    }
    for name, (kind, rate) in models.items():
        columns[name] = as_array(wrapped_cdf(kind, theta, rate)).tolist()
    return Table.fromColumns("ecdf", columns)


def circular_curves(rates: Sequence[Rate], points: int) -> Table:
    """
    The wrapped xgamma density drawn around the unit circle: for each rate,
    the point at angle θ and radius 1 + g(θ).
    """

    theta = density_grid(points)
    columns: dict[str, list[float]] = {"theta": theta.tolist()}
    for rate in rates:
        radius = 1.0 + as_array(wrapped_pdf(WrappedModelKind.WRXG, theta, rate))
        columns[f"x_lambda={rate.value:g}"] = (radius * np.cos(theta)).tolist()
        columns[f"y_lambda={rate.value:g}"] = (radius * np.sin(theta)).tolist()
    return Table.fromColumns("circle", columns)
