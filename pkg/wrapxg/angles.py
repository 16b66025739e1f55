import enum
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from wrapxg.arrays import FloatArray, RealLike, as_array, as_output
from wrapxg.errors import DataError, DomainError

TWO_PI = 2.0 * math.pi


class AngleUnit(enum.Enum):
    DEGREES = "deg"
    RADIANS = "rad"


def normalize(theta: RealLike) -> RealLike:
    """
    Maps any finite angle, in radians, into [0, 2π).

    >>> round(normalize(-math.pi / 2), 6)
    4.712389
    >>> normalize(2 * math.pi)
    0.0
    """

    arr = as_array(theta)
    if not np.all(np.isfinite(arr)):
        msg = f"Angles must be finite, got {theta!r}."
        raise DomainError(msg)

    wrapped = np.mod(arr, TWO_PI)
    # np.mod can round tiny negative inputs up to exactly 2π.
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    return as_output(wrapped, theta)


@dataclass(frozen=True, eq=False)
class CircularSample:
    """
    An ordered, immutable collection of angles in [0, 2π), along with where they
    came from.

    Use :meth:`fromValues()` to build one from raw measurements.

    Example:

    >>> from wrapxg.angles import AngleUnit, CircularSample
    >>> sample = CircularSample.fromValues([90.0, 450.0], unit=AngleUnit.DEGREES)
    >>> sample.n
    2
    >>> [round(float(a), 6) for a in sample.angles]
    [1.570796, 1.570796]
    """

    angles: FloatArray
    source_unit: AngleUnit = AngleUnit.RADIANS
    axial_doubled: bool = False

    def __post_init__(self) -> None:
        angles = np.array(self.angles, dtype=np.float64).reshape(-1)
        if angles.size == 0:
            msg = "A circular sample needs at least one angle."
            raise DataError(msg)
        if not np.all(np.isfinite(angles)) or np.any(
            (angles < 0.0) | (angles >= TWO_PI)
        ):
            msg = "Sample angles must be normalized to [0, 2π)."
            raise DomainError(msg)

        angles.setflags(write=False)
        object.__setattr__(self, "angles", angles)

    @classmethod
    def fromValues(
        cls,
        values: Iterable[float],
        *,
        unit: AngleUnit = AngleUnit.RADIANS,
        double_axial: bool = False,
    ) -> "CircularSample":
        """
        Builds a sample from raw angle measurements.

        Args:
            values: The measurements, in the given unit. Any finite value is
                accepted and normalized.

            unit: The unit the measurements are expressed in.

            double_axial: Whether the measurements are axial, i.e. only defined
                modulo a half turn, and should be doubled to obtain circular
                data.

        Returns:
            A new CircularSample.
        """

        raw = np.fromiter(values, dtype=np.float64)
        if raw.size == 0:
            msg = "A circular sample needs at least one angle."
            raise DataError(msg)
        if not np.all(np.isfinite(raw)):
            msg = "Angle measurements must be finite."
            raise DataError(msg)

        radians = np.deg2rad(raw) if unit is AngleUnit.DEGREES else raw
        if double_axial:
            radians = 2.0 * radians

        return cls(
            angles=normalize(radians),
            source_unit=unit,
            axial_doubled=double_axial,
        )

    @property
    def n(self) -> int:
        return int(self.angles.size)

    def sorted(self) -> FloatArray:
        return np.sort(self.angles)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        flags = ", axial" if self.axial_doubled else ""
        return f"<CircularSample[{self.n}]:{self.source_unit.value}{flags}>"
