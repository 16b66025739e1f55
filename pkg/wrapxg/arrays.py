from typing import Any

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
RealLike = float | npt.ArrayLike
SeedLike = int | np.random.Generator | np.random.SeedSequence | None


def as_array(values: RealLike) -> FloatArray:
    """
    Internal. Returns the given scalar or array-like as a float64 array, without
    copying when it already is one.
    """

    return np.asarray(values, dtype=np.float64)


def as_output(values: Any, like: RealLike) -> Any:  # noqa: ANN401
    """
    Internal. Returns a Python float when `like` is a scalar, else the given
    array unchanged.
    """

    if np.ndim(like) == 0:
        return float(values)
    return values
