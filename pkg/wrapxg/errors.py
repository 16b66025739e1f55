from pathlib import Path


class WrapXGError(Exception):
    """
    Base class for every error raised by WrapXG.
    """


class DomainError(WrapXGError, ValueError):
    """
    Raised when a parameter, an angle or a linear variate lies outside the
    domain of the function it was passed to.
    """


class DataError(WrapXGError):
    """
    Raised when angle data cannot be ingested or used.

    Args:
        message: A human readable description of the problem.

        path: The file the data came from, if any.

        line_number: The 1-based line number the problem was found on, if
            known.
    """

    path: Path | None
    line_number: int | None

    def __init__(
        self,
        message: str,
        *,
        path: Path | None = None,
        line_number: int | None = None,
    ) -> None:
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        elif line_number is not None:
            location = f"line {line_number}: "

        super().__init__(location + message)

        self.path = path
        self.line_number = line_number


class DegenerateStatisticError(DataError):
    """
    Raised when a goodness-of-fit statistic is undefined for the given sample,
    e.g. when the model CDF is exactly 0 or 1 at a sample point.
    """


class ConvergenceError(WrapXGError):
    """
    Raised when a numerical procedure fails to converge.
    """


class SimulationError(ConvergenceError):
    """
    Raised when too many Monte-Carlo replicates fail to produce an estimate.
    """


class ShapeMismatchError(WrapXGError, ValueError):
    """
    Raised when two simulation grids that should be compared cell by cell do
    not cover the same (n, lambda) cells.
    """
