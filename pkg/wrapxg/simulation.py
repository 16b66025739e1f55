"""
Monte-Carlo study of the wrapped xgamma rate estimator.

For each cell of a (sample size, true rate) grid, samples are drawn
repeatedly from the wrapped xgamma model, the rate is refitted by maximum
likelihood, and the estimates are aggregated into mean, absolute bias, mean
squared error and mean relative error.

Every replicate draws from its own generator, keyed on the master seed, the
cell's position in the grid and the replicate index. Results therefore do not
depend on how replicates are spread over worker processes.
"""

import csv
import logging
import math
from collections.abc import Iterable, Mapping
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from wrapxg.errors import (
    ConvergenceError,
    DataError,
    DomainError,
    ShapeMismatchError,
    SimulationError,
)
from wrapxg.estimate import SearchConfig, fit_mle
from wrapxg.linear import Rate
from wrapxg.moments import TABLE_LAMBDAS
from wrapxg.wrapped import WrappedModelKind, wrapped_sample

logger = logging.getLogger(__name__)

TABLE_SIZES: tuple[int, ...] = (30, 80, 100, 200, 350)

BUNDLED_REFERENCE = "reference_simulation.csv"

# Chunks handed out per worker; more chunks than workers balances the load.
_CHUNKS_PER_WORKER = 4


@dataclass(frozen=True)
class SimulationConfig:
    """
    A simulation grid and how to run it.

    Args:
        lambdas: The true rates, in column order.

        sizes: The sample sizes, in row order.

        reps: The number of replicates per cell.

        master_seed: The seed every replicate generator is derived from. Any
            integer in [0, 2**64).

        workers: The number of worker processes. 1 runs in-process.

        max_failure_fraction: The largest fraction of replicates per cell that
            may fail to produce an estimate.

        search: How each replicate's rate is fitted.
    """

    lambdas: tuple[float, ...] = TABLE_LAMBDAS
    sizes: tuple[int, ...] = TABLE_SIZES
    reps: int = 10000
    master_seed: int = 20190101
    workers: int = 1
    max_failure_fraction: float = 0.01
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self) -> None:
        if not self.lambdas or not self.sizes:
            msg = "A simulation grid needs at least one rate and one sample size."
            raise DomainError(msg)
        for lam in self.lambdas:
            Rate(lam)
        if min(self.sizes) < 2:  # noqa: PLR2004
            msg = f"Sample sizes must be >= 2, got {self.sizes}."
            raise DomainError(msg)
        if self.reps < 1:
            msg = f"The replicate count must be >= 1, got {self.reps}."
            raise DomainError(msg)
        if not 0 <= self.master_seed < 2**64:
            msg = f"The master seed must lie in [0, 2**64), got {self.master_seed}."
            raise DomainError(msg)
        if self.workers < 1:
            msg = f"The worker count must be >= 1, got {self.workers}."
            raise DomainError(msg)


@dataclass(frozen=True)
class SimCell:
    """
    Aggregated estimates for one (true rate, sample size) cell.

    `failures` counts the replicates whose fit did not converge; they are
    excluded from every aggregate, and `reps` counts only the others.
    """

    lambda_true: Rate
    n: int
    reps: int
    mean_estimate: float
    abs_bias: float
    mse: float
    mre: float
    master_seed: int
    failures: int = 0


@dataclass(frozen=True)
class SimGrid:
    """
    The cells of a simulation, ordered by sample size first, then by rate.
    """

    cells: tuple[SimCell, ...]
    reps: int
    master_seed: int

    def cell(self, n: int, lam: float) -> SimCell:
        for cell in self.cells:
            if cell.n == n and cell.lambda_true.value == lam:
                return cell
        msg = f"No cell for n={n}, λ={lam}."
        raise KeyError(msg)

    def sizes(self) -> tuple[int, ...]:
        return tuple(dict.fromkeys(cell.n for cell in self.cells))

    def lambdas(self) -> tuple[float, ...]:
        return tuple(dict.fromkeys(cell.lambda_true.value for cell in self.cells))

    def asReference(self) -> dict[tuple[int, float], "ReferenceCell"]:
        return {
            (cell.n, cell.lambda_true.value): ReferenceCell(
                n=cell.n,
                lam=cell.lambda_true.value,
                mean_estimate=cell.mean_estimate,
                abs_bias=cell.abs_bias,
                mse=cell.mse,
                mre=cell.mre,
            )
            for cell in self.cells
        }


def replicate_generator(
    master_seed: int, cell_index: int, rep: int
) -> np.random.Generator:
    """
    The random generator of one replicate. Counter-based, so that any
    replicate can be regenerated independently of all others.
    """

    sequence = np.random.SeedSequence(master_seed, spawn_key=(cell_index, rep))
    return np.random.Generator(np.random.Philox(sequence))


def _replicate_estimates(
    lam: float,
    n: int,
    master_seed: int,
    cell_index: int,
    reps: range,
    search: SearchConfig,
) -> list[float | None]:
    # Module-level so that worker processes can unpickle it.

    rate = Rate(lam)
    estimates: list[float | None] = []

    for rep in reps:
        rng = replicate_generator(master_seed, cell_index, rep)
        sample = wrapped_sample(WrappedModelKind.WRXG, rate, n, rng)
        try:
            fit = fit_mle(WrappedModelKind.WRXG, sample, search)
        except ConvergenceError as e:
            logger.debug("Replicate %d of cell %d failed: %s", rep, cell_index, e)
            estimates.append(None)
        else:
            estimates.append(fit.lambda_hat.value)

    return estimates


def _chunks(reps: int, workers: int) -> list[range]:
    count = min(reps, workers * _CHUNKS_PER_WORKER)
    bounds = np.linspace(0, reps, count + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:], strict=True)]


def _estimates(
    lam: float,
    n: int,
    reps: int,
    master_seed: int,
    cell_index: int,
    search: SearchConfig,
    executor: Executor | None,
    workers: int,
) -> list[float | None]:
    if executor is None:
        return _replicate_estimates(
            lam, n, master_seed, cell_index, range(reps), search
        )

    chunks = _chunks(reps, workers)
    futures = [
        executor.submit(
            _replicate_estimates, lam, n, master_seed, cell_index, chunk, search
        )
        for chunk in chunks
    ]

    # Collected in submission order, so the estimates stay in replicate order.
    estimates: list[float | None] = []
    for future in futures:
        estimates.extend(future.result())
    return estimates


def _aggregate(
    lam: float,
    n: int,
    master_seed: int,
    estimates: list[float | None],
    max_failure_fraction: float,
) -> SimCell:
    kept = np.array([e for e in estimates if e is not None], dtype=np.float64)
    failures = len(estimates) - kept.size

    if failures > max_failure_fraction * len(estimates) or kept.size == 0:
        msg = (
            f"{failures} of {len(estimates)} replicates failed for n={n}, λ={lam};"
            f" at most {max_failure_fraction:.2%} may fail."
        )
        raise SimulationError(msg)

    if failures:
        logger.warning(
            "Excluded %d failed replicates for n=%d, λ=%g.", failures, n, lam
        )

    errors = kept - lam
    count = kept.size
    abs_bias = math.fsum(np.abs(errors)) / count

    return SimCell(
        lambda_true=Rate(lam),
        n=n,
        reps=count,
        mean_estimate=math.fsum(kept) / count,
        abs_bias=abs_bias,
        mse=math.fsum(errors * errors) / count,
        mre=abs_bias / lam,
        master_seed=master_seed,
        failures=failures,
    )


def simulate_cell(  # noqa: PLR0913
    lambda_true: Rate | float,
    n: int,
    reps: int,
    master_seed: int,
    *,
    cell_index: int = 0,
    workers: int = 1,
    search: SearchConfig | None = None,
    max_failure_fraction: float = 0.01,
) -> SimCell:
    """
    Runs the replicates of one simulation cell and aggregates them.

    Args:
        lambda_true: The true rate.

        n: The sample size of each replicate.

        reps: The number of replicates.

        master_seed: The seed replicate generators are derived from.

        cell_index: The cell's position in its grid, part of every replicate's
            generator key. :func:`simulate_grid` sets it; a lone cell keeps
            the default.

        workers: The number of worker processes.

    Returns:
        A SimCell.

    Raises:
        SimulationError: when more than `max_failure_fraction` of the
            replicates fail.
    """

    config = SimulationConfig(
        lambdas=(float(Rate.coerce(lambda_true)),),
        sizes=(n,),
        reps=reps,
        master_seed=master_seed,
        workers=workers,
        max_failure_fraction=max_failure_fraction,
        search=search if search is not None else SearchConfig(),
    )
    lam = config.lambdas[0]

    if workers == 1:
        estimates = _estimates(
            lam, n, reps, master_seed, cell_index, config.search, None, 1
        )
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            estimates = _estimates(
                lam, n, reps, master_seed, cell_index, config.search, executor, workers
            )

    return _aggregate(lam, n, master_seed, estimates, max_failure_fraction)


def simulate_grid(config: SimulationConfig) -> SimGrid:
    """
    Runs every cell of the configured grid, sample sizes in the outer loop.
    The result is bit-identical for a given config whatever its worker count.
    """

    executor = (
        ProcessPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    )

    cells: list[SimCell] = []
    try:
        for n in config.sizes:
            for lam in config.lambdas:
                cell_index = len(cells)
                estimates = _estimates(
                    lam,
                    n,
                    config.reps,
                    config.master_seed,
                    cell_index,
                    config.search,
                    executor,
                    config.workers,
                )
                cell = _aggregate(
                    lam,
                    n,
                    config.master_seed,
                    estimates,
                    config.max_failure_fraction,
                )
                logger.info(
                    "Cell %d/%d (n=%d, λ=%g): mean %.5f, |bias| %.5f, mse %.5f.",
                    cell_index + 1,
                    len(config.sizes) * len(config.lambdas),
                    n,
                    lam,
                    cell.mean_estimate,
                    cell.abs_bias,
                    cell.mse,
                )
                cells.append(cell)
    finally:
        if executor is not None:
            executor.shutdown()

    return SimGrid(cells=tuple(cells), reps=config.reps, master_seed=config.master_seed)


@dataclass(frozen=True)
class ReferenceCell:
    n: int
    lam: float
    mean_estimate: float
    abs_bias: float
    mse: float
    mre: float

    def identityHolds(self) -> bool:
        """
        Whether the published mre agrees with abs_bias / λ, up to the rounding
        of printed values.
        """

        return abs(self.mre * self.lam - self.abs_bias) <= 1e-4 + 1e-3 * self.abs_bias


Reference = Mapping[tuple[int, float], ReferenceCell]

_REFERENCE_COLUMNS = ("n", "lambda", "mean_estimate", "abs_bias", "mse", "mre")


def _parse_reference(lines: Iterable[str], path: Path | None) -> dict[
    tuple[int, float], ReferenceCell
]:
    numbered = [
        (number, line)
        for number, line in enumerate(lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        msg = "The reference table is empty."
        raise DataError(msg, path=path)

    rows = csv.reader(line for _, line in numbered)
    header = [column.strip() for column in next(rows)]
    if tuple(header) != _REFERENCE_COLUMNS:
        msg = f"Expected reference columns {','.join(_REFERENCE_COLUMNS)}, got {header}."
        raise DataError(msg, path=path, line_number=numbered[0][0])

    reference: dict[tuple[int, float], ReferenceCell] = {}
    for (line_number, _), row in zip(numbered[1:], rows, strict=True):
        try:
            n = int(row[0])
            lam, mean, bias, mse, mre = (float(value) for value in row[1:6])
        except (ValueError, IndexError):
            msg = f"Malformed reference row: {','.join(row)}"
            raise DataError(msg, path=path, line_number=line_number) from None

        reference[(n, lam)] = ReferenceCell(
            n=n, lam=lam, mean_estimate=mean, abs_bias=bias, mse=mse, mre=mre
        )

    return reference


def load_reference(path: Path | None = None) -> dict[tuple[int, float], ReferenceCell]:
    """
    Loads a reference simulation table from CSV, with columns n, lambda,
    mean_estimate, abs_bias, mse and mre. Lines starting with '#' are comments.

    Args:
        path: The CSV file. If None, the published table shipped with WrapXG
            is loaded.

    Example:

    >>> reference = load_reference()
    >>> len(reference)
    30
    >>> reference[(80, 4.0)].identityHolds()
    False
    """

    if path is None:
        data = resources.files("wrapxg").joinpath("data")
        text = data.joinpath(BUNDLED_REFERENCE).read_text(encoding="utf-8")
        return _parse_reference(text.splitlines(), None)

    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read reference table: {e.strerror}"
        raise DataError(msg, path=path) from e

    return _parse_reference(text.splitlines(), path)


@dataclass(frozen=True)
class TolerancePolicy:
    """
    How far simulated values may stray from reference values.

    Args:
        bias_rtol: Relative tolerance on the absolute bias.

        mse_rtol: Relative tolerance on the mean squared error.

        mean_ltol: Tolerance on the mean estimate, as a fraction of the true
            rate.
    """

    bias_rtol: float = 0.15
    mse_rtol: float = 0.15
    mean_ltol: float = 0.01

    @classmethod
    def standard(cls) -> "TolerancePolicy":
        return cls()

    @classmethod
    def quick(cls) -> "TolerancePolicy":
        return cls(bias_rtol=0.40, mse_rtol=0.40, mean_ltol=0.04)


@dataclass(frozen=True)
class CellComparison:
    n: int
    lam: float
    bias_deviation: float
    mse_deviation: float
    mean_deviation: float
    passed: bool
    reference_identity_ok: bool


@dataclass(frozen=True)
class ComparisonReport:
    cells: tuple[CellComparison, ...]
    policy: TolerancePolicy

    @property
    def passed_fraction(self) -> float:
        return sum(cell.passed for cell in self.cells) / len(self.cells)

    def failures(self) -> tuple[CellComparison, ...]:
        return tuple(cell for cell in self.cells if not cell.passed)

    def identityViolations(self) -> tuple[CellComparison, ...]:
        return tuple(cell for cell in self.cells if not cell.reference_identity_ok)


def _relative(value: float, reference: float) -> float:
    if value == reference:
        return 0.0
    if reference == 0.0:
        return math.inf
    return abs(value - reference) / abs(reference)


def compare_to_reference(
    grid: SimGrid,
    reference: Reference,
    policy: TolerancePolicy | None = None,
) -> ComparisonReport:
    """
    Compares every cell of a simulated grid to the reference cell with the same
    sample size and rate.

    Reference cells whose printed mre disagrees with abs_bias / λ are flagged
    in `reference_identity_ok` and reported by
    :meth:`ComparisonReport.identityViolations()`.

    Raises:
        ShapeMismatchError: if a grid cell has no reference counterpart.

    Example:

    >>> reference = load_reference()
    >>> grid = SimGrid(
    ...     cells=(SimCell(Rate(1.0), 350, 10000, 1.0016, 0.0377, 0.0023, 0.0377, 1),),
    ...     reps=10000,
    ...     master_seed=1,
    ... )
    >>> compare_to_reference(grid, reference).passed_fraction
    1.0
    """

    policy = policy if policy is not None else TolerancePolicy.standard()

    missing = [
        (cell.n, cell.lambda_true.value)
        for cell in grid.cells
        if (cell.n, cell.lambda_true.value) not in reference
    ]
    if missing:
        msg = f"The reference table has no cells for (n, λ) = {missing}."
        raise ShapeMismatchError(msg)

    comparisons: list[CellComparison] = []
    for cell in grid.cells:
        lam = cell.lambda_true.value
        ref = reference[(cell.n, lam)]

        bias_deviation = _relative(cell.abs_bias, ref.abs_bias)
        mse_deviation = _relative(cell.mse, ref.mse)
        mean_deviation = abs(cell.mean_estimate - ref.mean_estimate) / lam

        comparisons.append(
            CellComparison(
                n=cell.n,
                lam=lam,
                bias_deviation=bias_deviation,
                mse_deviation=mse_deviation,
                mean_deviation=mean_deviation,
                passed=bias_deviation <= policy.bias_rtol
                and mse_deviation <= policy.mse_rtol
                and mean_deviation <= policy.mean_ltol,
                reference_identity_ok=ref.identityHolds(),
            )
        )

    return ComparisonReport(cells=tuple(comparisons), policy=policy)
