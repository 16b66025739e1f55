import csv
import enum
import hashlib
import io
import json
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from wrapxg.errors import DataError
from wrapxg.estimate import FitResult
from wrapxg.gof import GofReport
from wrapxg.moments import CharacteristicsTable, SampleSummary
from wrapxg.simulation import ComparisonReport, SimGrid
from wrapxg.wrapped import WrappedModelKind

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

Value = float | int | str | bool | None

# Strict JSON has no non-finite numbers; they are written as these strings.
_NON_FINITE = {"NaN": math.nan, "Infinity": math.inf, "-Infinity": -math.inf}


def _toJsonValue(value: Value) -> Value:
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "NaN"
        return "Infinity" if value > 0 else "-Infinity"
    return value


def _fromJsonValue(value: Value) -> Value:
    if isinstance(value, str) and value in _NON_FINITE:
        return _NON_FINITE[value]
    return value


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"


def digest(*parts: bytes) -> str:
    """
    The SHA-256 hex digest of the given byte strings, in order.

    >>> digest(b"")[:16]
    'e3b0c44298fc1c14'
    """

    h = hashlib.sha256()
    for part in parts:
        h.update(part)
    return h.hexdigest()


@dataclass(frozen=True)
class Table:
    """
    A named table: a tuple of column names and rows of plain values.
    """

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Value, ...], ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                msg = (
                    f"Table {self.name!r} has {len(self.columns)} columns,"
                    f" got a row of {len(row)}."
                )
                raise ValueError(msg)

    @classmethod
    def fromColumns(cls, name: str, columns: Mapping[str, Iterable[Value]]) -> "Table":
        names = tuple(columns)
        data = [list(values) for values in columns.values()]
        return cls(name=name, columns=names, rows=tuple(zip(*data, strict=True)))

    def column(self, name: str) -> list[Value]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _plain(value: object) -> Value:
    # numpy scalars become Python numbers.
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, enum.Enum):
        return _plain(value.value)
    if hasattr(value, "item"):
        return _plain(value.item())  # type: ignore[attr-defined]
    return float(value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class ReportDocument:
    """
    The output of one command.

    Example:

    >>> doc = ReportDocument(
    ...     command="sample-check",
    ...     inputs_digest=digest(b""),
    ...     tables=(Table("values", ("x",), ((1.5,), (2.0,))),),
    ... )
    >>> ReportDocument.fromJson(doc.toJson()) == doc
    True
    >>> print(doc.toCsv(), end="")
    # schema_version: 1
    # command: sample-check
    # inputs_digest: e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855
    # table: values
    x
    1.5
    2
    """

    command: str
    inputs_digest: str
    tables: tuple[Table, ...] = ()
    schema_version: str = SCHEMA_VERSION
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_index", {table.name: i for i, table in enumerate(self.tables)}
        )

    def table(self, name: str) -> Table:
        return self.tables[self._index[name]]

    def tableNames(self) -> tuple[str, ...]:
        return tuple(table.name for table in self.tables)

    def toJson(self) -> str:
        document = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "tables": {
                table.name: {
                    "columns": list(table.columns),
                    "rows": [[_toJsonValue(v) for v in row] for row in table.rows],
                }
                for table in self.tables
            },
        }
        return json.dumps(document, indent=2, allow_nan=False) + "\n"

    @classmethod
    def fromJson(cls, text: str) -> "ReportDocument":
        try:
            document = json.loads(text)
            tables = tuple(
                Table(
                    name=name,
                    columns=tuple(body["columns"]),
                    rows=tuple(
                        tuple(_fromJsonValue(v) for v in row) for row in body["rows"]
                    ),
                )
                for name, body in document["tables"].items()
            )
            return cls(
                command=document["command"],
                inputs_digest=document["inputs_digest"],
                tables=tables,
                schema_version=document["schema_version"],
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            msg = f"Not a WrapXG report document: {e}"
            raise DataError(msg) from e

    def toCsv(self, digits: int = 6) -> str:
        """
        Serializes the document as CSV, tables one after the other, each
        preceded by a `# table: name` line. Floats are written with the given
        number of significant digits.
        """

        def cell(value: Value) -> str:
            if value is None:
                return ""
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, float):
                return f"{value:.{digits}g}"
            return str(value)

        out = io.StringIO()
        out.write(f"# schema_version: {self.schema_version}\n")
        out.write(f"# command: {self.command}\n")
        out.write(f"# inputs_digest: {self.inputs_digest}\n")

        writer = csv.writer(out, lineterminator="\n")
        for table in self.tables:
            out.write(f"# table: {table.name}\n")
            writer.writerow(table.columns)
            writer.writerows([cell(value) for value in row] for row in table.rows)

        return out.getvalue()

    @classmethod
    def fromCsv(cls, text: str) -> "ReportDocument":
        """
        Parses the output of :meth:`toCsv()`. Numbers come back as ints where
        they were written without a fractional part, else as floats.
        """

        header: dict[str, str] = {}
        blocks: list[tuple[str, list[str]]] = []

        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                if key == "table":
                    blocks.append((value, []))
                elif not blocks:
                    header[key] = value
            elif line and blocks:
                blocks[-1][1].append(line)

        tables: list[Table] = []
        for name, lines in blocks:
            rows = list(csv.reader(lines))
            if not rows:
                msg = f"Table {name!r} has no header row."
                raise DataError(msg)
            tables.append(
                Table(
                    name=name,
                    columns=tuple(rows[0]),
                    rows=tuple(tuple(_parse_cell(c) for c in row) for row in rows[1:]),
                )
            )

        try:
            return cls(
                command=header["command"],
                inputs_digest=header["inputs_digest"],
                tables=tuple(tables),
                schema_version=header["schema_version"],
            )
        except KeyError as e:
            msg = f"Missing report header field {e}."
            raise DataError(msg) from e

    def dumps(self, output_format: OutputFormat, digits: int = 6) -> str:
        match output_format:
            case OutputFormat.JSON:
                return self.toJson()
            case OutputFormat.CSV:
                return self.toCsv(digits)


def _parse_cell(text: str) -> Value:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _optional(value: float | None) -> Value:
    return None if value is None else float(value)


def characteristics_table(table: CharacteristicsTable) -> Table:
    return Table(
        name="characteristics",
        columns=("characteristic", *(f"lambda={lam:g}" for lam in table.lambdas)),
        rows=tuple((label, *values) for label, values in table.rows()),
    )


def parameters_table(parameters: Mapping[str, object]) -> Table:
    return Table(
        name="parameters",
        columns=("name", "value"),
        rows=tuple((name, _plain(value)) for name, value in parameters.items()),
    )


def fits_table(fits: Sequence[FitResult]) -> Table:
    return Table(
        name="fits",
        columns=(
            "model",
            "lambda_hat",
            "std_error",
            "log_lik",
            "neg2_log_lik",
            "n",
            "aic",
            "caic",
            "bic",
            "hqic",
            "at_boundary",
        ),
        rows=tuple(
            (
                fit.model.value,
                fit.lambda_hat.value,
                fit.std_error,
                fit.log_lik,
                -2.0 * fit.log_lik,
                fit.n,
                _optional(fit.criteria.aic if fit.criteria else None),
                _optional(fit.criteria.caic if fit.criteria else None),
                _optional(fit.criteria.bic if fit.criteria else None),
                _optional(fit.criteria.hqic if fit.criteria else None),
                fit.at_boundary,
            )
            for fit in fits
        ),
    )


def gof_table(reports: Sequence[GofReport]) -> Table:
    return Table(
        name="gof",
        columns=("model", "n", "d", "ks_p", "w2", "a2", "u2", "a2_degenerate"),
        rows=tuple(
            (r.model.value, r.n, r.d, r.ks_p, r.w2, r.a2, r.u2, r.a2_degenerate)
            for r in reports
        ),
    )


def directions_table(
    sample: SampleSummary, models: Mapping[WrappedModelKind, tuple[float, float]]
) -> Table:
    rows: list[tuple[Value, ...]] = [
        ("sample", _optional(sample.mean_direction), sample.resultant_length)
    ]
    rows.extend(
        (kind.value, mean, length) for kind, (mean, length) in models.items()
    )
    return Table(
        name="directions",
        columns=("source", "mean_direction", "resultant_length"),
        rows=tuple(rows),
    )


# Criteria where the smallest value marks the best model.
_SMALLER_IS_BETTER = (
    "neg2_log_lik",
    "aic",
    "caic",
    "bic",
    "hqic",
    "d",
    "w2",
    "a2",
    "u2",
)


def _criterion_values(fit: FitResult, report: GofReport) -> dict[str, float | None]:
    criteria = fit.criteria
    return {
        "neg2_log_lik": -2.0 * fit.log_lik,
        "aic": criteria.aic if criteria else None,
        "caic": criteria.caic if criteria else None,
        "bic": criteria.bic if criteria else None,
        "hqic": criteria.hqic if criteria else None,
        "d": report.d,
        "w2": report.w2,
        "a2": report.a2,
        "u2": report.u2,
        "ks_p": report.ks_p,
    }


def rank_models(
    fits: Sequence[FitResult], reports: Sequence[GofReport]
) -> dict[str, WrappedModelKind]:
    """
    Picks the best model under each criterion: the smallest −2L, information
    criterion or goodness-of-fit statistic, or the largest K-S p-value.
    Criteria that are undefined for every model are left out.
    """

    if len(fits) != len(reports):
        msg = "Each fit needs exactly one goodness-of-fit report."
        raise ValueError(msg)

    values = [
        (fit.model, _criterion_values(fit, report))
        for fit, report in zip(fits, reports, strict=True)
    ]

    best: dict[str, WrappedModelKind] = {}
    for criterion in (*_SMALLER_IS_BETTER, "ks_p"):
        candidates = [
            (value, model)
            for model, table in values
            if (value := table[criterion]) is not None and not math.isnan(value)
        ]
        if not candidates:
            continue
        if criterion == "ks_p":
            best[criterion] = max(candidates, key=lambda c: c[0])[1]
        else:
            best[criterion] = min(candidates, key=lambda c: c[0])[1]

    return best


def ranking_table(best: Mapping[str, WrappedModelKind]) -> Table:
    return Table(
        name="best",
        columns=("criterion", "model"),
        rows=tuple((criterion, kind.value) for criterion, kind in best.items()),
    )


def simulation_table(grid: SimGrid) -> Table:
    return Table(
        name="simulation",
        columns=(
            "n",
            "lambda",
            "reps",
            "failures",
            "mean_estimate",
            "abs_bias",
            "mse",
            "mre",
        ),
        rows=tuple(
            (
                cell.n,
                cell.lambda_true.value,
                cell.reps,
                cell.failures,
                cell.mean_estimate,
                cell.abs_bias,
                cell.mse,
                cell.mre,
            )
            for cell in grid.cells
        ),
    )


def comparison_table(report: ComparisonReport) -> Table:
    return Table(
        name="comparison",
        columns=(
            "n",
            "lambda",
            "bias_deviation",
            "mse_deviation",
            "mean_deviation",
            "passed",
            "reference_identity_ok",
        ),
        rows=tuple(
            (
                c.n,
                c.lam,
                c.bias_deviation,
                c.mse_deviation,
                c.mean_deviation,
                c.passed,
                c.reference_identity_ok,
            )
            for c in report.cells
        ),
    )
