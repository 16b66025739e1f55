"""
The `wrapxg` command line.

Exit statuses: 0 on success, 1 on a usage or configuration error, 2 on a data
error, 3 on a numerical failure.
"""

import argparse
import enum
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import IO, Any, NoReturn, TypeVar

from wrapxg import __version__
from wrapxg.angles import AngleUnit, CircularSample
from wrapxg.config import Key, WrapXGSettings
from wrapxg.errors import (
    ConvergenceError,
    DataError,
    DomainError,
    ShapeMismatchError,
    WrapXGError,
)
from wrapxg.estimate import FitResult, fit_mle, model_mean_direction, model_summary
from wrapxg.gof import GofReport, gof_report
from wrapxg.ingest import (
    atomic_write,
    ingest_bytes,
    read_angle_file,
    validate_dataset,
    write_angles,
)
from wrapxg.linear import Rate
from wrapxg.moments import TABLE_LAMBDAS, characterize_table, sample_circular_summary
from wrapxg.plotdata import (
    cdf_curves,
    circular_curves,
    ecdf_overlay,
    histogram,
    pdf_curves,
    rose,
)
from wrapxg.report import (
    OutputFormat,
    ReportDocument,
    Table,
    characteristics_table,
    comparison_table,
    digest,
    directions_table,
    fits_table,
    gof_table,
    parameters_table,
    rank_models,
    ranking_table,
    simulation_table,
)
from wrapxg.serializers import EnumSerializer, TupleSerializer
from wrapxg.simulation import (
    TolerancePolicy,
    compare_to_reference,
    load_reference,
    simulate_grid,
)
from wrapxg.wrapped import WrappedModelKind, wrapped_sample

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

_ALL_MODELS = "all"

_T = TypeVar("_T")
_EnumT = TypeVar("_EnumT", bound=enum.Enum)


class UsageError(Exception):
    """
    Raised for invalid command lines and configuration values.
    """


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _enum_type(type_: type[_EnumT]) -> Callable[[str], _EnumT]:
    serializer = EnumSerializer(type_)

    def parse(string: str) -> _EnumT:
        if (value := serializer.fromStr(string)) is None:
            choices = ", ".join(str(member.value) for member in type_)
            msg = f"invalid choice: {string!r} (choose from {choices})"
            raise argparse.ArgumentTypeError(msg)
        return value

    return parse


def _list_type(type_: type[int] | type[float]) -> Callable[[str], tuple[Any, ...]]:
    serializer = TupleSerializer(type_)

    def parse(string: str) -> tuple[Any, ...]:
        if (value := serializer.fromStr(string)) is None:
            msg = f"invalid comma-separated {type_.__name__} list: {string!r}"
            raise argparse.ArgumentTypeError(msg)
        return value

    return parse


def _seed(string: str) -> int:
    try:
        seed = int(string)
    except ValueError:
        seed = -1
    if not 0 <= seed < 2**64:
        msg = f"seeds are integers in [0, 2**64), got {string!r}"
        raise argparse.ArgumentTypeError(msg)
    return seed


def _models(choice: str) -> list[WrappedModelKind]:
    if choice == _ALL_MODELS:
        return list(WrappedModelKind)
    return [WrappedModelKind(choice)]


def _set(key: Key[_T], value: _T | None, flag: str) -> None:
    if value is not None and not key.set(value):
        msg = f"invalid value for {flag}: {value!r}"
        raise UsageError(msg)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        type=_enum_type(OutputFormat),
        help="report format, json or csv (default: from configuration, json)",
    )
    parser.add_argument(
        "--out", type=Path, help="write the report to this file instead of stdout"
    )


def _add_data_flags(parser: argparse.ArgumentParser, *, required: bool) -> None:
    parser.add_argument(
        "--data",
        type=Path,
        required=required,
        help="angle file: one angle per line, '#' comments, optional header",
    )
    parser.add_argument(
        "--unit",
        type=_enum_type(AngleUnit),
        help="unit of the angles in the data file, deg or rad (default: deg)",
    )
    parser.add_argument(
        "--double-axial",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="double every angle, turning axial data into circular data",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wrapxg",
        description="Wrapped xgamma distribution: characteristics, fitting and"
        " simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more; repeat for debug output",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    parser.add_argument(
        "--config", type=Path, help="load settings from this file before the flags"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    characterize = commands.add_parser(
        "characterize", help="tabulate the characteristics of the distribution"
    )
    characterize.add_argument(
        "--lambda",
        dest="lambdas",
        type=_list_type(float),
        help="comma-separated rates (default: 0.1,0.7,1,2.5,4,8)",
    )
    characterize.add_argument(
        "--p-max", type=int, default=2, help="highest moment order (default: 2)"
    )
    _add_output_flags(characterize)

    fit = commands.add_parser("fit", help="fit wrapped models to an angle file")
    _add_data_flags(fit, required=True)
    fit.add_argument(
        "--model",
        choices=[*(kind.value for kind in WrappedModelKind), _ALL_MODELS],
        default=_ALL_MODELS,
        help="model to fit (default: all)",
    )
    fit.add_argument(
        "--expect-n",
        type=int,
        help="warn if the data file does not hold this many angles",
    )
    _add_output_flags(fit)

    sample = commands.add_parser("sample", help="draw angles from a wrapped model")
    sample.add_argument(
        "--model",
        choices=[kind.value for kind in WrappedModelKind],
        default=WrappedModelKind.WRXG.value,
        help="model to sample (default: wrxg)",
    )
    sample.add_argument("--lambda", dest="lam", type=float, required=True)
    sample.add_argument("--n", type=int, required=True, help="number of angles")
    sample.add_argument("--seed", type=_seed, help="64-bit unsigned seed")
    sample.add_argument("--out", type=Path, help="output file (default: stdout)")

    simulate = commands.add_parser(
        "simulate", help="run the Monte-Carlo study of the rate estimator"
    )
    simulate.add_argument("--lambdas", type=_list_type(float), help="true rates")
    simulate.add_argument("--sizes", type=_list_type(int), help="sample sizes")
    simulate.add_argument("--reps", type=int, help="replicates per cell")
    simulate.add_argument("--seed", type=_seed, help="64-bit unsigned master seed")
    simulate.add_argument(
        "--quick",
        action="store_true",
        help="use the quick replicate count and widened tolerances",
    )
    simulate.add_argument("--workers", type=int, help="worker processes")
    simulate.add_argument(
        "--reference",
        help="compare with a reference CSV; 'bundled' uses the published table",
    )
    _add_output_flags(simulate)

    plotdata = commands.add_parser(
        "plotdata", help="emit histogram, rose, curve and ECDF data for plotting"
    )
    _add_data_flags(plotdata, required=False)
    plotdata.add_argument(
        "--model",
        choices=[*(kind.value for kind in WrappedModelKind), _ALL_MODELS],
        default=_ALL_MODELS,
        help="models fitted and drawn when --data is given (default: all)",
    )
    plotdata.add_argument(
        "--lambda",
        dest="lambdas",
        type=_list_type(float),
        help="rates of the theoretical curves drawn without --data",
    )
    plotdata.add_argument("--bins", type=int, help="linear histogram bins")
    plotdata.add_argument("--sectors", type=int, help="rose diagram sectors")
    plotdata.add_argument("--curve-points", type=int, help="points per curve")
    _add_output_flags(plotdata)

    commands.add_parser("config", help="print the effective configuration")

    return parser


def _load_settings(args: argparse.Namespace) -> WrapXGSettings:
    defaults = WrapXGSettings()
    layer = defaults

    if args.config is not None:
        layer = defaults.newLayer()
        try:
            with args.config.open(encoding="UTF-8") as f:
                layer.load(f)
        except OSError as e:
            msg = f"cannot read configuration file {args.config}: {e.strerror}"
            raise UsageError(msg) from e
        logger.debug("Loaded configuration from '%s'.", args.config)

    flags = layer.newLayer()

    if (value := getattr(args, "format", None)) is not None:
        _set(flags.output.format, value, "--format")
    if (value := getattr(args, "unit", None)) is not None:
        _set(flags.data.unit, value, "--unit")
    if (value := getattr(args, "double_axial", None)) is not None:
        _set(flags.data.double_axial, value, "--double-axial")

    match args.command:
        case "simulate":
            _set(flags.simulation.lambdas, args.lambdas, "--lambdas")
            _set(flags.simulation.sizes, args.sizes, "--sizes")
            _set(flags.simulation.seed, args.seed, "--seed")
            _set(flags.simulation.workers, args.workers, "--workers")
            if args.reps is not None:
                _set(flags.simulation.reps, args.reps, "--reps")
                _set(flags.simulation.quick_reps, args.reps, "--reps")
        case "plotdata":
            _set(flags.plot.bins, args.bins, "--bins")
            _set(flags.plot.sectors, args.sectors, "--sectors")
            _set(flags.plot.curve_points, args.curve_points, "--curve-points")

    return flags


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING
    if args.quiet:
        level = logging.ERROR
    elif args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG

    logging.basicConfig(
        format="%(levelname)s: %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def _write(path: Path | None, text: str, stdout: IO[str]) -> None:
    if path is None:
        stdout.write(text)
        return

    try:
        atomic_write(path, lambda f: f.write(text))
    except OSError as e:
        msg = f"Cannot write output: {e.strerror}"
        raise DataError(msg, path=path) from e
    logger.info("Wrote report to '%s'.", path)


def _emit(
    doc: ReportDocument,
    args: argparse.Namespace,
    settings: WrapXGSettings,
    stdout: IO[str],
) -> None:
    text = doc.dumps(settings.output.format.get(), settings.output.csv_digits.get())
    _write(args.out, text, stdout)


def _parameters_digest(parameters: dict[str, Any]) -> str:
    canonical = json.dumps(parameters, sort_keys=True, default=str)
    return digest(canonical.encode("utf-8"))


def _ingest(args: argparse.Namespace, settings: WrapXGSettings) -> tuple[CircularSample, str]:
    content = read_angle_file(args.data)
    sample = ingest_bytes(
        content,
        settings.data.unit.get(),
        double_axial=settings.data.double_axial.get(),
        path=args.data,
    )
    return sample, digest(content)


def _fit_all(
    kinds: Sequence[WrappedModelKind],
    sample: CircularSample,
    settings: WrapXGSettings,
) -> tuple[list[FitResult], list[GofReport]]:
    search = settings.searchConfig()
    fits = [fit_mle(kind, sample, search) for kind in kinds]
    reports = [gof_report(fit.model, sample, fit) for fit in fits]
    return fits, reports


def cmd_characterize(
    args: argparse.Namespace, settings: WrapXGSettings, stdout: IO[str]
) -> None:
    lambdas = args.lambdas if args.lambdas is not None else TABLE_LAMBDAS
    table = characterize_table(lambdas, p_max=args.p_max)

    parameters = {"lambdas": ",".join(f"{lam:g}" for lam in table.lambdas), "p_max": table.p_max}
    doc = ReportDocument(
        command="characterize",
        inputs_digest=_parameters_digest(parameters),
        tables=(parameters_table(parameters), characteristics_table(table)),
    )
    _emit(doc, args, settings, stdout)


def cmd_fit(args: argparse.Namespace, settings: WrapXGSettings, stdout: IO[str]) -> None:
    sample, inputs_digest = _ingest(args, settings)
    if args.expect_n is not None:
        validate_dataset(sample, args.expect_n)

    fits, reports = _fit_all(_models(args.model), sample, settings)

    directions = {
        fit.model: (
            model_mean_direction(fit)
            if fit.model is WrappedModelKind.WRXG
            else model_summary(fit)
        )
        for fit in fits
    }
    best = rank_models(fits, reports)
    for criterion, kind in best.items():
        logger.info("Best model by %s: %s.", criterion, kind.value)

    parameters = {
        "data": str(args.data),
        "unit": settings.data.unit.get(),
        "double_axial": settings.data.double_axial.get(),
        "n": sample.n,
    }
    doc = ReportDocument(
        command="fit",
        inputs_digest=inputs_digest,
        tables=(
            parameters_table(parameters),
            fits_table(fits),
            gof_table(reports),
            directions_table(sample_circular_summary(sample), directions),
            ranking_table(best),
        ),
    )
    _emit(doc, args, settings, stdout)


def cmd_sample(args: argparse.Namespace, _: WrapXGSettings, stdout: IO[str]) -> None:
    if args.n < 1:
        msg = f"invalid value for --n: {args.n}"
        raise UsageError(msg)

    sample = wrapped_sample(WrappedModelKind(args.model), Rate(args.lam), args.n, args.seed)

    if args.out is None:
        for angle in sample.angles:
            stdout.write(f"{float(angle)!r}\n")
        return

    try:
        write_angles(args.out, sample)
    except OSError as e:
        msg = f"Cannot write angles: {e.strerror}"
        raise DataError(msg, path=args.out) from e


def cmd_simulate(
    args: argparse.Namespace, settings: WrapXGSettings, stdout: IO[str]
) -> None:
    config = settings.simulationConfig(quick=args.quick)
    grid = simulate_grid(config)

    tables: list[Table] = []
    parameters: dict[str, Any] = {
        "lambdas": ",".join(f"{lam:g}" for lam in config.lambdas),
        "sizes": ",".join(str(n) for n in config.sizes),
        "reps": config.reps,
        "seed": str(config.master_seed),
        "quick": args.quick,
    }

    comparison = None
    if args.reference is not None:
        reference_path = None if args.reference == "bundled" else Path(args.reference)
        reference = load_reference(reference_path)
        policy = TolerancePolicy.quick() if args.quick else TolerancePolicy.standard()
        comparison = compare_to_reference(grid, reference, policy)
        parameters["reference"] = args.reference

        for cell in comparison.identityViolations():
            logger.warning(
                "Reference cell n=%d, λ=%g: printed mre disagrees with |bias| / λ.",
                cell.n,
                cell.lam,
            )
        logger.info(
            "%.0f%% of cells within tolerance of the reference.",
            100.0 * comparison.passed_fraction,
        )

    tables.append(parameters_table(parameters))
    tables.append(simulation_table(grid))
    if comparison is not None:
        tables.append(comparison_table(comparison))

    doc = ReportDocument(
        command="simulate",
        inputs_digest=_parameters_digest(parameters),
        tables=tuple(tables),
    )
    _emit(doc, args, settings, stdout)


def cmd_plotdata(
    args: argparse.Namespace, settings: WrapXGSettings, stdout: IO[str]
) -> None:
    points = settings.plot.curve_points.get()

    if args.data is None:
        lambdas = args.lambdas if args.lambdas is not None else TABLE_LAMBDAS
        rates = [Rate(lam) for lam in lambdas]
        curves = {
            f"lambda={rate.value:g}": (WrappedModelKind.WRXG, rate) for rate in rates
        }
        parameters: dict[str, Any] = {
            "lambdas": ",".join(f"{rate.value:g}" for rate in rates),
            "curve_points": points,
        }
        doc = ReportDocument(
            command="plotdata",
            inputs_digest=_parameters_digest(parameters),
            tables=(
                parameters_table(parameters),
                pdf_curves(curves, points),
                cdf_curves(curves, points),
                circular_curves(rates, points),
            ),
        )
        _emit(doc, args, settings, stdout)
        return

    sample, inputs_digest = _ingest(args, settings)
    fits, _ = _fit_all(_models(args.model), sample, settings)
    models = {fit.model.value: (fit.model, fit.lambda_hat) for fit in fits}

    parameters = {
        "data": str(args.data),
        "unit": settings.data.unit.get(),
        "double_axial": settings.data.double_axial.get(),
        "n": sample.n,
        **{f"lambda_hat_{fit.model.value}": fit.lambda_hat.value for fit in fits},
    }
    doc = ReportDocument(
        command="plotdata",
        inputs_digest=inputs_digest,
        tables=(
            parameters_table(parameters),
            histogram(sample, settings.plot.bins.get()),
            rose(sample, settings.plot.sectors.get()),
            pdf_curves(models, points),
            ecdf_overlay(sample, models),
        ),
    )
    _emit(doc, args, settings, stdout)


def cmd_config(_: argparse.Namespace, settings: WrapXGSettings, stdout: IO[str]) -> None:
    settings.save(stdout, blanklines=True, effective=True)


_COMMANDS: dict[
    str, Callable[[argparse.Namespace, WrapXGSettings, IO[str]], None]
] = {
    "characterize": cmd_characterize,
    "fit": cmd_fit,
    "sample": cmd_sample,
    "simulate": cmd_simulate,
    "plotdata": cmd_plotdata,
    "config": cmd_config,
}


def main(argv: Sequence[str] | None = None, stdout: IO[str] | None = None) -> int:
    """
    Runs the command line and returns its exit status.
    """

    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
        _configure_logging(args)
        settings = _load_settings(args)
        _COMMANDS[args.command](args, settings, stdout)

    except UsageError as e:
        print(f"wrapxg: error: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_USAGE

    except DomainError as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_USAGE

    except (DataError, ShapeMismatchError) as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_DATA

    except ConvergenceError as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_NUMERICAL

    except WrapXGError as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_NUMERICAL

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
