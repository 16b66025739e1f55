import csv
import logging
import math
import tempfile
from collections.abc import Callable, Iterable
from pathlib import Path
from typing import IO

from wrapxg.angles import AngleUnit, CircularSample
from wrapxg.errors import DataError

logger = logging.getLogger(__name__)

_ENCODING = "UTF-8"
_FILE_MODE = 0o644

# The size of the feldspar orientation dataset the models were first fitted to.
FISHER_B5_SIZE = 60


def _field(line: str) -> str:
    fields = [field.strip() for field in next(csv.reader([line]), [])]
    fields = [field for field in fields if field]
    if len(fields) != 1:
        msg = f"Expected one value per line, got {len(fields)}"
        raise ValueError(msg)
    return fields[0]


def parse_angles(lines: Iterable[str], path: Path | None = None) -> list[float]:
    """
    Parses the angle values of an angle file, without unit conversion.

    The first data line may be a non-numeric header; any later non-numeric
    line is an error.

    Raises:
        DataError: on a malformed line, with its line number, or when there is
            no value at all.

    Example:

    >>> parse_angles(["# orientations", "angle", "12.5", "", "350"])
    [12.5, 350.0]
    """

    values: list[float] = []
    header_allowed = True

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        try:
            token = _field(line)
        except ValueError as e:
            raise DataError(str(e), path=path, line_number=line_number) from None

        try:
            value = float(token)
        except ValueError:
            if header_allowed:
                logger.debug("Skipping header line %d: %r", line_number, line)
                header_allowed = False
                continue
            msg = f"Not a number: {token!r}"
            raise DataError(msg, path=path, line_number=line_number) from None

        if not math.isfinite(value):
            msg = f"Angle measurements must be finite, got {token!r}"
            raise DataError(msg, path=path, line_number=line_number)

        values.append(value)
        header_allowed = False

    if not values:
        msg = "No angle values found."
        raise DataError(msg, path=path)

    return values


def read_angle_file(path: Path) -> bytes:
    """
    Reads the raw content of an angle file.

    Raises:
        DataError: when the file cannot be read.
    """

    try:
        return path.read_bytes()
    except OSError as e:
        msg = f"Cannot read angle file: {e.strerror}"
        raise DataError(msg, path=path) from e


def ingest_bytes(
    content: bytes,
    unit: AngleUnit = AngleUnit.DEGREES,
    *,
    double_axial: bool = False,
    path: Path | None = None,
) -> CircularSample:
    """
    Loads a circular sample from the raw content of an angle file.

    Args:
        content: The UTF-8 encoded file content.

        unit: The unit the angles are in. Degrees by default.

        double_axial: Whether to double every angle before normalization,
            turning axial orientations into circular data.

        path: The file the content was read from, for error reporting.

    Raises:
        DataError: when the content is not valid text or holds a malformed
            line.
    """

    try:
        text = content.decode(_ENCODING)
    except UnicodeDecodeError as e:
        msg = f"Not valid {_ENCODING} text at byte {e.start}"
        raise DataError(msg, path=path) from None

    values = parse_angles(text.splitlines(), path)
    logger.debug("Read %d angles from '%s'.", len(values), path or "<bytes>")

    try:
        return CircularSample.fromValues(values, unit=unit, double_axial=double_axial)
    except DataError as e:
        if path is None:
            raise
        raise DataError(str(e), path=path) from e


def ingest(
    path: Path,
    unit: AngleUnit = AngleUnit.DEGREES,
    *,
    double_axial: bool = False,
) -> CircularSample:
    """
    Loads a circular sample from an angle file.

    Args:
        path: The file to read.

        unit: The unit the file's angles are in. Degrees by default.

        double_axial: Whether to double every angle before normalization,
            turning axial orientations into circular data.

    Returns:
        A CircularSample with angles in radians, in [0, 2π).

    Raises:
        DataError: when the file cannot be read or holds a malformed line.
    """

    content = read_angle_file(path)
    return ingest_bytes(content, unit, double_axial=double_axial, path=path)


def validate_dataset(sample: CircularSample, expected_n: int = FISHER_B5_SIZE) -> bool:
    """
    Checks that an ingested dataset has the expected number of observations.
    A mismatch is logged as a warning, not raised.
    """

    if sample.n != expected_n:
        logger.warning(
            "The dataset holds %d angles; %d were expected.", sample.n, expected_n
        )
        return False
    return True


def atomic_write(path: Path, write: Callable[[IO[str]], None]) -> None:
    """
    Writes a text file through a temporary file in the same directory, which
    then replaces the target. The target is either left untouched or fully
    written.

    Raises:
        OSError: when the file cannot be written.
    """

    path = path.expanduser()
    directory = path.parent
    directory.mkdir(parents=True, exist_ok=True)

    with tempfile.NamedTemporaryFile(
        dir=directory,
        prefix=path.name,
        mode="xt",
        encoding=_ENCODING,
        delete=False,
    ) as tmp:
        tmp_path = Path(tmp.name)
        try:
            write(tmp.file)
        except BaseException:
            tmp.close()
            tmp_path.unlink(missing_ok=True)
            raise

    tmp_path.chmod(_FILE_MODE)
    tmp_path.replace(path)


def write_angles(path: Path, sample: CircularSample) -> None:
    """
    Writes the angles of a sample, in radians, one per line, each with enough
    digits to be read back exactly.
    """

    def write(f: IO[str]) -> None:
        for angle in sample.angles:
            f.write(f"{float(angle)!r}\n")

    atomic_write(path, write)
    logger.info("Wrote %d angles to '%s'.", sample.n, path)
