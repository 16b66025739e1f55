import logging
import math
import pathlib

import numpy as np
import pytest
from pytest_mock import MockerFixture

from wrapxg import ingest as ingest_module
from wrapxg.angles import AngleUnit, CircularSample
from wrapxg.errors import DataError
from wrapxg.ingest import (
    FISHER_B5_SIZE,
    atomic_write,
    ingest,
    ingest_bytes,
    parse_angles,
    read_angle_file,
    validate_dataset,
    write_angles,
)
from wrapxg.linear import Rate
from wrapxg.wrapped import WrappedModelKind, wrapped_sample


class TestParseAngles:
    def test_plain_values(self) -> None:
        assert parse_angles(["1", " 2.5 ", "-3e1"]) == [1.0, 2.5, -30.0]

    def test_comments_and_blank_lines(self) -> None:
        lines = ["# header comment", "", "10", "   ", "# another", "20"]
        assert parse_angles(lines) == [10.0, 20.0]

    def test_header(self) -> None:
        assert parse_angles(["angle", "10", "20"]) == [10.0, 20.0]

    def test_header_after_comments(self) -> None:
        assert parse_angles(["# source", "orientation", "10"]) == [10.0]

    def test_single_column_csv(self) -> None:
        assert parse_angles(['"angle",', "10,", '"20"']) == [10.0, 20.0]

    def test_second_non_numeric_line(self) -> None:
        with pytest.raises(DataError) as info:
            parse_angles(["angle", "10", "twenty"])
        assert info.value.line_number == 3

    def test_non_numeric_after_data(self) -> None:
        with pytest.raises(DataError) as info:
            parse_angles(["10", "oops"])
        assert info.value.line_number == 2

    def test_several_columns(self) -> None:
        with pytest.raises(DataError) as info:
            parse_angles(["10", "20,30"])
        assert info.value.line_number == 2

    def test_empty(self) -> None:
        with pytest.raises(DataError):
            parse_angles([])
        with pytest.raises(DataError):
            parse_angles(["# nothing", "angle"])

    def test_path_in_message(self) -> None:
        with pytest.raises(DataError, match="angles.txt:2"):
            parse_angles(["10", "x"], pathlib.Path("angles.txt"))

    def test_line_in_message_without_path(self) -> None:
        with pytest.raises(DataError, match="^line 2: ") as info:
            parse_angles(["10", "x"])
        assert info.value.path is None
        assert info.value.line_number == 2

    @pytest.mark.parametrize("token", ["nan", "inf", "-Infinity"])
    def test_non_finite_line(self, token: str) -> None:
        with pytest.raises(DataError, match="finite") as info:
            parse_angles(["10", "20", token, "30"])
        assert info.value.line_number == 3


class TestIngest:
    def test_degrees(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "angles.txt"
        path.write_text("angle\n0\n90\n180\n450\n")
        sample = ingest(path)

        assert sample.n == 4
        assert sample.source_unit is AngleUnit.DEGREES
        np.testing.assert_allclose(
            sample.angles, [0.0, math.pi / 2, math.pi, math.pi / 2]
        )

    def test_radians(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "angles.txt"
        path.write_text("0.5\n7.0\n")
        sample = ingest(path, AngleUnit.RADIANS)
        assert sample.angles[0] == 0.5
        assert sample.angles[1] == pytest.approx(7.0 - 2 * math.pi)

    def test_double_axial(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "axes.txt"
        path.write_text("90\n350\n")
        sample = ingest(path, double_axial=True)
        assert sample.axial_doubled
        assert sample.angles[0] == pytest.approx(math.pi)
        assert sample.angles[1] == pytest.approx(math.radians(340.0))

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        with pytest.raises(DataError):
            ingest(tmp_path / "missing.txt")

    def test_malformed_file(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "angles.txt"
        path.write_text("10\n20\nbad\n")
        with pytest.raises(DataError) as info:
            ingest(path)
        assert info.value.path == path
        assert info.value.line_number == 3

    def test_non_finite_values(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "a.txt"
        path.write_text("10\n20\nnan\n30\n")
        with pytest.raises(DataError, match="a.txt:3: ") as info:
            ingest(path)
        assert info.value.path == path
        assert info.value.line_number == 3

    def test_not_text(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "angles.bin"
        path.write_bytes(b"10\n\xff\xfe\n")
        with pytest.raises(DataError) as info:
            ingest(path)
        assert info.value.path == path

    def test_reads_the_file_once(
        self, tmp_path: pathlib.Path, mocker: MockerFixture
    ) -> None:
        path = tmp_path / "angles.txt"
        path.write_text("angle\n10\n20\n")
        read = mocker.spy(pathlib.Path, "read_bytes")
        ingest(path)
        assert read.call_count == 1

    def test_bytes_match_file(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "angles.txt"
        path.write_text("angle\n10\n20\n")
        content = read_angle_file(path)
        assert content == b"angle\n10\n20\n"
        from_bytes = ingest_bytes(content, path=path)
        np.testing.assert_array_equal(from_bytes.angles, ingest(path).angles)

    def test_bytes_without_path(self) -> None:
        with pytest.raises(DataError, match="^line 1: "):
            ingest_bytes(b"inf\n")


class TestValidateDataset:
    def test_expected_size(self) -> None:
        sample = CircularSample.fromValues(np.linspace(0.0, 6.0, FISHER_B5_SIZE))
        assert validate_dataset(sample)

    def test_mismatch_warns(self, mocker: MockerFixture) -> None:
        warning = mocker.patch.object(ingest_module.logger, "warning")
        sample = CircularSample.fromValues(np.linspace(0.0, 6.0, 164))
        assert not validate_dataset(sample)
        warning.assert_called_once()
        assert validate_dataset(sample, expected_n=164)


class TestWriting:
    def test_angles_round_trip_exactly(self, tmp_path: pathlib.Path) -> None:
        sample = wrapped_sample(WrappedModelKind.WRXG, Rate(1.3), 50, 4)
        path = tmp_path / "out" / "sample.txt"
        write_angles(path, sample)

        again = ingest(path, AngleUnit.RADIANS)
        assert np.array_equal(again.angles, sample.angles)

    def test_atomic_write_replaces(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "report.json"
        path.write_text("old")
        atomic_write(path, lambda f: f.write("new"))
        assert path.read_text() == "new"
        assert list(tmp_path.iterdir()) == [path]

    def test_atomic_write_keeps_target_on_failure(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "report.json"
        path.write_text("old")

        def fail(f: object) -> None:
            msg = "disk full"
            raise OSError(msg)

        with pytest.raises(OSError, match="disk full"):
            atomic_write(path, fail)
        assert path.read_text() == "old"
        assert list(tmp_path.iterdir()) == [path]

    def test_write_logs(self, tmp_path: pathlib.Path, mocker: MockerFixture) -> None:
        logger = mocker.MagicMock(logging.Logger)
        mocker.patch.object(ingest_module, "logger", logger)
        write_angles(tmp_path / "a.txt", CircularSample.fromValues([1.0]))
        logger.info.assert_called_once()
