import io
import logging

import pytest
from pytest_mock import MockerFixture

from wrapxg import config
from wrapxg.angles import AngleUnit
from wrapxg.config import Key, WrapXGSettings, maybe_escape, normalize, unescape
from wrapxg.estimate import SearchConfig
from wrapxg.report import OutputFormat
from wrapxg.serializers import TupleSerializer


class TestKey:
    def test_default(self) -> None:
        assert Key(default=0).get() == 0
        assert Key(default=1.5e-3).get() == 1.5e-3
        assert type(Key(default=False).get()) is bool
        assert Key(default=AngleUnit.RADIANS).get() is AngleUnit.RADIANS
        with pytest.raises(TypeError):
            Key(default=object())
        with pytest.raises(TypeError):
            Key(default=(1, 2))

    def test_set_and_clear(self) -> None:
        key = Key(default=18)
        assert key.set(12)
        assert key.get() == 12
        assert key.isSet()

        key.clear()
        assert key.get() == 18
        assert not key.isSet()

    def test_set_wrong_type(self) -> None:
        key = Key(default=1.0)
        assert not key.set("1.0")  # type: ignore[arg-type]
        assert key.get() == 1.0

    def test_validator(self) -> None:
        key = Key(default=10000, validator=lambda n: n >= 1)
        assert not key.set(0)
        assert not key.isSet()
        assert key.set(1)

    def test_fallback(self) -> None:
        key = Key(default=0)
        child = Key(default=0)
        child.setParent(key)

        assert child.fallback() == 0
        key.set(2)
        assert child.fallback() == 2
        assert child.get() == 2

        child.set(1)
        assert child.get() == 1
        assert child.fallback() == 2
        assert child.parent() is key

    def test_parent_of_another_type(self) -> None:
        key = Key(default=0)
        child = Key(default="0")
        child.setParent(key)  # type: ignore[arg-type]
        assert child.parent() is None

    def test_tuple_key(self) -> None:
        key = Key(default=(30, 80), serializer=TupleSerializer(int))
        assert key.restore("30, 80, 100")
        assert key.get() == (30, 80, 100)
        assert key.dump() == "30,80,100"

    def test_restore_bad_value(self, mocker: MockerFixture) -> None:
        logger = mocker.MagicMock(logging.Logger)
        mocker.patch.object(config, "logger", logger)

        key = Key(default=10000, validator=lambda n: n >= 1)
        assert not key.restore("many")
        assert not key.restore("0")
        assert logger.error.call_count == 2

        assert key.get() == 10000
        assert key.dump() == "0"

        key.set(5)
        assert key.dump() == "5"

    def test_repr(self) -> None:
        key = Key(default=16)
        assert repr(key) == "<Key[int]:(16)>"
        key.set(8)
        assert repr(key) == "<Key[int]:8>"
        assert repr(Key(default=" x")) == '<Key[str]:(" x")>'


class TestEscaping:
    def test_escape(self) -> None:
        assert maybe_escape("") == '""'
        assert maybe_escape("123") == "123"
        assert maybe_escape("0.1,0.7,1") == "0.1,0.7,1"
        assert maybe_escape("   ") == '"   "'
        assert maybe_escape(" a") == '" a"'
        assert maybe_escape("a ") == '"a "'
        assert maybe_escape('"') == r'"\""'
        assert maybe_escape("test\ntest") == r'"test\ntest"'
        assert maybe_escape(r"test\test") == r'"test\\test"'

    def test_unescape(self) -> None:
        assert unescape("") == ""
        assert unescape('""') == ""
        assert unescape('"') == '"'
        assert unescape("123") == "123"
        assert unescape('" a"') == " a"
        assert unescape(r'"\""') == '"'
        assert unescape(r'"test\ntest"') == "test\ntest"
        assert unescape(r'"test\\test"') == r"test\test"

    def test_reversible(self) -> None:
        for string in ("", "123", "json", "   ", " a", '"', "a\nb", r"a\b"):
            assert unescape(maybe_escape(string)) == string

    def test_normalize(self) -> None:
        assert normalize(" Simulation ") == "simulation"
        assert normalize("curve_points") == "curve_points"
        assert normalize("Quick-Reps") == "quickreps"


class TestSettings:
    def test_defaults(self) -> None:
        settings = WrapXGSettings()
        assert settings.simulation.reps.get() == 10000
        assert settings.simulation.quick_reps.get() == 1000
        assert settings.simulation.seed.get() == 20190101
        assert settings.plot.bins.get() == 18
        assert settings.output.format.get() is OutputFormat.JSON
        assert settings.data.unit.get() is AngleUnit.DEGREES
        assert not settings.data.double_axial.get()

    def test_sections_are_independent(self) -> None:
        a = WrapXGSettings()
        b = WrapXGSettings()
        a.plot.bins.set(6)
        assert b.plot.bins.get() == 18

    def test_load(self) -> None:
        settings = WrapXGSettings()
        settings.load(
            io.StringIO(
                "# comment\n"
                "; other comment\n"
                "[Simulation]\n"
                "lambdas = 1, 2.5\n"
                "Sizes = 30,80\n"
                "\n"
                "[output]\n"
                "format = CSV\n"
                "[data]\n"
                "unit = rad\n"
                "double_axial = yes\n"
            )
        )
        assert settings.simulation.lambdas.get() == (1.0, 2.5)
        assert settings.simulation.sizes.get() == (30, 80)
        assert settings.output.format.get() is OutputFormat.CSV
        assert settings.data.unit.get() is AngleUnit.RADIANS
        assert settings.data.double_axial.get()

    def test_load_skips_unknown_entries(self, mocker: MockerFixture) -> None:
        error = mocker.patch.object(config.logger, "error")
        settings = WrapXGSettings()
        settings.load(
            io.StringIO(
                "orphan = 1\n[nothing]\nbins = 3\n[plot]\nunknown = 3\nno equals sign\n"
            )
        )
        assert settings.plot.bins.get() == 18
        error.assert_not_called()

    def test_invalid_values_are_kept_for_saving(self, mocker: MockerFixture) -> None:
        error = mocker.patch.object(config.logger, "error")
        settings = WrapXGSettings()
        settings.load(io.StringIO("[plot]\nbins = 0\nsectors = eight\n"))

        assert error.call_count == 2
        assert settings.plot.bins.get() == 18

        out = io.StringIO()
        settings.save(out)
        assert out.getvalue() == "[plot]\nbins = 0\nsectors = eight\n"

    def test_save_load_round_trip(self) -> None:
        settings = WrapXGSettings()
        settings.fit.rtol.set(1e-10)
        settings.simulation.lambdas.set((0.7, 4.0))
        settings.output.format.set(OutputFormat.CSV)

        out = io.StringIO()
        settings.save(out, blanklines=True)
        assert out.getvalue() == (
            "[fit]\n"
            "rtol = 1e-10\n"
            "\n"
            "[simulation]\n"
            "lambdas = 0.7,4.0\n"
            "\n"
            "[output]\n"
            "format = csv\n"
        )

        again = WrapXGSettings()
        again.load(io.StringIO(out.getvalue()))
        out_again = io.StringIO()
        again.save(out_again, blanklines=True)
        assert out_again.getvalue() == out.getvalue()

    def test_layers(self) -> None:
        defaults = WrapXGSettings()
        file_layer = defaults.newLayer()
        flags = file_layer.newLayer()

        file_layer.load(io.StringIO("[simulation]\nreps = 500\nworkers = 2\n"))
        flags.simulation.reps.set(20)

        assert flags.parent() is file_layer
        assert flags.simulation.reps.get() == 20
        assert flags.simulation.workers.get() == 2
        assert file_layer.simulation.reps.get() == 500
        assert defaults.simulation.reps.get() == 10000

        out = io.StringIO()
        flags.save(out)
        assert out.getvalue() == "[simulation]\nreps = 20\n"

    def test_effective_save(self) -> None:
        settings = WrapXGSettings().newLayer()
        settings.plot.bins.set(6)

        out = io.StringIO()
        settings.save(out, effective=True)
        text = out.getvalue()
        assert "[fit]\nlower = 0.001\nupper = 1000.0\n" in text
        assert "bins = 6\n" in text
        assert "seed = 20190101\n" in text
        assert "unit = deg\n" in text

    def test_search_config(self) -> None:
        settings = WrapXGSettings()
        assert settings.searchConfig() == SearchConfig()

        settings.load(io.StringIO("[fit]\nupper = 50\nlog_scale = false\n"))
        search = settings.searchConfig()
        assert search.upper == 50.0
        assert not search.log_scale

    def test_simulation_config(self) -> None:
        settings = WrapXGSettings()
        settings.load(io.StringIO("[simulation]\nreps = 300\nquick_reps = 30\n"))

        assert settings.simulationConfig().reps == 300
        quick = settings.simulationConfig(quick=True)
        assert quick.reps == 30
        assert quick.master_seed == 20190101
        assert quick.search == settings.searchConfig()
