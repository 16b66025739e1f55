import logging
import math
import sys
from collections.abc import Callable, Iterator
from typing import IO, Any, Generic, TypeVar

if sys.version_info < (3, 11):
    from typing_extensions import Self
else:
    from typing import Self

from wrapxg.angles import AngleUnit
from wrapxg.estimate import SearchConfig
from wrapxg.moments import TABLE_LAMBDAS
from wrapxg.report import OutputFormat
from wrapxg.serializers import Serializer, TupleSerializer, lookup
from wrapxg.simulation import TABLE_SIZES, SimulationConfig

logger = logging.getLogger(__name__)

_T = TypeVar("_T")


def normalize(string: str) -> str:
    """
    Reduces a section or key name to lowercase alphanumerics and underscores.

    >>> normalize(" Simulation Grid ")
    'simulationgrid'
    """

    return "".join(c for c in string if c.isalnum() or c == "_").lower()


def maybe_escape(value: str) -> str:
    """
    Quotes a value if it would not survive being written to a configuration
    line as-is.

    >>> maybe_escape("0.1,0.7")
    '0.1,0.7'
    >>> maybe_escape(" padded ")
    '" padded "'
    """

    if (
        len(value) == 0
        or '"' in value
        or "\\" in value
        or "\n" in value
        or value[0].isspace()
        or value[-1].isspace()
    ):
        escaped = value.replace("\\", "\\\\").replace('"', r"\"").replace("\n", r"\n")
        return '"' + escaped + '"'

    return value


def unescape(value: str) -> str:
    if len(value) < 2 or value[0] != '"' or value[-1] != '"':  # noqa: PLR2004
        return value

    ret = ""
    escaped = False

    for c in value[1:-1]:
        if escaped:
            ret += "\n" if c == "n" else c
            escaped = False
        elif c == "\\":
            escaped = True
        else:
            ret += c

    return ret


class Key(Generic[_T]):
    """
    A single typed configuration value.

    A Key that does not have a value set returns its parent's value if it has a
    parent, else its default.

    Args:
        default: The value returned when nothing else is set. Its type is the
            type of the values this Key accepts.

        serializer: How values are written to and read from text. Only needed
            for types that have no native serializer, such as tuples.

        validator: A function that returns True if the given value is
            acceptable for this Key.

    Example:

    >>> reps = Key(default=10000, validator=lambda n: n >= 1)
    >>> reps.set(0)
    False
    >>> reps.set(250)
    True
    >>> layer = Key(default=10000)
    >>> layer.setParent(reps)
    >>> layer.get()
    250
    >>> reps
    <Key[int]:250>
    """

    _default: _T
    _value: _T | None
    _type: type[_T]
    _serializer: Serializer[_T]
    _validator: Callable[[_T], bool]
    _bad_value_string: str | None
    _parent: "Key[_T] | None"

    def __init__(
        self,
        default: _T,
        serializer: Serializer[_T] | None = None,
        validator: Callable[[_T], bool] | None = None,
    ) -> None:
        self._type = default.__class__
        self._default = default
        self._value = None
        self._bad_value_string = None
        self._parent = None

        if serializer is None:
            serializer = lookup(self._type)
            if serializer is None:
                msg = (
                    f"Default Key value '{default}' has type"
                    f" '{self._type.__name__}', which is not supported by a native"
                    " serializer. Please construct the Key with an explicit"
                    " serializer argument."
                )
                raise TypeError(msg)

        self._serializer = serializer
        self._validator = validator if validator is not None else lambda _: True

    def get(self) -> _T:
        return self.fallback() if (value := self._value) is None else value

    def fallback(self) -> _T:
        return self._default if (parent := self._parent) is None else parent.get()

    def set(self, value: _T) -> bool:
        """
        Sets the given value on this Key.

        Returns:
            True if the value was set, False if it has the wrong type or the
            validator refused it. The Key is unchanged in the latter case.
        """

        if not isinstance(value, self._type):
            return False

        if not self._validator(value):
            logger.debug("Validator rejected value for Key %r: %r", self, value)
            return False

        self._bad_value_string = None
        self._value = value
        return True

    def clear(self) -> None:
        self._bad_value_string = None
        self._value = None

    def isSet(self) -> bool:
        return self._value is not None

    def setParent(self, parent: "Key[_T] | None") -> None:
        if parent is not None and parent._type is not self._type:  # noqa: SLF001
            return
        self._parent = parent

    def parent(self) -> "Key[_T] | None":
        return self._parent

    def text(self) -> str:
        return self._serializer.toStr(self.get())

    def dump(self) -> str | None:
        """
        Internal. Returns the text to save for this Key, or None if there is
        nothing to save.
        """

        if self.isSet():
            return self._serializer.toStr(self.get())

        # A value that failed to load is written back as-is, so that a typo in
        # a configuration file does not silently erase the entry.

        return self._bad_value_string

    def restore(self, string: str) -> bool:
        """
        Internal. Sets this Key from its text representation.
        """

        if (value := self._serializer.fromStr(string)) is not None and self.set(value):
            return True

        logger.error("Invalid value for Key %r: %s", self, string)
        self._bad_value_string = string
        return False

    def _newInstance(self) -> Self:
        return self.__class__(
            default=self._default,
            serializer=self._serializer,
            validator=self._validator,
        )

    def __repr__(self) -> str:
        value = maybe_escape(self._serializer.toStr(self.get()))
        if not self.isSet():
            value = f"({value})"
        return f"<Key[{self._type.__name__}]:{value}>"


def _templates(cls: type, kind: type[_T]) -> dict[str, _T]:
    # Base classes first, so that subclasses override their declarations.
    templates: dict[str, _T] = {}
    for klass in reversed(cls.__mro__):
        for name, attr in vars(klass).items():
            if isinstance(attr, kind) and not name.startswith("_"):
                templates[name] = attr
    return templates


class Section:
    """
    A named group of Keys, declared as class attributes. Each instance gets
    its own copy of every declared Key.
    """

    def __init__(self) -> None:
        for name, template in _templates(type(self), Key).items():
            setattr(self, name, template._newInstance())  # noqa: SLF001

    def keys(self) -> Iterator[tuple[str, Key[Any]]]:
        for name in _templates(type(self), Key):
            yield name, getattr(self, name)

    def key(self, name: str) -> Key[Any] | None:
        for key_name, key in self.keys():
            if key_name == normalize(name):
                return key
        return None

    def setParent(self, parent: Self | None) -> None:
        for name, key in self.keys():
            key.setParent(None if parent is None else getattr(parent, name))

    def _newInstance(self) -> Self:
        return self.__class__()


class Settings:
    """
    A collection of Sections that can be saved to and loaded from text.

    Example:

    >>> import io
    >>> settings = WrapXGSettings()
    >>> settings.load(io.StringIO("[fit]\\nrtol = 1e-10\\n[simulation]\\nreps = 500\\n"))
    >>> settings.fit.rtol.get(), settings.simulation.reps.get()
    (1e-10, 500)
    >>> flags = settings.newLayer()
    >>> flags.simulation.reps.set(20)
    True
    >>> flags.simulation.reps.get(), settings.simulation.reps.get()
    (20, 500)
    >>> txt = io.StringIO()
    >>> settings.save(txt)
    >>> print(txt.getvalue(), end="")
    [fit]
    rtol = 1e-10
    [simulation]
    reps = 500
    """

    _parent: "Settings | None" = None

    def __init__(self) -> None:
        for name, template in _templates(type(self), Section).items():
            setattr(self, name, template._newInstance())  # noqa: SLF001

    def sections(self) -> Iterator[tuple[str, Section]]:
        for name in _templates(type(self), Section):
            yield name, getattr(self, name)

    def section(self, name: str) -> Section | None:
        for section_name, section in self.sections():
            if section_name == normalize(name):
                return section
        return None

    def newLayer(self) -> Self:
        """
        Creates and returns a new instance of this class, each Key of which
        falls back to the Key of the same name on this instance.
        """

        layer = self.__class__()
        layer._parent = self  # noqa: SLF001
        for name, section in layer.sections():
            section.setParent(getattr(self, name))
        return layer

    def parent(self) -> "Settings | None":
        return self._parent

    def save(
        self, file: IO[str], *, blanklines: bool = False, effective: bool = False
    ) -> None:
        """
        Writes the Keys that have a value set on this instance, section by
        section, to the given text file object. Inherited values are not
        written, unless `effective` is set, in which case every Key is written
        with the value it currently resolves to.
        """

        need_space = False
        for name, section in self.sections():
            dumps = [
                (key_name, key.text() if effective else key.dump())
                for key_name, key in section.keys()
            ]
            dumps = [(key_name, dump) for key_name, dump in dumps if dump is not None]
            if not dumps:
                continue

            if need_space and blanklines:
                file.write("\n")
            need_space = True

            file.write(f"[{name}]\n")
            for key_name, dump in dumps:
                file.write(f"{key_name} = {maybe_escape(dump)}\n")

    def load(self, file: IO[str]) -> None:
        """
        Loads values from the given text file object.

        Blank lines and lines starting with '#' or ';' are ignored. Unknown
        sections and keys are skipped. Values that fail to parse or validate
        are logged and otherwise ignored.
        """

        current: Section | None = None

        for line_number, full_line in enumerate(file, start=1):
            line = full_line.strip()

            if not line or line[0] in "#;":
                continue

            if line[0] == "[" and line[-1] == "]":
                current = self.section(line[1:-1])
                if current is None:
                    logger.debug("Skipping unknown section %s.", line)
                continue

            if "=" not in line or current is None:
                logger.debug("Skipping configuration line %d: %r", line_number, line)
                continue

            name, dump = line.split("=", 1)
            if (key := current.key(name)) is None:
                logger.debug("Skipping unknown key %r.", name.strip())
                continue

            key.restore(unescape(dump.strip()))


def _positive(value: float) -> bool:
    return math.isfinite(value) and value > 0.0


class FitSection(Section):
    lower: Key[float] = Key(default=1e-3, validator=_positive)
    upper: Key[float] = Key(default=1e3, validator=_positive)
    rtol: Key[float] = Key(default=1e-8, validator=_positive)
    grid_points: Key[int] = Key(default=21, validator=lambda n: n >= 2)  # noqa: PLR2004
    log_scale: Key[bool] = Key(default=True)


class SimulationSection(Section):
    lambdas: Key[tuple[float, ...]] = Key(
        default=TABLE_LAMBDAS,
        serializer=TupleSerializer(float),
        validator=lambda lams: bool(lams) and all(_positive(lam) for lam in lams),
    )
    sizes: Key[tuple[int, ...]] = Key(
        default=TABLE_SIZES,
        serializer=TupleSerializer(int),
        validator=lambda sizes: bool(sizes) and all(n >= 2 for n in sizes),  # noqa: PLR2004
    )
    reps: Key[int] = Key(default=10000, validator=lambda n: n >= 1)
    quick_reps: Key[int] = Key(default=1000, validator=lambda n: n >= 1)
    seed: Key[int] = Key(default=20190101, validator=lambda s: 0 <= s < 2**64)
    workers: Key[int] = Key(default=1, validator=lambda n: n >= 1)
    max_failure_fraction: Key[float] = Key(
        default=0.01, validator=lambda f: 0.0 <= f < 1.0
    )


class PlotSection(Section):
    bins: Key[int] = Key(default=18, validator=lambda n: n >= 1)
    sectors: Key[int] = Key(default=16, validator=lambda n: n >= 1)
    curve_points: Key[int] = Key(default=361, validator=lambda n: n >= 2)  # noqa: PLR2004


class OutputSection(Section):
    format: Key[OutputFormat] = Key(default=OutputFormat.JSON)
    csv_digits: Key[int] = Key(default=6, validator=lambda n: 1 <= n <= 17)  # noqa: PLR2004


class DataSection(Section):
    unit: Key[AngleUnit] = Key(default=AngleUnit.DEGREES)
    double_axial: Key[bool] = Key(default=False)


class WrapXGSettings(Settings):
    """
    Every tunable of the WrapXG command line, with its built-in default.
    """

    fit: FitSection = FitSection()
    simulation: SimulationSection = SimulationSection()
    plot: PlotSection = PlotSection()
    output: OutputSection = OutputSection()
    data: DataSection = DataSection()

    def searchConfig(self) -> SearchConfig:
        return SearchConfig(
            lower=self.fit.lower.get(),
            upper=self.fit.upper.get(),
            rtol=self.fit.rtol.get(),
            grid_points=self.fit.grid_points.get(),
            log_scale=self.fit.log_scale.get(),
        )

    def simulationConfig(self, *, quick: bool = False) -> SimulationConfig:
        sim = self.simulation
        return SimulationConfig(
            lambdas=sim.lambdas.get(),
            sizes=sim.sizes.get(),
            reps=sim.quick_reps.get() if quick else sim.reps.get(),
            master_seed=sim.seed.get(),
            workers=sim.workers.get(),
            max_failure_fraction=sim.max_failure_fraction.get(),
            search=self.searchConfig(),
        )
