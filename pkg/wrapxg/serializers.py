import enum
from typing import Generic, Protocol, TypeVar

_T = TypeVar("_T")
_EnumT = TypeVar("_EnumT", bound=enum.Enum)
_Castable = TypeVar("_Castable", int, float, str)
_Number = TypeVar("_Number", int, float)


# pylint: disable=unnecessary-ellipsis


class Serializer(Generic[_T], Protocol):
    """
    A protocol that describes how a configuration value of some type is turned
    into text for a configuration file, and back.
    """

    def toStr(self, value: _T) -> str:
        """
        Returns a string representation of the given value, that can be used by
        :meth:`fromStr()` to reconstruct a copy of that value.
        """
        ...

    def fromStr(self, string: str) -> _T | None:
        """
        Returns the value represented by the given string, or None if the
        string is not a valid representation of a value of this serializer's
        type.
        """
        ...


class StraightCastSerializer(Generic[_Castable]):
    _type: type[_Castable]

    def __init__(self, type_: type[_Castable]) -> None:
        self._type = type_

    def toStr(self, value: _Castable) -> str:
        return str(value)

    def fromStr(self, string: str) -> _Castable | None:
        try:
            return self._type(string.strip())
        except ValueError:
            return None


class BoolSerializer:
    def toStr(self, value: bool) -> str:  # noqa: FBT001
        return "true" if value else "false"

    def fromStr(self, string: str) -> bool | None:
        string = string.strip().lower()
        if string in ("true", "yes", "y", "1"):
            return True
        if string in ("false", "no", "n", "0"):
            return False
        return None


class EnumSerializer(Generic[_EnumT]):
    """
    Serializes enum members by value, e.g. the model kind `wrxg` or the angle
    unit `deg`. Deserializing also accepts member names, case-insensitively.
    """

    _type: type[_EnumT]

    def __init__(self, type_: type[_EnumT]) -> None:
        self._type = type_

    def toStr(self, value: _EnumT) -> str:
        return str(value.value)

    def fromStr(self, string: str) -> _EnumT | None:
        wanted = string.strip().lower()

        for member in self._type:
            if str(member.value).lower() == wanted or member.name.lower() == wanted:
                return member

        return None


class TupleSerializer(Generic[_Number]):
    """
    Serializes a tuple of numbers as a comma-separated list.

    >>> serializer = TupleSerializer(float)
    >>> serializer.fromStr("0.1, 0.7,1")
    (0.1, 0.7, 1.0)
    >>> serializer.toStr((30.0, 80.5))
    '30.0,80.5'
    >>> serializer.fromStr("0.1, oops") is None
    True
    """

    _type: type[_Number]

    def __init__(self, type_: type[_Number]) -> None:
        self._type = type_

    def toStr(self, value: tuple[_Number, ...]) -> str:
        return ",".join(str(item) for item in value)

    def fromStr(self, string: str) -> tuple[_Number, ...] | None:
        items = [item.strip() for item in string.split(",")]
        if not any(items):
            return None

        try:
            return tuple(self._type(item) for item in items if item)
        except ValueError:
            return None


def lookup(type_: type[_T]) -> Serializer[_T] | None:
    if issubclass(type_, bool):
        return BoolSerializer()  # type: ignore[return-value]

    if issubclass(type_, enum.Enum):
        return EnumSerializer(type_)  # type: ignore[return-value]

    # Note: these need to come after the Enum case, because Enum can be a
    # subclass of these.

    if issubclass(type_, int) or issubclass(type_, float) or issubclass(type_, str):
        return StraightCastSerializer(type_)  # type: ignore[return-value]

    return None
