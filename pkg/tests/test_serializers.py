import enum

from wrapxg import serializers
from wrapxg.angles import AngleUnit
from wrapxg.serializers import EnumSerializer, TupleSerializer
from wrapxg.wrapped import WrappedModelKind


def test_serialize_int() -> None:
    serializer = serializers.lookup(int)
    assert serializer is not None
    assert serializer.toStr(42) == "42"


def test_serialize_bool() -> None:
    serializer = serializers.lookup(bool)
    assert serializer is not None
    assert serializer.toStr(True) == "true"
    assert serializer.toStr(False) == "false"


def test_serialize_float() -> None:
    serializer = serializers.lookup(float)
    assert serializer is not None
    assert serializer.toStr(1.0) == "1.0"
    assert serializer.toStr(1e-8) == "1e-08"


def test_deserialize_int() -> None:
    serializer = serializers.lookup(int)
    assert serializer is not None
    assert serializer.fromStr("test") is None
    assert serializer.fromStr("   -32 ") == -32
    assert serializer.fromStr("20190101") == 20190101


def test_deserialize_float() -> None:
    serializer = serializers.lookup(float)
    assert serializer is not None
    assert serializer.fromStr("test") is None
    assert serializer.fromStr(" 1e-10 ") == 1e-10
    assert serializer.fromStr("1000") == 1000.0


def test_deserialize_bool() -> None:
    serializer = serializers.lookup(bool)
    assert serializer is not None
    for string in ("true", "YES", " y", "1"):
        assert serializer.fromStr(string) is True
    for string in ("false", "No", "n", "0"):
        assert serializer.fromStr(string) is False
    assert serializer.fromStr("maybe") is None


def test_enum_by_value_and_name() -> None:
    serializer = serializers.lookup(AngleUnit)
    assert isinstance(serializer, EnumSerializer)
    assert serializer.toStr(AngleUnit.DEGREES) == "deg"
    assert serializer.fromStr("rad") is AngleUnit.RADIANS
    assert serializer.fromStr(" Radians ") is AngleUnit.RADIANS
    assert serializer.fromStr("grad") is None


def test_enum_with_int_values() -> None:
    class Order(enum.IntEnum):
        FIRST = 1
        SECOND = 2

    serializer = serializers.lookup(Order)
    assert isinstance(serializer, EnumSerializer)
    assert serializer.toStr(Order.SECOND) == "2"
    assert serializer.fromStr("2") is Order.SECOND
    assert serializer.fromStr("first") is Order.FIRST


def test_model_kinds() -> None:
    serializer = EnumSerializer(WrappedModelKind)
    for kind in WrappedModelKind:
        assert serializer.fromStr(serializer.toStr(kind)) is kind


def test_tuples() -> None:
    floats = TupleSerializer(float)
    assert floats.fromStr("0.1,0.7, 1,2.5,4,8") == (0.1, 0.7, 1.0, 2.5, 4.0, 8.0)
    assert floats.fromStr("1,") == (1.0,)
    assert floats.fromStr("") is None
    assert floats.fromStr(" , ") is None

    ints = TupleSerializer(int)
    assert ints.toStr((30, 80, 100)) == "30,80,100"
    assert ints.fromStr("30,80.5") is None


def test_unsupported_type() -> None:
    assert serializers.lookup(object) is None
    assert serializers.lookup(tuple) is None
