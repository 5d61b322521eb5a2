import json
import math

import numpy as np
import pytest

from delaydesign._serialize import dumps_17g


def test_scalars():
    assert dumps_17g(None) == "null"
    assert dumps_17g(True) == "true"
    assert dumps_17g(False) == "false"
    assert dumps_17g(3) == "3"
    assert dumps_17g(-1.5) == "-1.5"
    assert dumps_17g("a\"b") == '"a\\"b"'


def test_nonfinite_floats_become_null():
    assert dumps_17g(float("nan")) == "null"
    assert dumps_17g(float("inf")) == "null"
    assert dumps_17g(float("-inf")) == "null"
    assert dumps_17g([1.0, float("nan"), 2.0]) == "[1,null,2]"


def test_17_digits_round_trip():
    # %.17g is lossless for float64: parsing the output recovers the value.
    rng = np.random.default_rng(7)
    values = list(rng.standard_normal(200) * 10.0 ** rng.integers(-300, 300, 200))
    values += [0.1, 1.0 / 3.0, math.pi, 5e-324, 1.7976931348623157e308]
    out = json.loads(dumps_17g(values))
    assert out == values


def test_compact_and_ordered():
    doc = {"b": 1, "a": [1.0, 2.5], "c": {"y": None}}
    assert dumps_17g(doc) == '{"b":1,"a":[1,2.5],"c":{"y":null}}'


def test_numpy_types():
    assert dumps_17g(np.float64(0.5)) == "0.5"
    assert dumps_17g(np.int64(4)) == "4"
    assert dumps_17g(np.array([1.0, 2.0])) == "[1,2]"


def test_deterministic():
    doc = {"x": [math.pi, math.e], "n": 3}
    assert dumps_17g(doc) == dumps_17g(doc)


def test_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps_17g(object())
    with pytest.raises(TypeError):
        dumps_17g({1: "non-string key"})
