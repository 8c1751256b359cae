import json
import random
from fractions import Fraction

import pytest

from twinstar.dets2 import indicator
from twinstar.errors import InputError
from twinstar.formats import (
    family_from_json_obj,
    family_to_json_obj,
    load_partition,
    partition_from_json_obj,
    partition_from_text,
    partition_to_json_obj,
    partition_to_text,
)
from twinstar.partition import reference_partition

from .sampling import random_cycle_free


def test_text_roundtrip():
    rng = random.Random(0)
    for d in (1, 2, 3, 4):
        p = random_cycle_free(d, rng)
        assert partition_from_text(partition_to_text(p)) == p


def test_text_format_shape():
    text = partition_to_text(reference_partition(2))
    lines = text.strip().splitlines()
    assert lines[0] == "d=2"
    assert lines[1] == "1 2 1"
    assert len(lines) == 7


def test_json_roundtrip():
    rng = random.Random(1)
    for d in (1, 2, 3, 4):
        p = random_cycle_free(d, rng)
        obj = partition_to_json_obj(p)
        assert partition_from_json_obj(json.loads(json.dumps(obj))) == p


def test_load_partition_autodetects():
    p = reference_partition(3)
    assert load_partition(partition_to_text(p)) == p
    assert load_partition(json.dumps(partition_to_json_obj(p))) == p


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "d=2\n1 2 1\n",  # not total
        "d=2\n1 2 3\n1 3 1\n1 4 1\n2 3 2\n2 4 2\n3 4 2\n",  # color range
        "d=2\n1 2 1\n1 2 1\n1 3 1\n1 4 1\n2 3 2\n2 4 2\n",  # duplicate edge
        "d=2\n2 1 1\n1 3 1\n1 4 1\n2 3 2\n2 4 2\n3 4 2\n",  # unordered pair
        "nope\n1 2 1\n",
    ],
)
def test_text_rejects(bad):
    with pytest.raises(InputError):
        partition_from_text(bad)


def test_json_rejects():
    with pytest.raises(InputError):
        partition_from_json_obj({"d": 2, "colors": [1, 1, 1]})
    with pytest.raises(InputError):
        partition_from_json_obj({"d": 2, "colors": [1, 1, 1, 2, 2, 9]})
    with pytest.raises(InputError):
        partition_from_json_obj({"colors": [1] * 6})


def test_family_json_roundtrip():
    fam = indicator(reference_partition(2))
    obj = family_to_json_obj(fam)
    assert obj["d"] == 2
    assert obj["vectors"]["1,2"] == ["1", "0"]
    back = family_from_json_obj(json.loads(json.dumps(obj)))
    assert back == fam


def test_family_json_rationals():
    obj = {
        "d": 1,
        "vectors": {"1,2": ["-3/7"]},
    }
    fam = family_from_json_obj(obj)
    assert fam.coords[0][0] == Fraction(-3, 7)
    assert family_to_json_obj(fam)["vectors"]["1,2"] == ["-3/7"]


def test_family_json_rejects():
    with pytest.raises(InputError):
        family_from_json_obj({"d": 2, "vectors": {}})
    with pytest.raises(InputError):
        family_from_json_obj({"d": 1, "vectors": {"1,2": ["1/0"]}})
