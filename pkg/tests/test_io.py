from pathlib import Path

import pytest

from bimlab.algebra import find_isomorphism, validate
from bimlab.constructions import catalog
from bimlab.io import AlgebraFileError, algebra_from_dict, algebra_to_dict, dumps_json, dumps_yaml, load, loads

from conftest import UP_TO_6

DATA = Path(__file__).parent / "data"


def test_load_h5_with_pointed_addition():
    A = load(DATA / "h5.yaml")
    assert A.name == "H5 pointed at c"
    assert validate(A, commutative=True) and A.lattice
    assert find_isomorphism(A, catalog("H5c")) is not None


def test_load_l3_tables_and_default_name():
    A = load(DATA / "l3.yaml")
    assert A.name == "l3"
    assert find_isomorphism(A, catalog("L3")) is not None


def test_load_json_with_complement():
    A = load(DATA / "bool1.json")
    assert A.is_involutive() and validate(A)


def test_invalid_algebra_still_loads():
    A = load(DATA / "nonassoc.yaml")
    assert not validate(A)


@pytest.mark.parametrize("doc,fragment", [
    ({"elements": ["a", "a"]}, "distinct"),
    ({"elements": ["a"], "mul": [["b"]]}, "unknown element"),
    ({"elements": ["a", "b"], "mul": [["a"]]}, "2x2"),
    ({"elements": ["a"], "colour": 1}, "unknown fields"),
    ({"leq": []}, "elements"),
    ({"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}, "leq"),
    ({"elements": [True]}, "quoted"),
    ({"elements": ["a", "b"], "mul": "meet"}, "meet"),
    ({"elements": ["a"], "add": "pbr"}, "zero"),
    ([1, 2], "mapping"),
])
def test_file_errors(doc, fragment):
    with pytest.raises(AlgebraFileError) as info:
        algebra_from_dict(doc)
    assert fragment in str(info.value)


def test_unparsable_and_missing_files():
    with pytest.raises(AlgebraFileError):
        load(DATA / "broken.yaml")
    with pytest.raises(AlgebraFileError):
        load(DATA / "missing.yaml")


@pytest.mark.parametrize("name", UP_TO_6)
def test_json_round_trip(name):
    A = catalog(name)
    B = loads(dumps_json(A))
    assert algebra_to_dict(B) == algebra_to_dict(A)
    assert bool(validate(B)) == bool(validate(A))


def test_yaml_round_trip():
    A = catalog("diamond_fig5")
    assert algebra_to_dict(loads(dumps_yaml(A))) == algebra_to_dict(A)
