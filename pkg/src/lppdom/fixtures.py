"""The two canonical fixture fields shipped as data files.

C: constant 1 on the 2x2 window (every path ties).
E: rows y=0: 1 5 1, y=1: 2 3 1, y=2: 4 2 6.
"""
from importlib import resources

from .weights import WeightField, field_from_json


def load_fixture(name: str) -> WeightField:
    text = resources.files("lppdom").joinpath("data", f"fixture_{name.lower()}.json").read_text()
    return field_from_json(text)


def fixture_path(name: str) -> str:
    return str(resources.files("lppdom").joinpath("data", f"fixture_{name.lower()}.json"))
