"""Capacity bounds for two-way quantum channels.

Channel specs are dicts in the same format as the JSON spec files; results
come back as dicts.
"""

import json as _json

from ._biduct import (
    Budget,
    InvariantError,
    conditional_mutual_information,
    entropy,
    holevo_chi,
    hull_of_rectangles,
    lemma_star_check,
)
from . import _biduct

__all__ = [
    "Budget",
    "InvariantError",
    "capacity",
    "conditional_mutual_information",
    "entropy",
    "holevo_chi",
    "hull_of_rectangles",
    "lemma_star_check",
    "load_spec",
    "region",
    "run_suite",
    "validate",
]


def load_spec(path):
    with open(path) as f:
        return _json.load(f)


def validate(spec):
    return _json.loads(_biduct.validate(_json.dumps(spec)))


def capacity(spec, budget, direction="forward"):
    return _json.loads(_biduct.capacity(_json.dumps(spec), direction, budget))


def region(spec, kind, budget, lambdas=11):
    return _json.loads(_biduct.region(_json.dumps(spec), kind, lambdas, budget))


def run_suite(name, config):
    return _json.loads(_biduct.run_suite(name, _json.dumps(config)))
