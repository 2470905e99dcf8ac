import itertools
import json
from importlib import resources

import pytest

from ramsey_forge import structures as st


def stirling2(n, k):
    """S(n, k) by the triangle recurrence S(n, k) = k S(n-1, k) + S(n-1, k-1)."""
    table = {(0, 0): 1}
    for i in range(1, n + 1):
        for j in range(0, k + 1):
            table[i, j] = j * table.get((i - 1, j), 0) + table.get((i - 1, j - 1), 0)
    return table.get((n, k), 0)


def all_digraphs(n):
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    for mask in range(1 << len(pairs)):
        yield st.ReflexiveDigraph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        chosen = [p for i, p in enumerate(pairs) if mask >> i & 1]
        yield st.ReflexiveDigraph.from_edges(n, chosen + [(y, x) for x, y in chosen])


@pytest.fixture(scope="session")
def report_validator():
    from jsonschema import Draft202012Validator
    from referencing import Registry, Resource

    base = resources.files("ramsey_forge").joinpath("schemas")
    schemas = {name: json.loads(base.joinpath(name).read_text()) for name in ("report.schema.json", "structure.schema.json")}
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())
    Draft202012Validator.check_schema(schemas["report.schema.json"])
    return Draft202012Validator(schemas["report.schema.json"], registry=registry)
