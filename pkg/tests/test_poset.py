import dataclasses
import json

import pytest

from attenuated.poset import PosetInstance, build_poset, verify_counting
from conftest import SMALL, poset


def test_build_222(p222):
    assert p222.size == 29
    assert p222.rank_sizes() == [1, 12, 16]
    assert sum(1 for _ in p222.edges()) == 12 * 1 + 16 * 3


def test_build_321(p321):
    assert p321.size == 22
    assert p321.rank_sizes() == [1, 12, 9]


@pytest.mark.parametrize("params", SMALL + [(3, 2, 2)])
def test_counting_passes(params):
    rep = verify_counting(poset(*params))
    assert rep.passed, rep.failures
    assert rep.connected and rep.graded and rep.transposed


def test_counting_degrees_222(p222):
    ranks = verify_counting(p222).ranks
    assert [r["down_degree"]["actual"] for r in ranks] == [[0], [1], [3]]
    assert [r["up_degree"]["actual"] for r in ranks] == [[12], [4], [0]]


def _drop_edge(p: PosetInstance, y: int, z: int) -> PosetInstance:
    up = list(p.covers_up)
    down = list(p.covers_down)
    up[y] = tuple(v for v in up[y] if v != z)
    down[z] = tuple(v for v in down[z] if v != y)
    return dataclasses.replace(p, covers_up=tuple(up), covers_down=tuple(down))


def test_missing_edge_is_reported_per_vertex(p222):
    y, z = next(iter(p222.edges()))
    rep = verify_counting(_drop_edge(p222, y, z))
    assert not rep.passed
    bad = {(f["vertex"], f["kind"]) for f in rep.failures if "vertex" in f}
    assert bad == {(y, "up_degree"), (z, "down_degree")}


def test_one_sided_edge_breaks_transposition(p222):
    y, z = next(iter(p222.edges()))
    up = list(p222.covers_up)
    up[y] = tuple(v for v in up[y] if v != z)
    rep = verify_counting(dataclasses.replace(p222, covers_up=tuple(up)))
    assert not rep.transposed and not rep.passed


def test_json_round_trip(p222):
    doc = json.loads(json.dumps(p222.to_json()))
    back = PosetInstance.from_json(doc)
    assert back == p222


def test_rank_slice_outside_range(p222):
    assert p222.rank_slice(-1) == slice(0, 0)
    assert p222.rank_slice(3) == slice(0, 0)


def test_cap_is_forwarded():
    from attenuated.gflinalg import CapacityError

    with pytest.raises(CapacityError):
        build_poset(2, 2, 2, cap=10)
