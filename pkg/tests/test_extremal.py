from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qnchroma import cube
from qnchroma.colourings import Colouring, gen_layered, gen_random
from qnchroma.extremal import (
    adversary_climb, automorphisms, canonical_indices, colouring_from_index,
    conjecture_scan, sampled_scan,
)
from qnchroma.geodesics import antipodal_profile


@pytest.mark.parametrize("n,size", [(1, 2), (2, 8), (3, 48)])
def test_automorphism_group_size(n, size):
    perms = automorphisms(n)
    assert perms.shape == (size, cube.num_edges(n))
    # Q_1 has one edge, so its two automorphisms act the same on edges
    assert len({p.tobytes() for p in perms}) == (size if n > 1 else 1)
    for p in perms:
        assert sorted(p.tolist()) == list(range(cube.num_edges(n)))


def _edge_sets(n):
    return [set(cube.edge_endpoints(e, n)) for e in range(cube.num_edges(n))]


def test_automorphisms_preserve_adjacency():
    n = 3
    ends = _edge_sets(n)
    for p in automorphisms(n):
        for a in range(len(ends)):
            for b in range(a + 1, len(ends)):
                assert bool(ends[a] & ends[b]) == bool(ends[p[a]] & ends[p[b]])


@given(st.integers(0, 2**32))
@settings(max_examples=10, deadline=None)
def test_profile_multiset_is_automorphism_invariant(seed):
    n = 3
    c = gen_random(n, 2, seed)
    base = sorted(antipodal_profile(c, "path").tolist())
    for p in automorphisms(n)[::7]:
        moved = np.empty_like(c.data)
        moved[p] = c.data
        assert sorted(antipodal_profile(Colouring(n, 2, moved), "path").tolist()) == base


def _orbit_count(n):
    # orbits by explicit closure, without the minimum-image trick
    e = cube.num_edges(n)
    perms = automorphisms(n)
    seen = set()
    orbits = 0
    for code in range(1 << e):
        if code in seen:
            continue
        orbits += 1
        bits = [(code >> j) & 1 for j in range(e)]
        for p in perms:
            img = [0] * e
            for j in range(e):
                img[p[j]] = bits[j]
            a = sum(b << j for j, b in enumerate(img))
            seen.add(a)
            seen.add(a ^ ((1 << e) - 1))
    return orbits


@pytest.mark.parametrize("n", [2, 3])
def test_canonical_count_matches_orbit_closure(n):
    assert canonical_indices(n).size == _orbit_count(n)


def test_scan_n2_and_n3():
    res = conjecture_scan(2)
    assert (res.count, res.worst_min_cost) == (16, 1)
    full = conjecture_scan(3)
    assert full.count == 4096 and full.worst_min_cost == 1
    assert full.histogram == {0: 4006, 1: 90}
    half = conjecture_scan(3, symmetry=True)
    assert half.count == 2048
    assert half.histogram == {k: v // 2 for k, v in full.histogram.items()}
    canon = conjecture_scan(3, canonical=True)
    assert canon.count == 76 and canon.worst_min_cost == 1
    assert conjecture_scan(3, mode="geodesic").worst_min_cost == 1


def test_scan_argmax_reaches_worst():
    res = conjecture_scan(3)
    assert antipodal_profile(res.argmax, "path").min() == res.worst_min_cost
    assert res.as_dict()["worstMinCost"] == 1


@pytest.mark.parametrize("code", [0, 1, 777, 4095])
def test_colouring_from_index_bits(code):
    c = colouring_from_index(3, code)
    assert [(code >> e) & 1 for e in range(12)] == c.data.tolist()
    fixed = colouring_from_index(3, code & 2047, fixed_edge=0)
    assert fixed.data[0] == 0
    assert fixed.data[1:].tolist() == [(code >> e) & 1 for e in range(11)]


def test_scan_limits():
    with pytest.raises(ValueError):
        conjecture_scan(4)
    with pytest.raises(ValueError):
        conjecture_scan(3, mode="walk")


def test_sampled_scan_is_deterministic_and_scores_includes(tmp_path):
    layered = gen_layered(4)
    a = sampled_scan(4, 3000, seed=5, include=[layered], results_dir=tmp_path / "out")
    b = sampled_scan(4, 3000, seed=5, include=[layered])
    assert a.as_dict() == {**b.as_dict()}
    assert a.count == 3001
    assert a.included == [int(antipodal_profile(layered, "path").min())] == [0]
    assert a.worst_min_cost <= 1 and not a.candidates
    assert sum(a.histogram.values()) == 3001
    assert not (tmp_path / "out").exists()


def test_sampled_scan_matches_profiles():
    res = sampled_scan(3, 500, seed=1, mode="geodesic")
    assert res.worst_min_cost == int(antipodal_profile(res.argmax).min())


def test_climb_trace_and_value():
    res = adversary_climb(4, budget=150, seed=2)
    assert res.trace == sorted(res.trace)
    assert res.value >= res.start_value
    prof = antipodal_profile(res.colouring, "path")
    assert res.value == Fraction(int(prof.sum()), prof.size)
    again = adversary_climb(4, budget=150, seed=2)
    assert again.colouring == res.colouring and again.trace == res.trace


def test_climb_from_layered_never_drops():
    res = adversary_climb(4, budget=60, seed=0, start=gen_layered(4))
    assert res.start_value == Fraction(7, 8)
    assert res.value >= Fraction(7, 8)


def test_climb_sampled_sources_above_exact_size():
    res = adversary_climb(9, budget=5, seed=0, sample_sources=16)
    assert res.evaluations >= 6
    with pytest.raises(ValueError):
        adversary_climb(11, budget=1)


def test_path_mode_never_worse_than_geodesic():
    for kw in ({}, {"symmetry": True}):
        path = conjecture_scan(3, "path", **kw)
        geo = conjecture_scan(3, "geodesic", **kw)
        assert path.worst_min_cost <= geo.worst_min_cost
        assert sum(path.histogram.values()) == path.count
    a = sampled_scan(4, 2000, seed=9, mode="path")
    b = sampled_scan(4, 2000, seed=9, mode="geodesic")
    assert a.worst_min_cost <= b.worst_min_cost
