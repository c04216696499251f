import itertools

import networkx as nx
import pytest

from cremona_lattice import cremona
from cremona_lattice.enumeration import (
    ExceptionalSystem,
    Mode,
    census,
    complementary_line,
    degree_range,
    enumerate_exceptional,
    enumerate_exceptional_bounded,
    enumerate_systems,
    h_constraint,
    normalize_system,
    s_class,
    s_constraint,
    s_prime_class,
    scan_classes,
    tabulated_systems,
)
from cremona_lattice.errors import InvalidSystem, LatticeError, NotNormalizable, UnsupportedRank
from cremona_lattice.lattice import Basis, canonical_class, exceptional, line, pair, z2_pair
from cremona_lattice.notation import parse_class

EXCEPTIONAL_COUNTS = {0: 0, 1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}


@pytest.mark.parametrize("k", range(0, 9))
def test_exceptional_counts(k):
    classes = enumerate_exceptional(k)
    assert len(classes) == EXCEPTIONAL_COUNTS[k]
    K = canonical_class(Basis.cp2(k))
    assert all(pair(c, c) == -1 and pair(K, c) == -1 for c in classes)
    assert list(classes) == sorted(classes)


def test_cubic_surface_lines():
    classes = set(enumerate_exceptional(6))
    assert parse_class("2H-E1-E2-E3-E4-E5", Basis.cp2(6)) in classes
    assert parse_class("H-E1-E2", Basis.cp2(6)) in classes
    # each line meets exactly ten others
    for c in classes:
        assert sum(pair(c, d) == 1 for d in classes) == 10


def test_rank_nine_needs_a_bound():
    with pytest.raises(UnsupportedRank):
        enumerate_exceptional(9)
    res = enumerate_exceptional_bounded(9, 3)
    assert not res.complete
    assert parse_class("3H-2E1-E2-...-E7", Basis.cp2(9)) in res.classes


def test_degree_range():
    # exceptional classes on CP2Blowup(8) have degrees 0..6
    lo, hi = degree_range(8, -1, -1)
    assert lo <= 0 and hi >= 6 and hi - lo < 10
    assert degree_range(9, -1, -1) is None
    # orthogonality to S' makes CP2Blowup(9) finite
    assert degree_range(9, -1, -1, (s_prime_class(8),)) is not None


def test_scan_with_cap_flags_incomplete():
    res = scan_classes(4, -1, -1, degree_cap=0)
    assert not res.complete
    assert all(c.degree == 0 for c in res.classes)


def test_system_validation():
    B = Basis.cp2(2)
    with pytest.raises(InvalidSystem):
        ExceptionalSystem(B, (exceptional(1, B), parse_class("H-E1-E2")))
    with pytest.raises(InvalidSystem):
        ExceptionalSystem(B, (line(B),))
    with pytest.raises(InvalidSystem):
        ExceptionalSystem(B, (exceptional(1, B),), size=2)
    s = ExceptionalSystem(B, (exceptional(2, B), exceptional(1, B)))
    assert s.classes == tuple(sorted(s.classes))


def _clique_count(k, constraint, mode, size):
    cands = [
        c
        for c in enumerate_exceptional(k)
        if (z2_pair(c, constraint) == 0 if mode is Mode.Z2_ORTHOGONAL else pair(c, constraint) == 0)
    ]
    g = nx.Graph()
    g.add_nodes_from(range(len(cands)))
    g.add_edges_from((i, j) for i, j in itertools.combinations(range(len(cands)), 2) if pair(cands[i], cands[j]) == 0)
    return sum(1 for q in nx.enumerate_all_cliques(g) if len(q) == size)


@pytest.mark.parametrize("k", range(1, 8))
def test_systems_agree_with_clique_enumeration(k):
    got = enumerate_systems(k, h_constraint(k), Mode.Z2_ORTHOGONAL, k)
    assert len(got) == _clique_count(k, h_constraint(k), Mode.Z2_ORTHOGONAL, k)


def test_k8_count_matches_clique_enumeration():
    got = enumerate_systems(8, h_constraint(8), Mode.Z2_ORTHOGONAL, 8)
    assert len(got) == _clique_count(8, h_constraint(8), Mode.Z2_ORTHOGONAL, 8) == 128


def test_parallel_enumeration_matches_serial():
    serial = enumerate_systems(7, h_constraint(7), Mode.Z2_ORTHOGONAL, 7, workers=1)
    parallel = enumerate_systems(7, h_constraint(7), Mode.Z2_ORTHOGONAL, 7, workers=2)
    assert serial == parallel


def test_constraint_classes():
    assert s_class(2) == parse_class("-H+2E1-E2", Basis.cp2(3))
    assert s_prime_class(4) == parse_class("E1-E2-E3-E4", Basis.cp2(5))
    assert s_constraint(3) == s_class(3) and s_constraint(4) == s_prime_class(4)
    for z in (s_class(5), s_prime_class(5)):
        assert pair(z, z) == -4 and pair(canonical_class(z.basis), z) == 2
    with pytest.raises(LatticeError):
        s_prime_class(2)


def test_census_small_rows():
    rows = census(range(1, 8))
    assert [r.counts for r in rows] == [(1, 1)] * 5 + [(2, 2), (8, 8)]


@pytest.mark.parametrize("k", range(1, 8))
@pytest.mark.parametrize("side", ["h", "s"])
def test_tabulated_systems_match_enumeration(k, side):
    if side == "h":
        enumerated = enumerate_systems(k, h_constraint(k), Mode.Z2_ORTHOGONAL, k)
    else:
        enumerated = enumerate_systems(k + 1, s_constraint(k), Mode.Z_ORTHOGONAL, k)
    assert set(tabulated_systems(k, side)) == set(enumerated)


@pytest.mark.parametrize("side", ["h", "s"])
def test_tabulated_k8_systems_are_a_strict_subset(side):
    # the 29 listed systems are genuine, but enumeration finds 128
    listed = set(tabulated_systems(8, side))
    if side == "h":
        enumerated = set(enumerate_systems(8, h_constraint(8), Mode.Z2_ORTHOGONAL, 8))
    else:
        enumerated = set(enumerate_systems(9, s_constraint(8), Mode.Z_ORTHOGONAL, 8))
    assert len(listed) == 29 and listed < enumerated and len(enumerated) == 128


def test_normalize_standard_and_reflected():
    B = Basis.cp2(6)
    std = ExceptionalSystem(B, tuple(exceptional(i, B) for i in range(1, 7)))
    assert normalize_system(std) == ()
    for s in tabulated_systems(6, "h"):
        cert = normalize_system(s)
        assert {cremona.replay(c, cert) for c in s} == set(std.classes)


@pytest.mark.parametrize("k", [2, 5, 7])
def test_normalize_every_full_system(k):
    B = Basis.cp2(k)
    target = {exceptional(i, B) for i in range(1, k + 1)}
    for s in enumerate_systems(k, h_constraint(k), Mode.Z2_ORTHOGONAL, k):
        cert = normalize_system(s)
        assert {cremona.replay(c, cert) for c in s} == target


def test_complementary_line():
    B = Basis.cp2(3)
    std = ExceptionalSystem(B, tuple(exceptional(i, B) for i in range(1, 4)))
    assert complementary_line(std) == line(B)


def test_normalize_rejects_partial_systems():
    B = Basis.cp2(3)
    with pytest.raises(NotNormalizable):
        normalize_system(ExceptionalSystem(B, (exceptional(1, B),)))


def test_size_out_of_range():
    with pytest.raises(LatticeError):
        enumerate_systems(2, h_constraint(2), Mode.Z2_ORTHOGONAL, 3)
