"""Subgroup enumeration against brute force, plus lattice annotations."""

from __future__ import annotations

from itertools import combinations

import pytest

from ecov.errors import LatticeLimitExceeded
from ecov.groups import build_group
from ecov.lattice import (
    Subgroup,
    conjugacy_classes_of_subgroups,
    element_conjugacy_classes,
    enumerate_subgroups,
    generated_subgroup,
    get_lattice,
    is_normal,
    lattice_to_json,
    maximal_subgroups,
    normal_closure,
    normal_subgroups,
    normal_subgroups_direct,
    subgroups_of_order,
)


def brute_force_subgroups(G) -> set[tuple[int, ...]]:
    """Every subset containing the identity that is closed under the product.

    A finite subset closed under multiplication is closed under inverses,
    so this is exactly the subgroup collection.
    """
    n = G.order
    rows = G.rows
    found = {(0,)}
    rest = [g for g in range(n) if g]
    for size in range(1, n):
        for extra in combinations(rest, size):
            cand = {0, *extra}
            if all(rows[a][b] in cand for a in cand for b in cand):
                found.add(tuple(sorted(cand)))
    return found


@pytest.mark.parametrize("spec", ["C6", "D12", "Q8", "A4", "C2xC3", "E(2,3)", "Dic3"])
def test_enumeration_matches_brute_force(grp, spec):
    G = grp(spec)
    L = get_lattice(G)
    assert {s.members for s in L.subgroups} == brute_force_subgroups(G)


@pytest.mark.parametrize(
    "spec,count",
    [
        ("S3", 6),
        ("C6", 4),
        ("E(2,2)", 5),
        ("Q8", 6),
        ("D12", 16),
        ("A4", 10),
        ("S4", 30),
        ("A5", 59),
        ("E(2,4)", 67),
    ],
)
def test_subgroup_counts(grp, spec, count):
    assert len(get_lattice(grp(spec)).subgroups) == count


def test_lagrange_and_canonical_order(grp):
    for spec in ("D12", "S4", "W"):
        G = grp(spec)
        L = get_lattice(G)
        keys = [(s.order, s.members) for s in L.subgroups]
        assert keys == sorted(keys)
        assert all(G.order % s.order == 0 for s in L.subgroups)
        assert L.subgroups[0].members == (0,)
        assert L.subgroups[-1].order == G.order


def test_enumeration_is_deterministic(grp):
    G = grp("S4")
    a = enumerate_subgroups(G)
    b = enumerate_subgroups(G)
    assert [s.members for s in a.subgroups] == [s.members for s in b.subgroups]


def test_lattice_cache_reuses_object(grp):
    G = grp("A4")
    assert get_lattice(G) is get_lattice(G)


def test_lattice_limit_enforced():
    G = build_group("C1600")
    with pytest.raises(LatticeLimitExceeded):
        get_lattice(G)
    assert len(enumerate_subgroups(G, limit=1600).subgroups) == 21  # divisors of 1600


def test_q8_maximal_subgroups(grp):
    G = grp("Q8")
    L = get_lattice(G)
    maxes = maximal_subgroups(L)
    assert [m.order for m in maxes] == [4, 4, 4]
    assert all(is_normal(G, m) for m in maxes)
    # one involution, and every nontrivial subgroup contains it
    central = next(g for g in range(8) if g and G.mul(g, g) == 0)
    assert all(central in s.members for s in L.subgroups if s.order > 1)


def test_normal_subgroups_s4_and_a5(grp):
    L4 = get_lattice(grp("S4"))
    assert sorted(s.order for s in normal_subgroups(L4)) == [1, 4, 12, 24]
    L5 = get_lattice(grp("A5"))
    assert sorted(s.order for s in normal_subgroups(L5)) == [1, 60]


@pytest.mark.parametrize("spec", ["S4", "D12", "A4", "Q8", "C6xC2", "W"])
def test_direct_normal_scan_agrees_with_lattice(grp, spec):
    G = grp(spec)
    L = get_lattice(G)
    direct = {s.members for s in normal_subgroups_direct(G)}
    assert direct == {s.members for s in normal_subgroups(L)}


def test_conjugacy_classes_of_subgroups(grp):
    G = grp("S3")
    L = get_lattice(G)
    classes = conjugacy_classes_of_subgroups(L)
    assert len(classes) == 4  # trivial, the three reflections, rotation, full
    sizes = sorted(len(c) for c in classes)
    assert sizes == [1, 1, 1, 3]
    for cls in classes:
        assert len({s.order for s in cls}) == 1


def test_element_conjugacy_classes_s3(grp):
    classes = element_conjugacy_classes(grp("S3"))
    assert sorted(len(c) for c in classes) == [1, 2, 3]
    assert sum(len(c) for c in classes) == 6


def test_normal_closure_matches_minimal_normal_over(grp):
    for spec, seed_order in (("S4", 2), ("A4", 3), ("D12", 2)):
        G = grp(spec)
        L = get_lattice(G)
        from ecov.groups import element_order

        seed = next(g for g in range(1, G.order) if element_order(G, g) == seed_order)
        closure = normal_closure(G, (seed,))
        assert is_normal(G, closure)
        assert seed in closure.members
        candidates = [
            s
            for s in normal_subgroups(L)
            if seed in s.members
        ]
        assert closure.order == min(s.order for s in candidates)


def test_generated_subgroup(grp):
    G = grp("D12")
    rot = generated_subgroup(G, (1,))
    assert rot.order == 6
    assert rot.members == (0, 1, 2, 3, 4, 5)
    assert generated_subgroup(G, ()).members == (0,)
    full = generated_subgroup(G, (1, 6))
    assert full.order == 12


def test_subgroups_of_order(grp):
    L = get_lattice(grp("D12"))
    assert [s.order for s in subgroups_of_order(L, 6)] == [6, 6, 6]
    assert subgroups_of_order(L, 5) == []


def test_subgroup_value_semantics(grp):
    G = grp("C6")
    a = generated_subgroup(G, (2,))
    b = Subgroup.from_members((0, 2, 4), (2,))
    assert a == b and hash(a) == hash(b)
    trivial = Subgroup.from_members((0,), ())
    assert a.contains(trivial) and not trivial.contains(a)


def test_lattice_json_export(grp):
    G = grp("Q8")
    L = get_lattice(G)
    doc = lattice_to_json(L)
    assert len(doc) == len(L.subgroups)
    assert doc[0] == {
        "order": 1,
        "members": [0],
        "maximal": False,
        "normal": True,
        "class": 0,
    }
    assert all(set(row) == {"order", "members", "maximal", "normal", "class"} for row in doc)
