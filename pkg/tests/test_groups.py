from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiflow.errors import (
    GroupTooLarge,
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotASubgroup,
)
from equiflow.groups import (
    build_group,
    conjugacy_classes,
    conjugate,
    cyclic_group,
    generated_subgroup,
    group_from_permutations,
    isomorphism_name,
    make_subgroup,
    max_group_order,
    normalizer,
    subgroups,
    trivial_subgroup,
    whole_group,
)
from gen import GROUPS

S3_GENS = [[1, 2, 0], [1, 0, 2]]
D4_GENS = [[1, 2, 3, 0], [3, 2, 1, 0]]


def brute_subgroups(G):
    """Every subset containing e and closed under the product."""
    out = []
    others = [g for g in range(G.order) if g != G.identity]
    for k in range(len(others) + 1):
        for rest in combinations(others, k):
            S = {G.identity, *rest}
            if all(G.mul(a, b) in S for a in S for b in S):
                out.append(frozenset(S))
    return out


def test_trivial_table():
    G = build_group([[0]])
    assert G.order == 1 and G.identity == 0
    assert [H.elements for H in subgroups(G)] == [(0,)]
    assert len(conjugacy_classes(G, subgroups(G)).types) == 1


def test_z3_identity_and_inverses():
    G = build_group([[(a + b) % 3 for b in range(3)] for a in range(3)])
    assert G.identity == 0
    assert G.inverses.tolist() == [0, 2, 1]


@pytest.mark.parametrize("table", [[[0, 1], [1, 1]], [[1, 1], [1, 0]], [[0, 0], [1, 1]]])
def test_non_group_tables_rejected(table):
    with pytest.raises((NoInverse, NoIdentity)):
        build_group(table)


def test_malformed_and_non_associative():
    with pytest.raises(MalformedTable):
        build_group([[0, 1], [1]])
    with pytest.raises(MalformedTable):
        build_group([[0, 1, 2], [1, 2, 0]])
    with pytest.raises(MalformedTable):
        build_group([[0, 5], [5, 0]])
    # a Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        build_group(t)


def test_z4_subgroups_and_classes():
    G = cyclic_group(4)
    subs = subgroups(G)
    assert {H.elements for H in subs} == {(0,), (0, 2), (0, 1, 2, 3)}
    cc = conjugacy_classes(G, subs)
    assert [t.representative.elements for t in cc.types] == [(0, 1, 2, 3), (0, 2), (0,)]
    assert all(len(t.conjugates) == 1 for t in cc.types)


def test_s3_subgroups_and_classes():
    G, _ = group_from_permutations(S3_GENS)
    subs = subgroups(G)
    assert sorted(H.order for H in subs) == [1, 2, 2, 2, 3, 6]
    cc = conjugacy_classes(G, subs)
    assert [len(t.conjugates) for t in cc.types] == [1, 1, 3, 1]
    assert [t.order for t in cc.types] == [6, 3, 2, 1]
    two = cc.types[2].representative
    assert normalizer(G, two) == two


def test_d4_center_normalizer():
    G, _ = group_from_permutations(D4_GENS)
    center = [H for H in subgroups(G)
              if H.order == 2 and all(G.mul(h, g) == G.mul(g, h) for h in H for g in range(8))]
    assert len(center) == 1
    assert normalizer(G, center[0]) == whole_group(G)


def test_normalizer_of_whole_group():
    G, _ = group_from_permutations(S3_GENS)
    assert normalizer(G, whole_group(G)) == whole_group(G)


def test_make_subgroup_rejects_non_closed():
    G = cyclic_group(4)
    with pytest.raises(NotASubgroup):
        make_subgroup(G, [0, 1])
    assert generated_subgroup(G, [2]).elements == (0, 2)
    assert trivial_subgroup(G).elements == (0,)


def test_enumeration_bound(monkeypatch):
    monkeypatch.setenv("EQUIFLOW_MAX_GROUP", "3")
    assert max_group_order() == 3
    with pytest.raises(GroupTooLarge):
        subgroups(cyclic_group(4))
    monkeypatch.setenv("EQUIFLOW_MAX_GROUP", "0")
    with pytest.raises(ValueError):
        max_group_order()


def test_isomorphism_names():
    G, _ = group_from_permutations(D4_GENS)
    assert isomorphism_name(G, whole_group(G)) == "D4"
    names = sorted(isomorphism_name(G, H) for H in subgroups(G))
    assert names == ["D4"] + ["Z/2"] * 5 + ["Z/2xZ/2"] * 2 + ["Z/4", "e"]
    S3, _ = group_from_permutations(S3_GENS)
    assert isomorphism_name(S3, whole_group(S3)) == "S3"


# ---------------------------------------------------------------- properties

group_names = st.sampled_from(sorted(GROUPS))


@given(group_names)
@settings(max_examples=30, deadline=None)
def test_enumeration_matches_brute_force(name):
    G, _ = group_from_permutations(GROUPS[name])
    assert {frozenset(H.elements) for H in subgroups(G)} == set(brute_subgroups(G))


@given(group_names)
@settings(max_examples=30, deadline=None)
def test_class_structure(name):
    G, _ = group_from_permutations(GROUPS[name])
    subs = subgroups(G)
    listed = set(subs)
    for H in subs:
        for g in range(G.order):
            assert conjugate(G, H, g) in listed
    cc = conjugacy_classes(G, subs)
    assert sum(len(t.conjugates) for t in cc.types) == len(subs)
    for t in cc.types:
        assert len(t.conjugates) == G.order // normalizer(G, t.representative).order
    n = len(cc.types)
    leq = np.asarray(cc.leq)
    for i in range(n):
        for j in range(n):
            if leq[i, j] and leq[j, i]:
                assert i == j
            # larger types come first: (H_i) <= (H_j) forces j <= i
            if leq[i, j]:
                assert j <= i
