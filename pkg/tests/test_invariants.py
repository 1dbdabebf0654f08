import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiflow.catalog import NAMES, catalog
from equiflow.complex import Subcomplex, barycentric_subdivision, build_complex, ensure_regular, subcomplex
from equiflow.groups import build_group, conjugate, trivial_subgroup, whole_group
from equiflow.invariants import (
    abs_chi,
    additivity_defect,
    alternating_count,
    betti,
    boundary_rank,
    chi_subcomplex,
    euler_report,
)
from equiflow.stratify import strata
from gen import random_gcomplex
import oracle


def test_chi_values():
    K = catalog("sphere-oct")
    assert chi_subcomplex(Subcomplex(K, frozenset())) == 0
    assert chi_subcomplex(subcomplex(K, range(len(K)))) == 2
    T = catalog("torus7")
    assert chi_subcomplex(subcomplex(T, range(len(T)))) == 0


def test_alternating_counts_of_open_pieces():
    assert alternating_count([0]) == 1
    assert alternating_count([0, 0, 1, 1, 1]) == -1
    assert alternating_count([0] + [1] * 4 + [2] * 4) == 1


def test_abs_chi_values():
    s = strata(catalog("circle3-rot"))
    assert abs_chi(s, trivial_subgroup(s.complex.group)) == 0
    s = strata(catalog("circle6-refl"))
    G = s.complex.group
    assert abs_chi(s, whole_group(G)) == 2 and abs_chi(s, trivial_subgroup(G)) == 2
    s = strata(catalog("sphere-oct-anti"))
    assert abs_chi(s, trivial_subgroup(s.complex.group)) == 2


def test_betti_values():
    point = build_complex(1, [[0]], build_group([[0]]), [[0]])
    assert betti(subcomplex(point, [0])) == [1]
    c3 = catalog("circle3")
    assert betti(subcomplex(c3, range(len(c3)))) == [1, 1]
    T = catalog("torus7")
    full = subcomplex(T, range(len(T)))
    assert [boundary_rank(full, d) for d in (1, 2)] == [6, 13]
    assert betti(full) == [1, 2, 1]
    assert betti(Subcomplex(T, frozenset())) == []


def test_euler_report_circle6_refl():
    rep = euler_report(strata(catalog("circle6-refl")), with_betti=True)
    assert rep.chi == 0
    assert [(r.orbit_type.order, r.abs_chi, [c.chi_c for c in r.components]) for r in rep.rows] == \
        [(2, 2, [1, 1]), (1, 2, [-1, -1])]
    assert [c.betti for c in rep.rows[0].components] == [[1], [1]]


# ---------------------------------------------------------------- properties

def _random_subcomplex(K, rng):
    picks = rng.sample(range(len(K)), rng.randint(1, max(1, len(K) // 3)))
    return subcomplex(K, picks, close=True)


def _check_euler_poincare(L):
    b = betti(L)
    assert chi_subcomplex(L) == sum((-1) ** i * x for i, x in enumerate(b))
    ref = oracle.betti([frozenset(L.parent.simplices[i]) for i in L.simplices])
    assert b == ref


@pytest.mark.parametrize("name", NAMES)
def test_catalog_euler_poincare_and_additivity(name):
    K = ensure_regular(catalog(name))
    _check_euler_poincare(subcomplex(K, range(len(K))))
    s = strata(K)
    for H in s.strata:
        assert additivity_defect(s, H) == 0
        _check_euler_poincare(s.fixed(H))
        for c in s.components(H):
            _check_euler_poincare(c.closure)
        for g in range(K.group.order):
            assert abs_chi(s, conjugate(K.group, H, g)) == abs_chi(s, H)


@pytest.mark.parametrize("name", NAMES)
def test_subdivision_preserves_euler_data(name):
    K = ensure_regular(catalog(name))
    sd = barycentric_subdivision(K)

    def summary(X):
        s = strata(X)
        return [(t.representative.elements, sorted(c.chi_c for c in s.components(t.representative)),
                 abs_chi(s, t.representative)) for t in s.orbit_types]

    assert summary(K) == summary(sd)


@given(st.integers(0, 10_000), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_random_subcomplex_euler_poincare(seed, pick):
    K = random_gcomplex(seed, max_simplices=150)
    if K is None:
        return
    _check_euler_poincare(_random_subcomplex(K, random.Random(pick)))
