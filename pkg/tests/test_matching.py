import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiflow import _kernels
from equiflow.catalog import NAMES, catalog
from equiflow.complex import build_complex, ensure_regular
from equiflow.groups import build_group
from equiflow.pathfield import Matching, build_matching, cancel, check_matching, morse_table
from equiflow.stratify import strata
from gen import random_gcomplex


def _exhaustive_acyclic(K, partner) -> bool:
    """Cycle check by brute force on the modified Hasse diagram (matched edges reversed)."""
    n = len(K)
    edges = {i: [] for i in range(n)}
    for t in range(n):
        for f in K.faces(t):
            if partner[t] == f:
                edges[f].append(t)
            else:
                edges[t].append(f)
    colour = [0] * n

    def visit(u):
        colour[u] = 1
        for v in edges[u]:
            if colour[v] == 1 or (colour[v] == 0 and not visit(v)):
                return False
        colour[u] = 2
        return True

    return all(colour[u] or visit(u) for u in range(n))


def test_single_vertex():
    K = build_complex(1, [[0]], build_group([[0]]), [[0]])
    m = build_matching(strata(K))
    assert m.pairs == [] and m.critical == [0]


def test_circle3_greedy_is_minimal():
    s = strata(catalog("circle3"))
    m = build_matching(s)
    assert m.critical_by_dim() == [1, 1]
    assert cancel(m, s).partner.tolist() == m.partner.tolist()


def test_wasteful_circle3_matching_is_reduced():
    K = catalog("circle3")
    s = strata(K)
    m = Matching.from_pairs(K, [((0,), (0, 1))])
    assert len(m.critical) == 4 and check_matching(m, s) == []
    reduced = cancel(m, s)
    assert len(reduced.critical) == 2 and reduced.critical_by_dim() == [1, 1]
    assert check_matching(reduced, s) == []
    assert _exhaustive_acyclic(K, reduced.partner)


def test_free_circle_critical_cells_are_whole_orbits():
    K = catalog("circle4-anti")
    s = strata(K)
    m = build_matching(s)
    crit = set(m.critical)
    assert all(set(K.orbit(i)) <= crit for i in crit)
    assert check_matching(m, s) == []


def test_torus_reaches_betti_bound_after_cancel():
    s = strata(catalog("torus7"))
    m = cancel(build_matching(s), s)
    row, = morse_table(m, s)
    assert row.betti_sum == 4 and row.critical >= 4
    assert row.gap == row.critical - 4


def test_from_pairs_rejects_double_use():
    K = catalog("circle3")
    with pytest.raises(ValueError):
        Matching.from_pairs(K, [((0,), (0, 1)), ((1,), (0, 1))])


def test_check_matching_reports_problems():
    K = catalog("circle4-anti")
    s = strata(K)
    # one pair without its translate
    m = Matching.from_pairs(K, [((0,), (0, 1))])
    assert any("invariant" in p for p in check_matching(m, s))
    # a closed gradient path around the circle
    C = catalog("circle3")
    cyc = Matching.from_pairs(C, [((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))])
    assert any("closed gradient path" in p for p in check_matching(cyc, strata(C)))


# ---------------------------------------------------------------- properties

def _check(K):
    s = strata(K)
    for m in (build_matching(s), None):
        m = m if m is not None else cancel(build_matching(s), s)
        assert check_matching(m, s) == []
        assert _exhaustive_acyclic(K, m.partner)
        p = m.partner
        for g in range(K.group.order):
            img = K.images[g]
            pairs = {(int(img[a]), int(img[b])) for a, b in m.pairs}
            assert pairs == set(m.pairs)
        for c in s.all_components():
            crit = [i for i in c.open_simplices if p[i] < 0]
            assert sum((-1) ** int(K.dims[i]) for i in crit) == c.chi_c


@pytest.mark.parametrize("name", NAMES)
def test_catalog_matchings(name):
    _check(ensure_regular(catalog(name)))


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_random_matchings(seed):
    K = random_gcomplex(seed, max_simplices=150)
    if K is not None:
        _check(K)


def test_vpath_kernel_backends_agree():
    K = catalog("torus7")
    m = build_matching(strata(K))
    fp, fi, p, d = K.face_ptr, K.face_idx, m.partner, K.dims
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = (int(x) for x in rng.integers(0, len(K), 2))
        assert _kernels.vpath_reaches_py(fp, fi, p, d, a, b) == _kernels.vpath_reaches_nb(fp, fi, p, d, a, b)
