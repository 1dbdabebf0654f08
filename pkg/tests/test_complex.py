import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiflow.catalog import CORE_NAMES, NAMES, catalog
from equiflow.complex import (
    barycentric_subdivision,
    build_complex,
    ensure_regular,
    orbit_closure,
    regularize,
    subcomplex,
    subdivide_subcomplex,
)
from equiflow.errors import (
    DuplicateVertexInSimplex,
    EmptyComplex,
    InvalidVertex,
    MalformedAction,
    NotFaceClosed,
    NotHomomorphism,
    NotInvariant,
    NotSimplicial,
    SimplexNotInComplex,
    UnknownCatalogName,
)
from equiflow.groups import build_group, cyclic_group
from gen import random_gcomplex
import oracle

TRIVIAL = build_group([[0]])


def test_triangle_boundary():
    K = build_complex(3, [[0, 1], [1, 2], [0, 2]], TRIVIAL, [[0, 1, 2]])
    assert K.f_vector == [3, 3] and K.dimension == 1 and K.regular


def test_antipodal_octahedron_is_regular():
    K = catalog("sphere-oct-anti")
    assert len(K) == 26 and K.regular
    assert all(K.pointwise_stabilizer(K.simplices[i]).order == 1 for i in range(len(K)))
    assert regularize(K) == (K, 0)


def test_square_swap_is_irregular_and_fixed_by_one_subdivision():
    K = catalog("circle4-swap")
    assert not K.regular
    assert K.setwise_stabilizer((0, 1)).order == 2
    assert K.pointwise_stabilizer((0, 1)).order == 1
    sd = barycentric_subdivision(K)
    assert sd.regular
    R, rounds = regularize(K)
    assert rounds == 1 and R.f_vector == sd.f_vector
    # the barycentre of the swapped edge is a fixed vertex
    bary = K.id_of((0, 1))
    assert sd.pointwise_stabilizer((bary,)).order == 2


def test_subdivision_counts():
    edge = build_complex(2, [[0, 1]], TRIVIAL, [[0, 1]])
    assert barycentric_subdivision(edge).f_vector == [3, 2]
    hexagon = barycentric_subdivision(catalog("circle3"))
    assert hexagon.f_vector == [6, 6] and hexagon.euler_characteristic == 0


def test_hexagon_reflection_fixes_vertex_zero():
    K = catalog("circle6-refl")
    assert K.pointwise_stabilizer((0,)).order == 2
    assert K.pointwise_stabilizer((3,)).order == 2
    assert K.pointwise_stabilizer((1,)).order == 1


def test_trivial_group_unchanged_by_regularize():
    K = catalog("torus7")
    assert ensure_regular(K) is K


@pytest.mark.parametrize("name,f,chi", [
    ("circle3", [3, 3], 0), ("sphere-oct", [6, 12, 8], 2), ("torus7", [7, 21, 14], 0),
    ("two-spheres", [12, 24, 16], 4),
])
def test_catalog_counts(name, f, chi):
    K = catalog(name)
    assert K.f_vector == f and K.euler_characteristic == chi


def test_catalog_core_names():
    assert CORE_NAMES == ("circle3", "circle3-rot", "circle6-refl", "circle4-anti", "sphere-oct",
                          "sphere-oct-anti", "sphere-oct-refl", "torus7", "torus7-rot", "two-spheres")
    with pytest.raises(UnknownCatalogName):
        catalog("klein-bottle")


def test_build_errors():
    with pytest.raises(EmptyComplex):
        build_complex(0, [], TRIVIAL, [[]])
    with pytest.raises(InvalidVertex):
        build_complex(2, [[0, 2]], TRIVIAL, [[0, 1]])
    with pytest.raises(DuplicateVertexInSimplex):
        build_complex(2, [[0, 0]], TRIVIAL, [[0, 1]])
    Z2 = cyclic_group(2)
    with pytest.raises(MalformedAction):
        build_complex(2, [[0, 1]], Z2, [[0, 1]])
    with pytest.raises(MalformedAction):
        build_complex(2, [[0, 1]], Z2, [[0, 1], [0, 0]])
    with pytest.raises(NotSimplicial):
        build_complex(3, [[0, 1]], Z2, [[0, 1, 2], [0, 2, 1]])
    Z3 = cyclic_group(3)
    with pytest.raises(NotHomomorphism):
        build_complex(3, [[0, 1], [1, 2], [0, 2]], Z3, [[0, 1, 2], [1, 2, 0], [1, 2, 0]])


def test_subcomplex_helpers():
    K = catalog("two-spheres")
    with pytest.raises(NotFaceClosed):
        subcomplex(K, [(0, 2)])
    A = subcomplex(K, [(0, 2)], close=True)
    assert len(A) == 3 and A.dimension == 1
    with pytest.raises(SimplexNotInComplex):
        K.id_of((0, 1))
    R = catalog("circle3-rot")
    with pytest.raises(NotInvariant):
        subcomplex(R, [(0,)], require_invariant=True)
    assert len(orbit_closure(R, [(0,)])) == 3


def test_subdivided_subcomplex_covers_the_original():
    K = catalog("sphere-oct-refl")
    A = orbit_closure(K, [(0, 2)])
    sd = barycentric_subdivision(K)
    B = subdivide_subcomplex(A, sd)
    assert B.is_invariant()
    assert sum(1 if len(sd.simplices[i]) % 2 else -1 for i in B.simplices) == \
        sum(1 if len(K.simplices[i]) % 2 else -1 for i in A.simplices)


# ---------------------------------------------------------------- properties

def _check_invariants(K):
    stored = set(K.simplices)
    for s in K.simplices:
        for k in range(len(s)):
            if len(s) > 1:
                assert s[:k] + s[k + 1:] in stored
    # images agree with vertexwise action
    for g in range(K.group.order):
        for i, s in enumerate(K.simplices):
            assert K.simplices[K.images[g, i]] == tuple(sorted(int(K.action[g, v]) for v in s))
    sd = barycentric_subdivision(K)
    assert sd.euler_characteristic == K.euler_characteristic
    # acting on barycentres = acting on simplices, and chains go to chains
    assert np.array_equal(sd.action, K.images)
    for g in range(K.group.order):
        for j, chain in enumerate(sd.simplices):
            moved = tuple(sorted(int(K.images[g, c]) for c in chain))
            assert sd.simplices[sd.images[g, j]] == moved
    if K.regular:
        for s in K.simplices:
            assert K.pointwise_stabilizer(s) == K.setwise_stabilizer(s)
    assert K.regular == oracle.Raw.of(K).is_regular()


@pytest.mark.parametrize("name", NAMES)
def test_catalog_invariants(name):
    _check_invariants(catalog(name))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_random_complex_invariants(seed):
    K = random_gcomplex(seed, max_simplices=120)
    if K is not None:
        _check_invariants(K)
