import numpy as np
import pytest

from equiflow.catalog import NAMES, catalog
from equiflow.complex import ensure_regular, full_subcomplex, orbit_closure, subcomplex
from equiflow.errors import NotInvariant
from equiflow.pathfield import (
    DisplacementMap,
    all_chains,
    build_displacement,
    connected_components,
    induces_identity_on_homology,
    verify_displacement,
)

YES = ("circle3", "circle3-rot", "circle4-anti", "torus7", "torus7-rot")


def test_identity_map_is_valid_and_totally_singular():
    K = catalog("sphere-oct")
    cert = verify_displacement(K, DisplacementMap.identity(K))
    assert cert.passed and len(cert.singular) == len(K) and not cert.fixed_point_free


def test_whole_fixed_set_gives_identity():
    K = catalog("circle3-rot")
    F = build_displacement(K, full_subcomplex(K))
    assert F.image.tolist() == list(range(len(K)))
    assert [e["strategy"] for e in F.strategies] == ["fixed-set"]


def test_circle3_rotation_strategy():
    K = catalog("circle3")
    F = build_displacement(K)
    assert [e["strategy"] for e in F.strategies] == ["s2"]
    cert = verify_displacement(K, F)
    assert cert.passed and cert.singular == [] and cert.flagged_chains == 0
    # 3 + 3 single simplices and 6 vertex<edge chains; 6 of them are maximal
    assert cert.n_chains == 12
    assert int((all_chains(K) >= 0).all(axis=1).sum()) == 6


def test_torus7_search_finds_a_shift():
    K = catalog("torus7")
    F = build_displacement(K)
    assert [e["strategy"] for e in F.strategies] == ["s3"]
    cert = verify_displacement(K, F)
    assert cert.fixed_point_free
    # vertex part is a fixed-point-free automorphism acting trivially on homology
    vmap = {v: K.simplices[F.image[K.id_of((v,))]][0] for v in range(7)}
    assert all(vmap[v] != v for v in vmap)
    assert induces_identity_on_homology(K, list(range(len(K))), vmap)


def test_shift_is_identity_on_homology_but_antipode_is_not():
    T = catalog("torus7")
    shift = {v: (v + 1) % 7 for v in range(7)}
    assert induces_identity_on_homology(T, list(range(len(T))), shift)
    S = catalog("sphere-oct")
    antipode = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    assert not induces_identity_on_homology(S, list(range(len(S))), antipode)


def test_equivariance_violation_fails():
    K = catalog("circle3-rot")
    image = build_displacement(K).image.copy()
    image[K.id_of((0,))] = K.id_of((0,))
    cert = verify_displacement(K, DisplacementMap(K, image))
    assert not cert.passed
    assert any(p.startswith("not equivariant: g=") for p in cert.problems)


def test_partial_and_non_monotone_maps_fail():
    K = catalog("circle3")
    image = np.arange(len(K))
    image[0] = -1
    assert "not total" in verify_displacement(K, DisplacementMap(K, image)).problems[0]
    image = np.arange(len(K))
    # send vertex 0 to vertex 2 while keeping edge {0,1}: images {2} and {0,1} are incomparable
    image[K.id_of((0,))] = K.id_of((2,))
    assert "chain-monotone" in verify_displacement(K, DisplacementMap(K, image)).problems[0]


def test_fixed_set_is_held_and_rest_moves():
    K = catalog("two-spheres")
    A = subcomplex(K, [(0,)])
    F = build_displacement(K, A)
    assert [e["strategy"] for e in F.strategies] == ["fixed-set", "s4"]
    R = catalog("circle3-rot")
    with pytest.raises(NotInvariant):
        build_displacement(R, subcomplex(R, [(0,)]))
    with pytest.raises(ValueError):
        build_displacement(R, subcomplex(catalog("circle3-rot"), [(0,)]))


def test_singular_orbits_grouped_by_component():
    K = catalog("circle6-refl")
    cert = verify_displacement(K, build_displacement(K))
    assert cert.passed
    assert {(tuple(g["isotropy"]), g["singular_orbits"]) for g in cert.singular_orbits} == \
        {((0, 1), 1), ((0,), 5)}


def test_connected_components():
    assert [len(c) for c in connected_components(catalog("two-spheres"))] == [26, 26]


@pytest.mark.parametrize("name", NAMES)
def test_displacement_is_equivariant_everywhere(name):
    K = ensure_regular(catalog(name))
    F = build_displacement(K)
    cert = verify_displacement(K, F)
    assert cert.passed, cert.problems
    for g in range(K.group.order):
        img = K.images[g]
        assert np.array_equal(F.image[img], img[F.image])
    if name in YES:
        assert cert.fixed_point_free


@pytest.mark.parametrize("name", YES)
def test_fixed_set_respected(name):
    K = ensure_regular(catalog(name))
    A = orbit_closure(K, [(0,)])
    F = build_displacement(K, A)
    assert all(F.image[i] == i for i in A.simplices)
    assert verify_displacement(K, F).passed
