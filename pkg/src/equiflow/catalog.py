"""Named, hand-checkable example G-complexes."""
from __future__ import annotations

import numpy as np

from .complex import GComplex, build_complex, ensure_regular
from .errors import UnknownCatalogName
from .groups import build_group, cyclic_group

# octahedron: opposite vertex pairs (0,1), (2,3), (4,5)
OCTAHEDRON = [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)]
# 7-vertex (Moebius) torus
TORUS7 = ([[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
          + [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)])


def _cycle(n):
    return [[i, (i + 1) % n] for i in range(n)]


def _trivial(n_vertices, tops):
    return build_complex(n_vertices, tops, build_group([[0]]), [list(range(n_vertices))])


def _cyclic(n_vertices, tops, generator):
    """Action of Z/n whose element k acts as ``generator`` composed k times."""
    gen = np.asarray(generator)
    powers = [np.arange(n_vertices)]
    while True:
        nxt = gen[powers[-1]]
        if np.array_equal(nxt, powers[0]):
            break
        powers.append(nxt)
    return build_complex(n_vertices, tops, cyclic_group(len(powers)), np.array(powers))


def _circle3():
    return _trivial(3, _cycle(3))


def _circle3_rot():
    return _cyclic(3, _cycle(3), [1, 2, 0])


def _circle6_refl():
    return _cyclic(6, _cycle(6), [(-i) % 6 for i in range(6)])


def _circle4_anti():
    return _cyclic(4, _cycle(4), [2, 3, 0, 1])


def _circle4_swap():
    # reflection swapping the ends of edges {0,1} and {2,3}; not regular
    return _cyclic(4, _cycle(4), [1, 0, 3, 2])


def _sphere_oct():
    return _trivial(6, OCTAHEDRON)


def _sphere_oct_anti():
    return _cyclic(6, OCTAHEDRON, [1, 0, 3, 2, 5, 4])


def _sphere_oct_refl():
    # swaps the poles 0, 1 and fixes the equatorial square 2-4-3-5
    return ensure_regular(_cyclic(6, OCTAHEDRON, [1, 0, 2, 3, 4, 5]))


def _sphere_oct_rot4():
    # quarter turn about the 0-1 axis
    return _cyclic(6, OCTAHEDRON, [0, 1, 4, 5, 3, 2])


def _torus7():
    return _trivial(7, TORUS7)


def _torus7_rot():
    return _cyclic(7, TORUS7, [(i + 1) % 7 for i in range(7)])


def _two_spheres():
    return _trivial(12, OCTAHEDRON + [[v + 6 for v in s] for s in OCTAHEDRON])


_BUILDERS = {
    "circle3": _circle3,
    "circle3-rot": _circle3_rot,
    "circle6-refl": _circle6_refl,
    "circle4-anti": _circle4_anti,
    "sphere-oct": _sphere_oct,
    "sphere-oct-anti": _sphere_oct_anti,
    "sphere-oct-refl": _sphere_oct_refl,
    "torus7": _torus7,
    "torus7-rot": _torus7_rot,
    "two-spheres": _two_spheres,
    # extras beyond the core ten
    "circle4-swap": _circle4_swap,
    "sphere-oct-rot4": _sphere_oct_rot4,
}

CORE_NAMES = tuple(list(_BUILDERS)[:10])
NAMES = tuple(_BUILDERS)


def catalog(name: str) -> GComplex:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownCatalogName(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}") from None
    return builder()
