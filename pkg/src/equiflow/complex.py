"""Simplicial complexes with a simplicial action of a finite group.

Simplices are sorted vertex tuples.  Every simplex of a :class:`GComplex`
has a global id; ids are ordered by dimension, then lexicographically, and
all per-simplex arrays (images under the action, stabiliser masks, face
lists) are indexed by that id.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DuplicateVertexInSimplex,
    EmptyComplex,
    InvalidVertex,
    MalformedAction,
    NotFaceClosed,
    NotHomomorphism,
    NotInvariant,
    NotSimplicial,
    RegularizationFailed,
    SimplexNotInComplex,
)
from .groups import FiniteGroup, Subgroup

Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class GComplex:
    vertex_names: tuple[str, ...]
    simplices: tuple[Simplex, ...]
    group: FiniteGroup
    action: np.ndarray  # (|G|, V) vertex permutations
    images: np.ndarray  # (|G|, n) global id of g*simplex
    pointwise: np.ndarray  # (|G|, n) g fixes every vertex of the simplex
    dims: np.ndarray
    index: dict = field(repr=False)
    regular: bool = True

    # ------------------------------------------------------------ basics
    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dimension(self) -> int:
        return int(self.dims.max())

    @property
    def f_vector(self) -> list[int]:
        return np.bincount(self.dims, minlength=self.dimension + 1).tolist()

    @property
    def euler_characteristic(self) -> int:
        return int(np.sum(np.where(self.dims % 2 == 0, 1, -1)))

    def id_of(self, sigma) -> int:
        """Global id of ``sigma`` (an id or a vertex collection)."""
        if isinstance(sigma, (int, np.integer)):
            if 0 <= sigma < len(self.simplices):
                return int(sigma)
            raise SimplexNotInComplex(f"no simplex with id {sigma}")
        key = tuple(sorted(int(v) for v in sigma))
        try:
            return self.index[key]
        except KeyError:
            raise SimplexNotInComplex(f"{list(key)} is not a simplex") from None

    def simplices_of_dim(self, d: int) -> list[int]:
        return np.flatnonzero(self.dims == d).tolist()

    @cached_property
    def maximal_simplices(self) -> list[Simplex]:
        has_coface = np.zeros(len(self.simplices), dtype=bool)
        has_coface[self.face_idx] = True
        return [s for i, s in enumerate(self.simplices) if not has_coface[i]]

    # ------------------------------------------------------------ incidence
    @cached_property
    def _faces_csr(self) -> tuple[np.ndarray, np.ndarray]:
        ptr = np.zeros(len(self.simplices) + 1, dtype=np.int64)
        idx = []
        for i, s in enumerate(self.simplices):
            if len(s) > 1:
                idx.extend(self.index[f] for f in combinations(s, len(s) - 1))
            ptr[i + 1] = len(idx)
        return ptr, np.asarray(idx, dtype=np.int64)

    @property
    def face_ptr(self) -> np.ndarray:
        return self._faces_csr[0]

    @property
    def face_idx(self) -> np.ndarray:
        return self._faces_csr[1]

    def faces(self, i: int) -> list[int]:
        """Codimension-one faces."""
        ptr, idx = self._faces_csr
        return idx[ptr[i]:ptr[i + 1]].tolist()

    @cached_property
    def _cofaces(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.simplices]
        for i in range(len(self.simplices)):
            for f in self.faces(i):
                out[f].append(i)
        return out

    def cofaces(self, i: int) -> list[int]:
        """Codimension-one cofaces, ascending."""
        return self._cofaces[i]

    def all_faces(self, i: int) -> list[int]:
        """Every nonempty face of simplex ``i``, itself included."""
        s = self.simplices[i]
        return [self.index[f] for k in range(1, len(s) + 1) for f in combinations(s, k)]

    # ------------------------------------------------------------ action
    def apply(self, g: int, i: int) -> int:
        return int(self.images[g, i])

    def orbit(self, i: int) -> list[int]:
        return sorted(set(self.images[:, i].tolist()))

    def pointwise_stabilizer(self, sigma) -> Subgroup:
        i = self.id_of(sigma)
        return Subgroup(tuple(np.flatnonzero(self.pointwise[:, i]).tolist()))

    def setwise_stabilizer(self, sigma) -> Subgroup:
        i = self.id_of(sigma)
        return Subgroup(tuple(np.flatnonzero(self.images[:, i] == i).tolist()))

    def __repr__(self) -> str:
        return (f"GComplex(V={self.n_vertices}, f={self.f_vector}, |G|={self.group.order}, "
                f"regular={self.regular})")


@dataclass(frozen=True, eq=False)
class Subcomplex:
    parent: GComplex
    simplices: frozenset

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, i) -> bool:
        return i in self.simplices

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subcomplex) and other.parent is self.parent
                and other.simplices == self.simplices)

    def __hash__(self) -> int:
        return hash(self.simplices)

    @property
    def dimension(self) -> int:
        """-1 for the empty subcomplex."""
        if not self.simplices:
            return -1
        return int(self.parent.dims[list(self.simplices)].max())

    def sorted_ids(self) -> list[int]:
        return sorted(self.simplices)

    def vertices(self) -> list[int]:
        return sorted(self.parent.simplices[i][0] for i in self.simplices if self.parent.dims[i] == 0)

    def is_invariant(self) -> bool:
        if not self.simplices:
            return True
        ids = np.fromiter(self.simplices, dtype=np.int64)
        imgs = self.parent.images[:, ids].ravel()
        return bool(np.isin(imgs, ids).all())

    def as_lists(self) -> list[list[int]]:
        return [list(self.parent.simplices[i]) for i in self.sorted_ids()]


def subcomplex(K: GComplex, simplices: Iterable, close: bool = False,
               require_invariant: bool = False) -> Subcomplex:
    """Build a subcomplex from ids or vertex tuples.

    With ``close=True`` the face closure is taken; otherwise a set that is
    not face-closed raises :class:`NotFaceClosed`.
    """
    ids = {K.id_of(s) for s in simplices}
    if close:
        closed = set()
        for i in ids:
            closed.update(K.all_faces(i))
        ids = closed
    else:
        for i in ids:
            for f in K.faces(i):
                if f not in ids:
                    raise NotFaceClosed(f"face {list(K.simplices[f])} of {list(K.simplices[i])} missing")
    sub = Subcomplex(K, frozenset(ids))
    if require_invariant and not sub.is_invariant():
        raise NotInvariant("subcomplex is not invariant under the group action")
    return sub


def orbit_closure(K: GComplex, simplices: Iterable) -> Subcomplex:
    """Smallest invariant subcomplex containing the given simplices."""
    ids = set()
    for s in simplices:
        ids.update(K.images[:, K.id_of(s)].tolist())
    return subcomplex(K, ids, close=True)


def full_subcomplex(K: GComplex) -> Subcomplex:
    return Subcomplex(K, frozenset(range(len(K))))


def build_complex(vertices, maximal_simplices: Iterable[Sequence[int]], group: FiniteGroup,
                  action) -> GComplex:
    """Face-close ``maximal_simplices`` and validate the group action.

    ``vertices`` is a vertex count or a list of names; every vertex is a
    0-simplex.  ``action`` holds one vertex permutation per group element,
    as an array or as a mapping from element index to permutation.
    """
    names = (tuple(str(i) for i in range(vertices)) if isinstance(vertices, (int, np.integer))
             else tuple(str(v) for v in vertices))
    n_v = len(names)
    tops = [list(s) for s in maximal_simplices]
    if n_v == 0:
        raise EmptyComplex("complex has no vertices")
    closed: set[Simplex] = {(v,) for v in range(n_v)}
    for s in tops:
        if not s:
            raise EmptyComplex("empty simplex in input")
        for v in s:
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n_v:
                raise InvalidVertex(f"vertex {v!r} in {s} is not in 0..{n_v - 1}")
        if len(set(s)) != len(s):
            raise DuplicateVertexInSimplex(f"simplex {s} repeats a vertex")
        st = tuple(sorted(int(v) for v in s))
        for k in range(1, len(st) + 1):
            closed.update(combinations(st, k))
    simplices = tuple(sorted(closed, key=lambda s: (len(s), s)))
    index = {s: i for i, s in enumerate(simplices)}
    dims = np.array([len(s) - 1 for s in simplices], dtype=np.int64)

    perms = _action_array(action, group, n_v)
    _check_homomorphism(perms, group)
    images, pointwise = _action_on_simplices(perms, simplices, dims, n_v)
    bad = np.argwhere(images < 0)
    if len(bad):
        g, i = bad[0]
        img = sorted(int(perms[g, v]) for v in simplices[i])
        raise NotSimplicial(f"element {g} maps simplex {list(simplices[i])} to non-simplex {img}")
    setwise = images == np.arange(len(simplices))[None, :]
    regular = bool(np.all(~setwise | pointwise))
    for arr in (perms, images, pointwise, dims):
        arr.setflags(write=False)
    return GComplex(names, simplices, group, perms, images, pointwise, dims, index, regular)


def _action_array(action, group: FiniteGroup, n_v: int) -> np.ndarray:
    if isinstance(action, dict):
        rows = []
        for g in range(group.order):
            p = action.get(g, action.get(str(g)))
            if p is None:
                raise MalformedAction(f"no permutation given for group element {g}")
            rows.append(list(p))
        action = rows
    try:
        perms = np.array(action, dtype=np.int64)
    except (ValueError, TypeError):
        raise MalformedAction("action must be a list of equal-length permutations") from None
    if perms.shape != (group.order, n_v):
        raise MalformedAction(f"action has shape {perms.shape}, expected {(group.order, n_v)}")
    target = np.arange(n_v)
    for g in range(group.order):
        if not np.array_equal(np.sort(perms[g]), target):
            raise MalformedAction(f"action of element {g} is not a permutation of the vertices")
    return perms


def _check_homomorphism(perms: np.ndarray, group: FiniteGroup) -> None:
    if not np.array_equal(perms[group.identity], np.arange(perms.shape[1])):
        raise NotHomomorphism("identity element does not act trivially")
    composed = perms[:, perms]  # [a, b, v] = perm(a)(perm(b)(v))
    expected = perms[group.table]
    bad = np.argwhere(np.any(composed != expected, axis=2))
    if len(bad):
        a, b = bad[0]
        raise NotHomomorphism(f"perm({a}) o perm({b}) != perm({a}*{b})")


def _action_on_simplices(perms, simplices, dims, n_v):
    n = len(simplices)
    images = np.full((perms.shape[0], n), -1, dtype=np.int64)
    pointwise = np.zeros((perms.shape[0], n), dtype=bool)
    top = int(dims.max())
    for d in range(top + 1):
        ids = np.flatnonzero(dims == d)
        rows = np.array([simplices[i] for i in ids], dtype=np.int64).reshape(len(ids), d + 1)
        if _kernels.key_base_ok(n_v, d + 1):
            keys = _kernels.encode_rows(rows, n_v)
            local = _kernels.simplex_images(perms, rows, keys, n_v)
        else:  # pragma: no cover - only for enormous vertex counts
            lookup = {tuple(r): j for j, r in enumerate(rows.tolist())}
            local = np.array([[lookup.get(tuple(sorted(p[r])), -1) for r in rows] for p in perms])
        images[:, ids] = np.where(local >= 0, ids[np.maximum(local, 0)], -1)
        pointwise[:, ids] = _kernels.pointwise_fixed(perms, rows)
    return images, pointwise


# ---------------------------------------------------------------- subdivision

def barycentric_subdivision(K: GComplex) -> GComplex:
    """Equivariant barycentric subdivision.

    Vertex ``i`` of the result is the barycentre of simplex ``i`` of ``K``;
    simplices are chains of simplices of ``K``.
    """
    flags = []
    for top in K.maximal_simplices:
        for order in permutations(top):
            flags.append([K.index[tuple(sorted(order[:k]))] for k in range(1, len(order) + 1)])
    names = ["[" + ",".join(K.vertex_names[v] for v in s) + "]" for s in K.simplices]
    return build_complex(names, flags, K.group, np.array(K.images))


def subdivide_subcomplex(A: Subcomplex, sd: GComplex) -> Subcomplex:
    """The subcomplex of ``sd`` (a subdivision of ``A.parent``) covering ``A``."""
    members = A.simplices
    return Subcomplex(sd, frozenset(i for i, chain in enumerate(sd.simplices)
                                    if all(c in members for c in chain)))


def regularize(K: GComplex, max_rounds: int = 2) -> tuple[GComplex, int]:
    """Subdivide until the action is regular; returns the complex and the round count."""
    rounds = 0
    while not K.regular:
        if rounds == max_rounds:
            raise RegularizationFailed(f"action still irregular after {max_rounds} subdivisions")
        K = barycentric_subdivision(K)
        rounds += 1
    return K, rounds


def ensure_regular(K: GComplex) -> GComplex:
    return regularize(K)[0]


# ---------------------------------------------------------------- sanity checks

def manifold_warnings(K: GComplex) -> list[str]:
    """Heuristic closed-manifold checks; returns warnings, never raises."""
    warnings = []
    d = K.dimension
    impure = [s for s in K.maximal_simplices if len(s) - 1 != d]
    if impure:
        warnings.append(f"not pure: maximal simplex {list(impure[0])} has dimension "
                        f"{len(impure[0]) - 1} < {d}")
    if d >= 1:
        for i in K.simplices_of_dim(d - 1):
            k = len(K.cofaces(i))
            if k != 2:
                warnings.append(f"ridge {list(K.simplices[i])} lies in {k} top simplices "
                                "(closed pseudomanifold needs 2)")
                break
    if d >= 2:
        for v in range(K.n_vertices):
            if not _link_connected(K, v):
                warnings.append(f"link of vertex {K.vertex_names[v]} is disconnected")
                break
    return warnings


def _link_connected(K: GComplex, v: int) -> bool:
    link_edges = [tuple(u for u in K.simplices[i] if u != v)
                  for i in K.simplices_of_dim(2) if v in K.simplices[i]]
    verts = {u for e in link_edges for u in e}
    if not verts:
        return True
    parent = {u: u for u in verts}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a, b in link_edges:
        parent[find(a)] = find(b)
    return len({find(u) for u in verts}) == 1
