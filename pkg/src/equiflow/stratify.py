"""Orbit-type stratification of a regular G-complex.

For a regular action every point in the open simplex ``s`` has isotropy
equal to the pointwise stabiliser of ``s``, so the open stratum ``M_H``
is a union of open simplices and the fixed set ``M^H`` is a subcomplex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .complex import GComplex, Subcomplex
from .errors import IrregularAction, NotInvariant, UnknownIsotropy
from .groups import (
    ConjugacyClasses,
    OrbitType,
    Subgroup,
    conjugacy_classes,
    subgroups,
)


@dataclass(frozen=True, eq=False)
class Component:
    id: int
    isotropy: Subgroup
    open_simplices: frozenset
    closure: Subcomplex
    chi_c: int
    dim: int

    @property
    def least_simplex(self) -> int:
        return min(self.open_simplices)

    def is_closed(self) -> bool:
        """True when the component is a closed subcomplex (no frontier)."""
        return len(self.closure) == len(self.open_simplices)

    def __repr__(self) -> str:
        return (f"Component(id={self.id}, H={list(self.isotropy.elements)}, "
                f"n={len(self.open_simplices)}, chi_c={self.chi_c}, dim={self.dim})")


@dataclass(frozen=True, eq=False)
class Stratification:
    complex: GComplex
    all_subgroups: list[Subgroup]
    classes: ConjugacyClasses
    orbit_types: list[OrbitType]  # realized only, larger isotropy first
    isotropy: list[Subgroup]  # per simplex id
    strata: dict  # Subgroup -> frozenset of simplex ids (exact isotropy)
    filtration: list[Subcomplex]
    _components: dict = field(default_factory=dict, repr=False)
    _fixed: dict = field(default_factory=dict, repr=False)

    def realized(self, H: Subgroup) -> bool:
        return H in self.strata

    def stratum(self, H: Subgroup) -> frozenset:
        try:
            return self.strata[H]
        except KeyError:
            raise UnknownIsotropy(f"isotropy {list(H.elements)} is not realized") from None

    def fixed(self, H: Subgroup) -> Subcomplex:
        if H not in self._fixed:
            self._fixed[H] = fixed_subcomplex(self.complex, H)
        return self._fixed[H]

    def orbit_type_of(self, H: Subgroup) -> OrbitType:
        return self.classes.class_of(H)

    def orbit_type_stratum(self, t: OrbitType) -> frozenset:
        """``M_(H)``: simplices whose isotropy is conjugate to ``H``."""
        out = set()
        for K in t.conjugates:
            out |= self.strata.get(K, frozenset())
        return frozenset(out)

    def components(self, H: Subgroup) -> list[Component]:
        return components(self, H)

    def all_components(self) -> list[Component]:
        """Components of every realized stratum, in orbit-type order."""
        out = []
        for t in self.orbit_types:
            for K in t.conjugates:
                if K in self.strata:
                    out.extend(self.components(K))
        return out


def fixed_subcomplex(K: GComplex, H: Subgroup) -> Subcomplex:
    """``M^H``: simplices fixed pointwise by every element of ``H``."""
    if not K.regular:
        raise IrregularAction("fixed sets need a regular action; run ensure_regular first")
    mask = np.all(K.pointwise[list(H.elements)], axis=0)
    return Subcomplex(K, frozenset(np.flatnonzero(mask).tolist()))


def strata(K: GComplex, max_group: int | None = None) -> Stratification:
    if not K.regular:
        raise IrregularAction("stratification needs a regular action; run ensure_regular first")
    G = K.group
    subs = subgroups(G, max_group)
    classes = conjugacy_classes(G, subs)
    by_mask = {H.mask: H for H in subs}

    weights = [1 << g for g in range(G.order)]
    isotropy = []
    groups_of: dict[Subgroup, list[int]] = {}
    for i in range(len(K)):
        m = sum(w for w, fixed in zip(weights, K.pointwise[:, i]) if fixed)
        H = by_mask[m]
        isotropy.append(H)
        groups_of.setdefault(H, []).append(i)
    strata_map = {H: frozenset(ids) for H, ids in groups_of.items()}

    realized = [t for t in classes.types if any(c in strata_map for c in t.conjugates)]
    filtration = []
    acc: set[int] = set()
    for t in realized:
        for c in t.conjugates:
            acc |= strata_map.get(c, frozenset())
        filtration.append(Subcomplex(K, frozenset(acc)))
    return Stratification(K, subs, classes, realized, isotropy, strata_map, filtration)


def components(strat: Stratification, H: Subgroup) -> list[Component]:
    """Connected components of the open stratum ``M_H``, ordered by least simplex."""
    cached = strat._components.get(H)
    if cached is not None:
        return cached
    members = strat.stratum(H)
    K = strat.complex
    parent = {i: i for i in members}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # codimension-one adjacency suffices: intermediate faces share the isotropy
    for i in members:
        for f in K.faces(i):
            if f in parent:
                a, b = find(i), find(f)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in members:
        groups.setdefault(find(i), []).append(i)
    out = []
    for cid, root in enumerate(sorted(groups, key=lambda r: min(groups[r]))):
        ids = groups[root]
        closure = set()
        for i in ids:
            closure.update(K.all_faces(i))
        dims = K.dims[ids]
        chi = int(np.sum(np.where(dims % 2 == 0, 1, -1)))
        out.append(Component(cid, H, frozenset(ids), Subcomplex(K, frozenset(closure)), chi,
                             int(dims.max())))
    strat._components[H] = out
    return out


def closure_meets(c: Component, A: Subcomplex) -> bool:
    """Whether the closure of ``c`` shares a simplex with the invariant subcomplex ``A``."""
    if A.parent is not c.closure.parent:
        raise ValueError("component and subcomplex live on different complexes")
    if not A.is_invariant():
        raise NotInvariant("A is not invariant under the group action")
    small, big = sorted((c.closure.simplices, A.simplices), key=len)
    return any(s in big for s in small)


def translate(K: GComplex, g: int, ids: Iterable[int]) -> frozenset:
    return frozenset(int(K.images[g, i]) for i in ids)
