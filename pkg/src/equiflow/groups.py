"""Finite groups given by multiplication tables.

Elements are the integers ``0..n-1``; ``table[a, b]`` is the product ``a*b``.
Subgroups are stored as sorted element tuples, which makes them hashable and
gives the deterministic lexicographic order used for representatives.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import (
    GroupTooLarge,
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotASubgroup,
    NotAssociative,
)

DEFAULT_MAX_GROUP = 48


def max_group_order() -> int:
    """Enumeration bound, overridable with ``EQUIFLOW_MAX_GROUP``."""
    raw = os.environ.get("EQUIFLOW_MAX_GROUP")
    if raw is None:
        return DEFAULT_MAX_GROUP
    value = int(raw)
    if value <= 0:
        raise ValueError("EQUIFLOW_MAX_GROUP must be positive")
    return value


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int
    inverses: np.ndarray
    names: tuple[str, ...]

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[g, h] = g h g^-1``."""
        t = self.table
        gh = t  # gh[g, h] = g*h
        return t[gh, self.inverses[:, None]]

    def same_as(self, other: "FiniteGroup") -> bool:
        return np.array_equal(self.table, other.table) and self.names == other.names

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True, order=True)
class Subgroup:
    elements: tuple[int, ...]
    mask: int = field(compare=False, repr=False, default=0)

    def __post_init__(self):
        if not self.mask:
            object.__setattr__(self, "mask", _to_mask(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return bool(self.mask >> int(g) & 1)

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def sort_key(self):
        return (len(self.elements), self.elements)


@dataclass(frozen=True)
class OrbitType:
    """A conjugacy class ``(H)`` of subgroups."""

    id: int
    representative: Subgroup
    conjugates: tuple[Subgroup, ...]

    @property
    def order(self) -> int:
        return self.representative.order


class ConjugacyClasses(NamedTuple):
    types: list[OrbitType]
    # leq[i, j]: some conjugate of types[i].representative lies in types[j].representative
    leq: np.ndarray

    def class_of(self, H: Subgroup) -> OrbitType:
        for t in self.types:
            if H in t.conjugates:
                return t
        raise KeyError(H)


def _to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def _from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _subgroup_from_mask(mask: int) -> Subgroup:
    return Subgroup(_from_mask(mask), mask)


def build_group(table, names: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a multiplication table and return the group it defines."""
    try:
        arr = np.asarray(table)
    except Exception as exc:  # ragged nested lists
        raise MalformedTable(f"table is not a rectangular array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise MalformedTable(f"table must be a non-empty square array, got shape {arr.shape}")
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
        if arr.size and not all(float(x).is_integer() for x in arr.ravel()):
            raise MalformedTable("table entries must be integers")
    arr = arr.astype(np.int64)
    n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        a, b = bad[0]
        raise MalformedTable(f"table[{a}][{b}] = {arr[a, b]} is out of range 0..{n - 1}")

    idx = np.arange(n)
    identity = -1
    for e in range(n):
        if np.array_equal(arr[e], idx) and np.array_equal(arr[:, e], idx):
            identity = e
            break
    if identity < 0:
        raise NoIdentity("no element e with e*x = x*e = x for all x")

    inverses = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero((arr[a] == identity) & (arr[:, a] == identity))
        if len(hits) == 0:
            raise NoInverse(f"element {a} has no two-sided inverse")
        inverses[a] = hits[0]

    a, b, c = (int(x) for x in _kernels.assoc_violation(arr))
    if a >= 0:
        raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")

    if names is None:
        names = tuple(str(i) for i in range(n))
    else:
        names = tuple(str(x) for x in names)
        if len(names) != n:
            raise MalformedTable(f"{len(names)} names for {n} elements")
    arr.setflags(write=False)
    inverses.setflags(write=False)
    return FiniteGroup(arr, identity, inverses, names)


def group_from_permutations(generators, names=None) -> tuple[FiniteGroup, np.ndarray]:
    """Close a set of permutations under composition.

    Returns the group and an array whose row ``g`` is the permutation of
    element ``g``; element 0 is the identity.  Composition is ``(a*b)(x) =
    a(b(x))``, so the rows form a left action.
    """
    gens = [tuple(int(x) for x in p) for p in generators]
    if not gens:
        raise ValueError("need at least one generator (use the identity for the trivial group)")
    degree = len(gens[0])
    ident = tuple(range(degree))
    perms = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[p[i]] for i in range(degree))
                if q not in index:
                    index[q] = len(perms)
                    perms.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(perms)
    arr = np.array(perms, dtype=np.int64)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            table[a, b] = index[tuple(arr[a][arr[b]])]
    return build_group(table, names), arr


def cyclic_group(n: int) -> FiniteGroup:
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return build_group(table, [f"r{i}" if i else "e" for i in range(n)])


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Validate ``elements`` as a subgroup of ``G``."""
    elems = tuple(sorted({int(e) for e in elements}))
    if not elems or any(e < 0 or e >= G.order for e in elems):
        raise NotASubgroup(f"{elems} is not a subset of the group elements")
    mask = _to_mask(elems)
    if not mask >> G.identity & 1:
        raise NotASubgroup(f"{elems} does not contain the identity")
    for a in elems:
        if not mask >> int(G.inverses[a]) & 1:
            raise NotASubgroup(f"{elems} is not closed under inverses ({a})")
        for b in elems:
            if not mask >> int(G.table[a, b]) & 1:
                raise NotASubgroup(f"{elems} is not closed: {a}*{b} = {G.table[a, b]}")
    if G.order % len(elems):
        raise NotASubgroup(f"order {len(elems)} does not divide {G.order}")
    return Subgroup(elems, mask)


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup((G.identity,))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(tuple(range(G.order)))


def generated_subgroup(G: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    return _subgroup_from_mask(_closure_mask(G, [int(g) for g in generators]))


def _closure_mask(G: FiniteGroup, gens: list[int]) -> int:
    t = G.table
    mask = 1 << G.identity
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = int(t[a, s])
                if not mask >> b & 1:
                    mask |= 1 << b
                    nxt.append(b)
        frontier = nxt
    return mask


def subgroups(G: FiniteGroup, max_order: int | None = None) -> list[Subgroup]:
    """All subgroups of ``G``, sorted by size then element tuple.

    Cyclic subgroups are generated first; the lattice is then closed under
    joins with cyclic subgroups, which reaches every subgroup since each one
    is generated by finitely many elements.
    """
    bound = max_group_order() if max_order is None else max_order
    if G.order > bound:
        raise GroupTooLarge(f"group order {G.order} exceeds enumeration bound {bound}")
    cyclic: dict[int, int] = {}  # mask -> a generator
    for g in range(G.order):
        m = _closure_mask(G, [g])
        cyclic.setdefault(m, g)
    seen = set(cyclic)
    work = list(cyclic)
    while work:
        m = work.pop()
        gens = list(_from_mask(m))
        for cm, c in cyclic.items():
            if cm & ~m == 0:
                continue
            j = _closure_mask(G, gens + [c])
            if j not in seen:
                seen.add(j)
                work.append(j)
    return sorted((_subgroup_from_mask(m) for m in seen), key=Subgroup.sort_key)


def conjugate(G: FiniteGroup, H: Subgroup, g: int) -> Subgroup:
    """``g H g^-1``."""
    row = G.conjugation[g]
    return Subgroup(tuple(sorted(int(row[h]) for h in H.elements)))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    members = [g for g in range(G.order) if conjugate(G, H, g) == H]
    return Subgroup(tuple(members))


def conjugacy_classes(G: FiniteGroup, subs: list[Subgroup]) -> ConjugacyClasses:
    """Partition ``subs`` into conjugacy classes, larger subgroups first.

    With this order, ``(H_i)`` subconjugate to ``(H_j)`` with ``i != j``
    forces ``j < i``.
    """
    remaining = set(subs)
    classes = []
    for H in sorted(subs, key=Subgroup.sort_key):
        if H not in remaining:
            continue
        conj = sorted({conjugate(G, H, g) for g in range(G.order)})
        missing = [K for K in conj if K not in remaining]
        if missing:
            raise ValueError(f"subgroup list is not closed under conjugation: {missing[0]}")
        remaining.difference_update(conj)
        classes.append(tuple(conj))
    # conj[0] is lexicographically least; all members have equal size
    classes.sort(key=lambda c: (-len(c[0]), c[0].elements))
    types = [OrbitType(i, c[0], c) for i, c in enumerate(classes)]
    k = len(types)
    leq = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(types):
        for j, b in enumerate(types):
            if a.order <= b.order and b.order % a.order == 0:
                leq[i, j] = any(K.issubset(b.representative) for K in a.conjugates)
    return ConjugacyClasses(types, leq)


def element_order(G: FiniteGroup, g: int) -> int:
    k, x = 1, g
    while x != G.identity:
        x = G.mul(x, g)
        k += 1
    return k


def isomorphism_name(G: FiniteGroup, H: Subgroup) -> str:
    """Short name for the isomorphism type of ``H``: e, Z/n, Z/2xZ/2, D_n, or |H|=n."""
    n = H.order
    if n == 1:
        return "e"
    orders = [element_order(G, h) for h in H.elements]
    if max(orders) == n:
        return f"Z/{n}"
    abelian = all(G.mul(a, b) == G.mul(b, a) for a in H.elements for b in H.elements)
    if abelian and all(o <= 2 for o in orders):
        return "x".join(["Z/2"] * (n.bit_length() - 1))
    if not abelian and n % 2 == 0 and max(orders) == n // 2:
        # a cyclic subgroup of index 2 whose complement consists of involutions
        r = orders.index(n // 2)
        rot = generated_subgroup(G, [H.elements[r]])
        if all(element_order(G, h) == 2 for h in H.elements if h not in rot):
            return "S3" if n == 6 else f"D{n // 2}"
    return f"|H|={n}"
