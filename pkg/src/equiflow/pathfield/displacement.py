"""Equivariant displacement maps on the barycentric subdivision.

A displacement map ``F`` sends each simplex of ``K`` (a vertex of the
subdivision, i.e. a barycentre) to a simplex of ``K``.  It is a simplicial
self-map of the subdivision when comparable simplices go to comparable
simplices.  Simplices with ``F(s) = s`` are singular; a subdivision cell
(a chain) whose member set meets its image set is flagged as a possible
fixed cell.  No singular simplex and no flagged chain certifies that the
induced map has no fixed point.

Construction works one orbit of connected components of ``|K|`` at a time
and only on components disjoint from the prescribed fixed set ``A``; all
other simplices are held fixed.  Candidate maps are simplicial
automorphisms ``phi`` of a component ``X`` that commute with the stabiliser
of ``X``, move every simplex, and act as the identity on the rational
homology of ``X`` and of every fixed subcomplex ``X^H``; these are
necessary for ``phi`` to be equivariantly homotopic to the identity.
Strategies are tried in order:

s1  a central group element preserving ``X`` and fixing no simplex of it;
s2  one step around a circle component;
s3  bounded backtracking search for such an automorphism;
s4  give up and hold the component fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .. import _kernels
from ..complex import GComplex, Subcomplex
from ..errors import NotFaceClosed, NotInvariant
from ..stratify import strata as build_strata

SEARCH_BUDGET = 50_000
# homology check is exact but cubic; larger components fall through to s4
MAX_COMPONENT_SIZE = 2_000


@dataclass(frozen=True, eq=False)
class DisplacementMap:
    complex: GComplex
    image: np.ndarray  # image[i] = id of F(simplex i)
    strategies: list[dict] = field(default_factory=list)

    @property
    def singular(self) -> list[int]:
        return np.flatnonzero(self.image == np.arange(len(self.image))).tolist()

    @classmethod
    def identity(cls, K: GComplex) -> "DisplacementMap":
        return cls(K, np.arange(len(K), dtype=np.int64))

    @classmethod
    def from_assignment(cls, K: GComplex, pairs) -> "DisplacementMap":
        image = np.full(len(K), -1, dtype=np.int64)
        for s, t in pairs:
            image[K.id_of(s)] = K.id_of(t)
        return cls(K, image)

    def as_assignment(self) -> list[list[list[int]]]:
        K = self.complex
        return [[list(K.simplices[i]), list(K.simplices[int(j)])] for i, j in enumerate(self.image)]


# ------------------------------------------------------------ components of |K|

def connected_components(K: GComplex) -> list[list[int]]:
    """Simplex ids of each connected component of ``|K|``, ordered by least simplex."""
    parent = list(range(len(K)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(K)):
        for f in K.faces(i):
            a, b = find(i), find(f)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(K)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=min)


# ------------------------------------------------------------ homology of a vertex map

def _signed_image(K: GComplex, vmap: dict, i: int) -> tuple[int, int]:
    img = [vmap[v] for v in K.simplices[i]]
    inversions = sum(1 for a, b in combinations(img, 2) if a > b)
    return K.index[tuple(sorted(img))], -1 if inversions % 2 else 1


def _boundary_column(K: GComplex, i: int) -> dict:
    s = K.simplices[i]
    if len(s) == 1:
        return {}
    return {K.index[s[:j] + s[j + 1:]]: (-1 if j % 2 else 1) for j in range(len(s))}


def _combine(a: int, col: dict, b: int, other: dict) -> dict:
    out = {r: a * v for r, v in col.items()}
    for r, v in other.items():
        x = out.get(r, 0) + b * v
        if x:
            out[r] = x
        else:
            out.pop(r, None)
    return out


def _reduce(col: dict, pivots: dict, track: dict | None = None, tracks: dict | None = None):
    """Integer column reduction; returns (reduced column, tracked combination)."""
    while col:
        low = max(col)
        if low not in pivots:
            break
        piv = pivots[low]
        a, b = piv[low], col[low]
        col = _combine(a, col, -b, piv)
        if track is not None:
            track = _combine(a, track, -b, tracks[low])
    return col, track


def _cycle_basis(K: GComplex, ids: list[int], d: int) -> list[dict]:
    cells = sorted(i for i in ids if K.dims[i] == d)
    if d == 0:
        return [{i: 1} for i in cells]
    pivots: dict = {}
    tracks: dict = {}
    cycles = []
    for i in cells:
        col, track = _reduce(_boundary_column(K, i), pivots, {i: 1}, tracks)
        if col:
            low = max(col)
            pivots[low] = col
            tracks[low] = track
        else:
            cycles.append(track)
    return cycles


def induces_identity_on_homology(K: GComplex, ids: list[int], vmap: dict) -> bool:
    """Whether the simplicial map ``vmap`` on the subcomplex ``ids`` is the identity on H_*(Q)."""
    top = int(K.dims[ids].max())
    for d in range(top + 1):
        pivots: dict = {}
        for i in sorted(i for i in ids if K.dims[i] == d + 1):
            col, _ = _reduce(_boundary_column(K, i), pivots)
            if col:
                pivots[max(col)] = col
        for z in _cycle_basis(K, ids, d):
            moved: dict = {}
            for i, c in z.items():
                j, sign = _signed_image(K, vmap, i)
                moved[j] = moved.get(j, 0) + sign * c
            diff = _combine(1, moved, -1, z)
            diff = {r: v for r, v in diff.items() if v}
            rest, _ = _reduce(diff, pivots)
            if rest:
                return False
    return True


# ------------------------------------------------------------ strategies

def _moves_everything(K: GComplex, ids: list[int], vmap: dict) -> bool:
    for i in ids:
        if tuple(sorted(vmap[v] for v in K.simplices[i])) == K.simplices[i]:
            return False
    return True


def _is_automorphism(K: GComplex, ids: list[int], vmap: dict) -> bool:
    members = set(ids)
    for i in ids:
        img = tuple(sorted(vmap[v] for v in K.simplices[i]))
        if K.index.get(img) not in members:
            return False
    return True


def _commutes(K: GComplex, stab: list[int], vmap: dict) -> bool:
    act = K.action
    return all(vmap[int(act[h, v])] == int(act[h, vmap[v]]) for h in stab for v in vmap)


def fixed_parts(K: GComplex, ids: list[int]) -> list[list[int]]:
    """``X^H`` for ``X = ids`` and every isotropy group ``H`` occurring in ``X``."""
    cols = K.pointwise[:, ids]
    out = []
    for key in sorted({tuple(np.flatnonzero(cols[:, k]).tolist()) for k in range(len(ids))}):
        mask = np.all(cols[list(key)], axis=0)
        out.append([i for i, m in zip(ids, mask) if m])
    return out


def _acceptable(K, parts, stab, vmap) -> bool:
    # parts[0] is X itself, the rest are its proper fixed subcomplexes
    ids = parts[0]
    return (_is_automorphism(K, ids, vmap) and _moves_everything(K, ids, vmap)
            and _commutes(K, stab, vmap)
            and all(induces_identity_on_homology(K, part, vmap) for part in parts))


def _central_elements(K: GComplex) -> list[int]:
    t = K.group.table
    return [g for g in range(K.group.order)
            if g != K.group.identity and np.array_equal(t[g], t[:, g])]


def _strategy_central(K, parts, verts, stab):
    for g in _central_elements(K):
        if g not in stab:
            continue
        vmap = {v: int(K.action[g, v]) for v in verts}
        if _acceptable(K, parts, stab, vmap):
            return vmap
    return None


def _strategy_circle(K, parts, verts, stab):
    ids = parts[0]
    if int(K.dims[ids].max()) != 1:
        return None
    adj = {v: [] for v in verts}
    for i in ids:
        if K.dims[i] == 1:
            a, b = K.simplices[i]
            adj[a].append(b)
            adj[b].append(a)
    if any(len(n) != 2 for n in adj.values()) or len(verts) < 3:
        return None
    start = verts[0]
    for first in sorted(adj[start]):
        cycle = [start, first]
        while len(cycle) < len(verts):
            a, b = adj[cycle[-1]]
            cycle.append(b if a == cycle[-2] else a)
        if cycle[0] not in adj[cycle[-1]]:
            return None
        vmap = {cycle[k]: cycle[(k + 1) % len(cycle)] for k in range(len(cycle))}
        if _acceptable(K, parts, stab, vmap):
            return vmap
    return None


def _strategy_search(K, parts, verts, stab, budget=SEARCH_BUDGET):
    ids = parts[0]
    adj = {v: set() for v in verts}
    for i in ids:
        if K.dims[i] == 1:
            a, b = K.simplices[i]
            adj[a].add(b)
            adj[b].add(a)
    degree = {v: len(adj[v]) for v in verts}
    star = {v: 0 for v in verts}
    for i in ids:
        for v in K.simplices[i]:
            star[v] += 1
    # breadth-first order keeps newly assigned vertices adjacent to assigned ones
    order, seen = [], {verts[0]}
    queue = [verts[0]]
    while queue:
        v = queue.pop(0)
        order.append(v)
        for u in sorted(adj[v]):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    order += [v for v in verts if v not in seen]
    act = K.action
    vmap: dict = {}
    used: set = set()
    nodes = 0

    def extend(v, w):
        added = []
        for h in stab:
            a, b = int(act[h, v]), int(act[h, w])
            if a in vmap:
                if vmap[a] != b:
                    return None, added
                continue
            if a == b or b in used or degree[a] != degree[b] or star[a] != star[b]:
                return None, added
            vmap[a] = b
            used.add(b)
            added.append(a)
            for u in adj[a]:
                if u in vmap:
                    img = vmap[u]
                    if img not in adj[b] or (img == a and b == u):
                        return None, added
        return True, added

    def undo(added):
        for a in added:
            used.discard(vmap.pop(a))

    def search(pos):
        nonlocal nodes
        while pos < len(order) and order[pos] in vmap:
            pos += 1
        if pos == len(order):
            return _acceptable(K, parts, stab, vmap)
        v = order[pos]
        for w in verts:
            nodes += 1
            if nodes > budget:
                return False
            ok, added = extend(v, w)
            if ok and search(pos + 1):
                return True
            undo(added)
        return False

    if search(0):
        return dict(vmap)
    return None


STRATEGIES = (("s1", _strategy_central), ("s2", _strategy_circle), ("s3", _strategy_search))


def build_displacement(K: GComplex, A: Subcomplex | None = None) -> DisplacementMap:
    """Best-effort equivariant displacement map that fixes exactly ``A`` where it can."""
    if A is not None:
        if A.parent is not K:
            raise ValueError("fixed set belongs to a different complex")
        if not A.is_invariant():
            raise NotInvariant("the prescribed fixed set is not invariant under the group action")
        for i in A.simplices:
            if any(f not in A.simplices for f in K.faces(i)):
                raise NotFaceClosed("the prescribed fixed set is not face-closed")
    held = A.simplices if A is not None else frozenset()
    image = np.arange(len(K), dtype=np.int64)
    comps = connected_components(K)
    comp_of = np.empty(len(K), dtype=np.int64)
    for k, ids in enumerate(comps):
        comp_of[ids] = k
    done: set[int] = set()
    report = []
    for k, ids in enumerate(comps):
        if k in done:
            continue
        orbit = {}
        for g in range(K.group.order):
            orbit.setdefault(int(comp_of[K.images[g, ids[0]]]), g)
        done.update(orbit)
        entry = {"components": sorted(orbit), "strategy": "s4"}
        report.append(entry)
        if any(i in held for c in orbit for i in comps[c]):
            entry["strategy"] = "fixed-set"
            continue
        if len(ids) > MAX_COMPONENT_SIZE:
            continue
        stab = [g for g in range(K.group.order) if comp_of[K.images[g, ids[0]]] == k]
        verts = sorted(K.simplices[i][0] for i in ids if K.dims[i] == 0)
        parts = [ids] + [p for p in fixed_parts(K, ids) if p and len(p) < len(ids)]
        for name, strategy in STRATEGIES:
            vmap = strategy(K, parts, verts, stab)
            if vmap is None:
                continue
            entry["strategy"] = name
            for c, g in orbit.items():
                for i in ids:
                    j = K.index[tuple(sorted(vmap[v] for v in K.simplices[i]))]
                    image[K.images[g, i]] = K.images[g, j]
            break
    return DisplacementMap(K, image, report)


# ------------------------------------------------------------ verification

@dataclass
class Certificate:
    passed: bool
    problems: list[str]
    singular: list[int]
    flagged_chains: int
    n_chains: int
    singular_orbits: list[dict]

    @property
    def label(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def fixed_point_free(self) -> bool:
        return self.passed and not self.singular and self.flagged_chains == 0


def all_chains(K: GComplex) -> np.ndarray:
    """Every chain of simplices (= every simplex of the subdivision), padded with -1."""
    chains = set()
    for top in K.maximal_simplices:
        flag_ids = []
        for order in permutations(top):
            flag_ids.append(tuple(K.index[tuple(sorted(order[:k]))] for k in range(1, len(order) + 1)))
        for flag in flag_ids:
            for k in range(1, len(flag) + 1):
                chains.update(combinations(flag, k))
    width = K.dimension + 1
    out = np.full((len(chains), width), -1, dtype=np.int64)
    for r, c in enumerate(sorted(chains, key=lambda c: (len(c), c))):
        out[r, :len(c)] = c
    return out


def verify_displacement(K: GComplex, F: DisplacementMap) -> Certificate:
    problems = []
    image = np.asarray(F.image, dtype=np.int64)
    n = len(K)
    if image.shape != (n,) or np.any(image < 0) or np.any(image >= n):
        missing = np.flatnonzero((image < 0) | (image >= n)).tolist() if image.shape == (n,) else []
        problems.append("map is not total on simplices" +
                        (f"; first missing {list(K.simplices[missing[0]])}" if missing else ""))
        return Certificate(False, problems, [], 0, 0, [])

    vsets = [set(s) for s in K.simplices]
    for t in range(n):
        ft = vsets[image[t]]
        for s in K.all_faces(t):
            fs = vsets[image[s]]
            if not (fs <= ft or ft <= fs):
                problems.append(f"not chain-monotone: {list(K.simplices[s])} <= {list(K.simplices[t])} "
                                f"but images {sorted(fs)} and {sorted(ft)} are incomparable")
                break
        if problems:
            break

    for g in range(K.group.order):
        img = K.images[g]
        bad = np.flatnonzero(image[img] != img[image])
        if len(bad):
            s = int(bad[0])
            problems.append(f"not equivariant: g={g}, simplex {list(K.simplices[s])}")
            break

    singular = F.singular
    chains = all_chains(K)
    flagged = _kernels.flagged_chains(chains, image)
    groups = []
    if K.regular and singular:
        strat = build_strata(K)
        where = {}
        for c in strat.all_components():
            for i in c.open_simplices:
                where[i] = c
        bucket: dict = {}
        for i in singular:
            c = where[i]
            key = (c.isotropy.elements, c.id)
            bucket.setdefault(key, set()).add(min(K.orbit(i)))
        for (h, cid), orbits in sorted(bucket.items()):
            groups.append({"isotropy": list(h), "component": cid, "singular_orbits": len(orbits)})
    return Certificate(not problems, problems, singular, int(flagged.sum()), len(chains), groups)
