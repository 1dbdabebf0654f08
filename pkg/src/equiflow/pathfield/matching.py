"""Equivariant acyclic matchings on a stratified G-complex.

A matching pairs a simplex with a coface one dimension up.  Here every pair
stays inside a single isotropy stratum and the pair set is closed under the
group action; unmatched (critical) simplices stand in for singular orbits
of a path field.  Pairs never cross components of a stratum, so the
alternating count of critical cells in a component always equals its
``chi_c``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..complex import GComplex
from ..invariants import betti
from ..stratify import Stratification


@dataclass(frozen=True, eq=False)
class Matching:
    complex: GComplex
    partner: np.ndarray  # partner[i] = matched simplex or -1

    @property
    def pairs(self) -> list[tuple[int, int]]:
        dims = self.complex.dims
        return [(i, int(p)) for i, p in enumerate(self.partner) if p >= 0 and dims[p] > dims[i]]

    @property
    def critical(self) -> list[int]:
        return np.flatnonzero(self.partner < 0).tolist()

    def critical_by_dim(self) -> list[int]:
        dims = self.complex.dims[self.partner < 0]
        return np.bincount(dims, minlength=self.complex.dimension + 1).tolist()

    @classmethod
    def from_pairs(cls, K: GComplex, pairs) -> "Matching":
        partner = np.full(len(K), -1, dtype=np.int64)
        for s, t in pairs:
            s, t = K.id_of(s), K.id_of(t)
            if partner[s] >= 0 or partner[t] >= 0:
                raise ValueError(f"simplex matched twice in pair ({s}, {t})")
            partner[s] = t
            partner[t] = s
        return cls(K, partner)


def _creates_cycle(K: GComplex, partner: np.ndarray, new_pairs) -> bool:
    fp, fi = K.face_ptr, K.face_idx
    return any(_kernels.vpath_reaches(fp, fi, partner, K.dims, t, s) for s, t in new_pairs)


def _pair_orbit(K: GComplex, s: int, t: int) -> list[tuple[int, int]]:
    return sorted({(int(K.images[g, s]), int(K.images[g, t])) for g in range(K.group.order)})


def build_matching(strat: Stratification) -> Matching:
    """Greedy equivariant matching.

    Orbit types are processed largest isotropy first; inside a stratum the
    orbit representatives (least simplex of each orbit) are visited in id
    order and matched to their least available coface with the same
    isotropy whose whole pair orbit keeps the matching acyclic.
    """
    K = strat.complex
    iso = strat.isotropy
    partner = np.full(len(K), -1, dtype=np.int64)
    for t in strat.orbit_types:
        members = strat.orbit_type_stratum(t)
        reps = sorted({min(K.orbit(i)) for i in members})
        for s in reps:
            if partner[s] >= 0:
                continue
            for c in K.cofaces(s):
                if partner[c] >= 0 or iso[c] != iso[s]:
                    continue
                orbit = _pair_orbit(K, s, c)
                for a, b in orbit:
                    partner[a] = b
                    partner[b] = a
                if _creates_cycle(K, partner, orbit):
                    for a, b in orbit:
                        partner[a] = partner[b] = -1
                    continue
                break
    return Matching(K, partner)


# ------------------------------------------------------------ cancellation

def _gradient_paths(K: GComplex, partner: np.ndarray, start: int):
    """Count gradient paths from the critical cell ``start`` down to each facet-level cell.

    Returns ``(reached_up, down_count)``: the upper cells reached (in
    topological order) with their path counts, and the path count into
    every lower cell touched.
    """
    dims = K.dims
    # topological order of the upper cells reachable from start
    order, state = [], {start: 0}
    stack = [(start, iter(K.faces(start)))]
    while stack:
        x, it = stack[-1]
        advanced = False
        for rho in it:
            if rho == partner[x]:
                continue
            y = int(partner[rho])
            if y >= 0 and dims[y] > dims[rho] and y not in state:
                state[y] = 0
                stack.append((y, iter(K.faces(y))))
                advanced = True
                break
        if not advanced:
            stack.pop()
            order.append(x)
    order.reverse()
    up = {start: 1}
    down: dict[int, int] = {}
    for x in order:
        cx = up.get(x, 0)
        for rho in K.faces(x):
            if rho == partner[x]:
                continue
            down[rho] = down.get(rho, 0) + cx
            y = int(partner[rho])
            if y >= 0 and dims[y] > dims[rho]:
                up[y] = up.get(y, 0) + cx
    return up, down


def _unique_path(K: GComplex, partner: np.ndarray, up: dict, start: int, target: int) -> list[int]:
    """Backtrack the single gradient path start -> ... -> target as [x0, r0, x1, r1, ..., xk, target]."""
    path = [target]
    cell = target
    while True:
        preds = [x for x in K.cofaces(cell) if up.get(x, 0) > 0 and partner[x] != cell]
        assert len(preds) == 1, "path is not unique"
        x = preds[0]
        path.append(x)
        if x == start:
            break
        cell = int(partner[x])
        path.append(cell)
    path.reverse()
    return path


def cancel(matching: Matching, strat: Stratification) -> Matching:
    """Cancel critical pairs joined by a unique gradient path, a whole orbit at a time.

    A critical ``(d+1)``-cell ``t`` and critical ``d``-cell ``s`` of equal
    isotropy joined by exactly one gradient path are cancelled by reversing
    the path; every translate of the path is reversed simultaneously.  The
    move is skipped when translates overlap or when the result would not be
    acyclic.
    """
    K = strat.complex
    iso = strat.isotropy
    partner = matching.partner.copy()
    tried: set[tuple[int, int]] = set()
    progress = True
    while progress:
        progress = False
        crit = np.flatnonzero(partner < 0).tolist()
        for t in crit:
            if K.dims[t] == 0 or partner[t] >= 0:
                continue
            up, down = _gradient_paths(K, partner, t)
            targets = sorted(s for s, n in down.items()
                             if n == 1 and partner[s] < 0 and iso[s] == iso[t] and (s, t) not in tried)
            for s in targets:
                tried.add((s, t))
                if _try_reverse(K, partner, up, t, s):
                    progress = True
                    break
            if progress:
                break
    return Matching(K, partner)


def _try_reverse(K: GComplex, partner: np.ndarray, up: dict, t: int, s: int) -> bool:
    path = _unique_path(K, partner, up, t, s)
    translates = {}
    for g in range(K.group.order):
        moved = [int(K.images[g, c]) for c in path]
        translates.setdefault(moved[0], moved)
    cells: set[int] = set()
    for moved in translates.values():
        if cells.intersection(moved):
            return False
        cells.update(moved)
    saved = {c: int(partner[c]) for c in cells}
    new_pairs = []
    for moved in translates.values():
        # moved = [x0, r0, x1, r1, ..., xk, s]; new pairs (r_i, x_i) and (s, xk)
        uppers = moved[0::2]
        lowers = moved[1::2]
        for x, r in zip(uppers, lowers):
            partner[x] = r
            partner[r] = x
            new_pairs.append((r, x))
    if _creates_cycle(K, partner, new_pairs):
        for c, p in saved.items():
            partner[c] = p
        return False
    return True


# ------------------------------------------------------------ checks

def check_matching(m: Matching, strat: Stratification) -> list[str]:
    """Violations of the matching invariants; empty when valid."""
    K = strat.complex
    p = m.partner
    problems = []
    for i, j in enumerate(p):
        if j < 0:
            continue
        if p[j] != i:
            problems.append(f"partner relation not symmetric at {i}")
        elif abs(int(K.dims[j]) - int(K.dims[i])) != 1 or not (
                set(K.simplices[i]) <= set(K.simplices[j]) or set(K.simplices[j]) <= set(K.simplices[i])):
            problems.append(f"pair ({i}, {j}) is not a facet pair")
        elif strat.isotropy[i] != strat.isotropy[j]:
            problems.append(f"pair ({i}, {j}) crosses strata")
    for g in range(K.group.order):
        img = K.images[g]
        # p(g i) must equal g p(i)
        moved = np.where(p >= 0, img[np.maximum(p, 0)], -1)
        if not np.array_equal(p[img], moved):
            problems.append(f"pair set not invariant under element {g}")
            break
    if not problems and _creates_cycle(K, p, m.pairs):
        problems.append("matching has a closed gradient path")
    for c in strat.all_components():
        total = sum(1 if K.dims[i] % 2 == 0 else -1 for i in c.open_simplices if p[i] < 0)
        if total != c.chi_c:
            problems.append(f"component {c.id} of H={list(c.isotropy.elements)}: "
                            f"critical sum {total} != chi_c {c.chi_c}")
    return problems


@dataclass
class ComponentMorse:
    isotropy: tuple[int, ...]
    component: int
    chi_c: int
    critical: int
    critical_orbits: int
    closed: bool
    betti_sum: int | None  # only for components closed in M^H

    @property
    def gap(self) -> int | None:
        return None if self.betti_sum is None else self.critical - self.betti_sum


def morse_table(m: Matching, strat: Stratification) -> list[ComponentMorse]:
    """Per-component critical counts against the Morse lower bound."""
    K = strat.complex
    out = []
    for c in strat.all_components():
        crit = [i for i in c.open_simplices if m.partner[i] < 0]
        orbits = {min(K.orbit(i)) for i in crit}
        closed = c.is_closed()
        bsum = sum(betti(c.closure)) if closed else None
        out.append(ComponentMorse(c.isotropy.elements, c.id, c.chi_c, len(crit), len(orbits), closed, bsum))
    return out
