"""Euler characteristics and rational Betti numbers, all in exact integers."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .complex import Subcomplex, full_subcomplex
from .groups import OrbitType, Subgroup
from .stratify import Component, Stratification


def alternating_count(dims: Iterable[int]) -> int:
    return sum(1 if d % 2 == 0 else -1 for d in dims)


def chi_subcomplex(L: Subcomplex) -> int:
    dims = L.parent.dims
    return alternating_count(int(dims[i]) for i in L.simplices)


def chi_c(c: Component) -> int:
    """Compactly supported Euler characteristic: alternating count of open cells."""
    dims = c.closure.parent.dims
    return alternating_count(int(dims[i]) for i in c.open_simplices)


def abs_chi(strat: Stratification, H: Subgroup) -> int:
    """``|chi|(M_H)``: sum of ``|chi_c|`` over components of the open stratum."""
    return sum(abs(c.chi_c) for c in strat.components(H))


# ------------------------------------------------------------ rational homology

def _reduce_column(col: dict, pivots: dict) -> bool:
    """Reduce ``col`` in place against ``pivots``; True if it becomes a new pivot."""
    while col:
        low = max(col)
        piv = pivots.get(low)
        if piv is None:
            pivots[low] = col
            return True
        a, b = piv[low], col[low]
        # col <- a*col - b*piv, then strip the content
        new = {r: a * v for r, v in col.items()}
        for r, v in piv.items():
            x = new.get(r, 0) - b * v
            if x:
                new[r] = x
            else:
                new.pop(r, None)
        g = 0
        for v in new.values():
            g = gcd(g, v)
        if g > 1:
            new = {r: v // g for r, v in new.items()}
        col.clear()
        col.update(new)
    return False


def boundary_rank(L: Subcomplex, d: int) -> int:
    """Rank over Q of the boundary map from d-chains to (d-1)-chains of ``L``."""
    if d <= 0:
        return 0
    K = L.parent
    pivots: dict = {}
    rank = 0
    for i in sorted(L.simplices):
        if K.dims[i] != d:
            continue
        s = K.simplices[i]
        col = {}
        for j in range(len(s)):
            f = K.index[s[:j] + s[j + 1:]]
            col[f] = -1 if j % 2 else 1
        if _reduce_column(col, pivots):
            rank += 1
    return rank


def betti(L: Subcomplex) -> list[int]:
    """Rational Betti numbers ``[b_0, ..., b_dim]``; ``[]`` for the empty complex."""
    top = L.dimension
    if top < 0:
        return []
    K = L.parent
    counts = [0] * (top + 1)
    for i in L.simplices:
        counts[int(K.dims[i])] += 1
    ranks = [boundary_rank(L, d) for d in range(top + 2)]
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]


# ------------------------------------------------------------ report

@dataclass
class ComponentEuler:
    id: int
    chi_c: int
    dim: int
    n_open: int
    closed: bool
    betti: list[int] | None = None


@dataclass
class OrbitTypeEuler:
    orbit_type: OrbitType
    chi_fixed: int
    abs_chi: int
    components: list[ComponentEuler] = field(default_factory=list)


@dataclass
class EulerReport:
    chi: int
    rows: list[OrbitTypeEuler]

    def abs_chi_by_type(self) -> dict[int, int]:
        return {r.orbit_type.id: r.abs_chi for r in self.rows}


def euler_report(strat: Stratification, with_betti: bool = False) -> EulerReport:
    rows = []
    for t in strat.orbit_types:
        # conjugates of a realized isotropy group are realized too
        H = t.representative
        comps = []
        for c in strat.components(H):
            b = betti(c.closure) if with_betti else None
            comps.append(ComponentEuler(c.id, c.chi_c, c.dim, len(c.open_simplices), c.is_closed(), b))
        rows.append(OrbitTypeEuler(t, chi_subcomplex(strat.fixed(H)), abs_chi(strat, H), comps))
    return EulerReport(chi_subcomplex(full_subcomplex(strat.complex)), rows)


def additivity_defect(strat: Stratification, H: Subgroup) -> int:
    """``chi(M^H)`` minus the sum of ``chi_c`` over strata inside ``M^H`` (zero when consistent)."""
    total = 0
    for K in strat.strata:
        if H.issubset(K):
            total += sum(c.chi_c for c in strat.components(K))
    return chi_subcomplex(strat.fixed(H)) - total
