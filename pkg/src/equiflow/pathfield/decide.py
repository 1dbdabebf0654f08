"""The two decision procedures.

A G-complex admits a non-singular equivariant path field exactly when
``|chi|(M_H) = 0`` for every isotropy group ``H``.  An invariant subset ``A``
is the fixed set of some equivariant deformation exactly when every
component ``C`` of every ``M_H`` with ``chi(C) != 0`` has closure meeting
``A`` (the second statement needs ``dim M^H >= 2``; smaller fixed sets only
produce warnings).  Both decisions use the conjugacy-class representative
of each orbit type; the other conjugates are translates of it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..complex import Subcomplex
from ..errors import EmptyFixedSet, NotInvariant
from ..groups import OrbitType
from ..invariants import abs_chi
from ..stratify import Component, Stratification, closure_meets


@dataclass
class PathFieldDecision:
    verdict: bool
    abs_chi: list[tuple[OrbitType, int]]
    witnesses: list[Component] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "YES" if self.verdict else "NO"


@dataclass
class CipdDecision:
    verdict: bool
    fixed_set: Subcomplex
    violations: list[Component] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    fixed_dims: list[tuple[OrbitType, int]] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "YES" if self.verdict else "NO"


def decide_path_field(strat: Stratification) -> PathFieldDecision:
    values = []
    witnesses = []
    for t in strat.orbit_types:
        H = t.representative
        values.append((t, abs_chi(strat, H)))
        witnesses.extend(c for c in strat.components(H) if c.chi_c != 0)
    verdict = all(v == 0 for _, v in values)
    return PathFieldDecision(verdict, values, witnesses)


def decide_cipd(strat: Stratification, A: Subcomplex) -> CipdDecision:
    if A.parent is not strat.complex:
        raise ValueError("fixed set belongs to a different complex")
    if not A.simplices:
        raise EmptyFixedSet("the prescribed fixed set must be nonempty")
    if not A.is_invariant():
        raise NotInvariant("the prescribed fixed set is not invariant under the group action")
    violations = []
    warnings = []
    dims = []
    for t in strat.orbit_types:
        H = t.representative
        d = strat.fixed(H).dimension
        dims.append((t, d))
        if d < 2:
            warnings.append(f"orbit type {t.id} (H={list(H.elements)}): dim M^H = {d} < 2, "
                            "verdict for this type is advisory")
        for c in strat.components(H):
            if c.chi_c != 0 and not closure_meets(c, A):
                violations.append(c)
    return CipdDecision(not violations, A, violations, warnings, dims)
