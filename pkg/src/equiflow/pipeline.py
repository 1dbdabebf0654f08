"""validate -> regularize -> stratify -> euler -> decide/construct/verify."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .catalog import NAMES, catalog
from .complex import (
    GComplex,
    barycentric_subdivision,
    manifold_warnings,
)
from .errors import EquiflowError, ParseError, SchemaError
from .groups import FiniteGroup, Subgroup, isomorphism_name, normalizer
from .invariants import euler_report
from .io import (
    complex_from_json,
    complex_to_json,
    digest,
    displacement_pairs_from_json,
    displacement_to_json,
    fixed_set_from_selector,
    load_document,
    transport,
)
from .pathfield import (
    DisplacementMap,
    build_displacement,
    build_matching,
    cancel,
    check_matching,
    decide_cipd,
    decide_path_field,
    morse_table,
    verify_displacement,
)
from .stratify import Component, Stratification, strata

COMMANDS = (
    "validate", "subdivide", "catalog", "stratify", "euler",
    "decide path-field", "decide cipd",
    "construct matching", "construct displacement",
    "verify displacement",
)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    fixed_set: str | None = None
    times: int = 1
    cancel: bool = False
    map_path: str | None = None
    out: str | None = None
    format: str = "both"
    max_group: int | None = None
    betti: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.times < 1:
            raise ValueError("--times must be positive")
        if self.max_group is not None and self.max_group < 1:
            raise ValueError("enumeration bound must be positive")
        if self.format not in ("json", "table", "both"):
            raise ValueError(f"unknown format {self.format!r}")


# ------------------------------------------------------------ serialisation helpers

def subgroup_label(G: FiniteGroup, H: Subgroup) -> str:
    return "{" + ",".join(G.names[h] for h in H.elements) + "}"


def _labels(strat: Stratification) -> dict[int, str]:
    G = strat.complex.group
    names = {t.id: isomorphism_name(G, t.representative) for t in strat.orbit_types}
    taken = list(names.values())
    # non-conjugate isomorphic types are told apart by their representative
    return {i: f"({n})" if taken.count(n) == 1 else f"({n}={subgroup_label(G, t.representative)})"
            for (i, n), t in zip(names.items(), strat.orbit_types)}


def _orbit_type(strat: Stratification, t) -> dict:
    G = strat.complex.group
    H = t.representative
    return {
        "id": t.id,
        "label": _labels(strat)[t.id],
        "elements": [G.names[h] for h in H.elements],
        "representative": list(H.elements),
        "order": H.order,
        "class_size": len(t.conjugates),
        "weyl_order": normalizer(G, H).order // H.order,
    }


def _component(K: GComplex, c: Component) -> dict:
    return {
        "id": c.id,
        "isotropy": list(c.isotropy.elements),
        "chi_c": c.chi_c,
        "dim": c.dim,
        "n_open": len(c.open_simplices),
        "closed": c.is_closed(),
        "least_simplex": [K.vertex_names[v] for v in K.simplices[c.least_simplex]],
    }


def _validation(K: GComplex) -> dict:
    return {
        "vertices": K.n_vertices,
        "f_vector": K.f_vector,
        "dimension": K.dimension,
        "chi": K.euler_characteristic,
        "group_order": K.group.order,
        "regular": K.regular,
        "manifold_warnings": manifold_warnings(K),
    }


def _stratification(strat: Stratification) -> dict:
    K = strat.complex
    rows = []
    for t in strat.orbit_types:
        comps = strat.components(t.representative)
        row = _orbit_type(strat, t)
        row.update({
            "fixed_dim": strat.fixed(t.representative).dimension,
            "n_components": len(comps),
            "component_dims": [c.dim for c in comps],
            "chi_c": [c.chi_c for c in comps],
            "stratum_size": len(strat.orbit_type_stratum(t)),
        })
        rows.append(row)
    return {"orbit_types": rows, "filtration_sizes": [len(m) for m in strat.filtration],
            "n_simplices": len(K)}


def _euler(strat: Stratification, with_betti: bool) -> dict:
    rep = euler_report(strat, with_betti)
    rows = []
    for r in rep.rows:
        row = _orbit_type(strat, r.orbit_type)
        row.update({
            "chi_fixed": r.chi_fixed,
            "abs_chi": r.abs_chi,
            "components": [
                {"id": c.id, "chi_c": c.chi_c, "dim": c.dim, "n_open": c.n_open, "closed": c.closed,
                 **({"betti": c.betti} if c.betti is not None else {})}
                for c in r.components
            ],
        })
        rows.append(row)
    return {"chi": rep.chi, "orbit_types": rows}


# ------------------------------------------------------------ run

class _Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.report: dict = {
            "tool": {"name": "equiflow", "version": __version__},
            "command": cfg.command,
        }
        self.warnings: list[str] = []
        self.verdicts: list[str] = []
        self.doc: dict | None = None
        self.original: GComplex | None = None
        self.chain: list[GComplex] = []

    def load(self) -> GComplex:
        self.doc = load_document(self.cfg.input)
        self.report["input"] = {"source": self.cfg.input, "digest": digest(self.doc)}
        K = complex_from_json(self.doc)
        self.original = K
        self.report["validation"] = _validation(K)
        self.warnings.extend(self.report["validation"]["manifold_warnings"])
        return K

    def regular(self, K: GComplex) -> GComplex:
        rounds = 0
        while not K.regular:
            if rounds == 2:
                from .errors import RegularizationFailed

                raise RegularizationFailed("action still irregular after 2 subdivisions")
            K = barycentric_subdivision(K)
            self.chain.append(K)
            rounds += 1
        if rounds:
            self.warnings.append(f"action not regular; subdivided {rounds} time(s)")
        self.report["regularization"] = {"subdivisions": rounds, "f_vector": K.f_vector}
        return K

    def fixed_set(self, K: GComplex, selector: str):
        A = fixed_set_from_selector(self.original, selector, self.doc)
        return transport(A, self.chain)


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute one command; returns the report and the exit code."""
    ctx = _Context(cfg)
    try:
        _dispatch(ctx)
    except (EquiflowError, ValueError) as exc:
        ctx.report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        ctx.report["warnings"] = ctx.warnings
        return ctx.report, 2
    ctx.report["warnings"] = ctx.warnings
    ctx.report["verdicts"] = ctx.verdicts
    code = 1 if any(v in ("NO", "FAIL") for v in ctx.verdicts) else 0
    return ctx.report, code


def _dispatch(ctx: _Context) -> None:
    cfg = ctx.cfg
    rep = ctx.report
    if cfg.command == "catalog":
        if cfg.input is None:
            rep["catalog"] = list(NAMES)
            return
        rep["complex"] = complex_to_json(catalog(cfg.input))
        _maybe_write(cfg, rep["complex"])
        return
    if cfg.input is None:
        raise SchemaError("an input file or catalog:<name> is required")
    K = ctx.load()
    if cfg.command == "validate":
        ctx.verdicts.append("PASS")
        if not K.regular:
            ctx.warnings.append("action is not regular; analysis commands will subdivide")
        return
    if cfg.command == "subdivide":
        for _ in range(cfg.times):
            K = barycentric_subdivision(K)
        rep["subdivision"] = {"times": cfg.times, "f_vector": K.f_vector, "regular": K.regular,
                              "chi": K.euler_characteristic}
        rep["complex"] = complex_to_json(K)
        _maybe_write(cfg, rep["complex"])
        return

    K = ctx.regular(K)
    if cfg.command in ("verify displacement",):
        _verify(ctx, K)
        return
    if cfg.command == "construct displacement":
        A = ctx.fixed_set(K, cfg.fixed_set) if cfg.fixed_set else None
        F = build_displacement(K, A)
        cert = verify_displacement(K, F)
        rep["displacement"] = {
            "strategies": F.strategies,
            "fixed_set_size": len(A) if A is not None else 0,
            "map": displacement_to_json(F.as_assignment()),
        }
        rep["certificate"] = _certificate(K, cert)
        ctx.verdicts.append(cert.label)
        _maybe_write(cfg, rep["displacement"]["map"])
        return

    strat = strata(K, cfg.max_group)
    rep["stratification"] = _stratification(strat)
    if cfg.command == "stratify":
        return
    rep["euler"] = _euler(strat, cfg.betti)
    if cfg.command == "euler":
        return
    if cfg.command == "decide path-field":
        d = decide_path_field(strat)
        rep["decision"] = {
            "kind": "path-field",
            "verdict": d.label,
            "abs_chi": [{"orbit_type": t.id, "label": _orbit_type(strat, t)["label"], "abs_chi": v}
                        for t, v in d.abs_chi],
            "witnesses": [_component(K, c) for c in d.witnesses],
        }
        ctx.verdicts.append(d.label)
        return
    if cfg.command == "decide cipd":
        if not cfg.fixed_set:
            raise SchemaError("decide cipd needs --fixed-set")
        A = ctx.fixed_set(K, cfg.fixed_set)
        d = decide_cipd(strat, A)
        rep["decision"] = {
            "kind": "cipd",
            "verdict": d.label,
            "fixed_set": A.as_lists(),
            "fixed_dims": [{"orbit_type": t.id, "dim": dim} for t, dim in d.fixed_dims],
            "violations": [_component(K, c) for c in d.violations],
        }
        ctx.warnings.extend(d.warnings)
        ctx.verdicts.append(d.label)
        return
    if cfg.command == "construct matching":
        m = build_matching(strat)
        if cfg.cancel:
            m = cancel(m, strat)
        problems = check_matching(m, strat)
        rows = morse_table(m, strat)
        rep["matching"] = {
            "cancelled": cfg.cancel,
            "n_pairs": len(m.pairs),
            "critical_by_dim": m.critical_by_dim(),
            "critical": [list(K.simplices[i]) for i in m.critical],
            "pairs": [[list(K.simplices[a]), list(K.simplices[b])] for a, b in m.pairs],
            "components": [
                {"isotropy": list(r.isotropy), "component": r.component, "chi_c": r.chi_c,
                 "critical": r.critical, "critical_orbits": r.critical_orbits,
                 "closed": r.closed, "betti_sum": r.betti_sum, "morse_gap": r.gap}
                for r in rows
            ],
            "problems": problems,
        }
        ctx.verdicts.append("FAIL" if problems else "PASS")
        return
    raise SchemaError(f"unhandled command {cfg.command}")  # pragma: no cover


def _verify(ctx: _Context, K: GComplex) -> None:
    cfg = ctx.cfg
    if not cfg.map_path:
        raise SchemaError("verify displacement needs a map file")
    try:
        obj = json.loads(Path(cfg.map_path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {cfg.map_path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{cfg.map_path}: invalid JSON ({exc.msg})") from None
    F = DisplacementMap.from_assignment(K, displacement_pairs_from_json(obj))
    cert = verify_displacement(K, F)
    ctx.report["certificate"] = _certificate(K, cert)
    ctx.verdicts.append(cert.label)


def _certificate(K: GComplex, cert) -> dict:
    return {
        "status": cert.label,
        "problems": cert.problems,
        "n_singular": len(cert.singular),
        "singular": [list(K.simplices[i]) for i in cert.singular],
        "n_chains": cert.n_chains,
        "flagged_chains": cert.flagged_chains,
        "fixed_point_free": cert.fixed_point_free,
        "singular_orbits": cert.singular_orbits,
    }


def _maybe_write(cfg: RunConfig, obj) -> None:
    if cfg.out:
        from .io import canonical_json

        Path(cfg.out).write_text(canonical_json(obj))
