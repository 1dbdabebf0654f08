"""Render pipeline reports as canonical JSON or plain-text tables."""
from __future__ import annotations

from .io import canonical_json


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cells = [[str(x) for x in r] for r in rows]
    widths = [max(len(h), *(len(r[k]) for r in cells)) if cells else len(h) for k, h in enumerate(headers)]
    line = lambda r: "  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip()
    return [line(headers), line(["-" * w for w in widths])] + [line(r) for r in cells]


def _header(report: dict) -> list[str]:
    tool = report.get("tool", {})
    out = [f"{tool.get('name', 'equiflow')} {tool.get('version', '')}  {report.get('command', '')}".rstrip()]
    if "input" in report:
        out.append(f"input   {report['input']['source']}  sha256:{report['input']['digest'][:16]}")
    return out


def _validation(v: dict) -> list[str]:
    return [
        "",
        "complex",
        f"  vertices {v['vertices']}  dimension {v['dimension']}  f-vector {v['f_vector']}  chi {v['chi']}",
        f"  group order {v['group_order']}  regular action {'yes' if v['regular'] else 'no'}",
    ]


def _stratification(s: dict) -> list[str]:
    rows = [[r["label"], r["order"], r["class_size"], r["weyl_order"], r["fixed_dim"],
             r["n_components"], r["component_dims"], r["chi_c"]] for r in s["orbit_types"]]
    return ["", "stratification"] + _table(
        ["orbit type", "|H|", "conj", "|WH|", "dim M^H", "components", "dims", "chi_c"], rows)


def _euler(e: dict) -> list[str]:
    rows = [[r["label"], r["chi_fixed"], [c["chi_c"] for c in r["components"]], r["abs_chi"]]
            for r in e["orbit_types"]]
    out = ["", f"euler (chi = {e['chi']})"] + _table(["orbit type", "chi(M^H)", "chi_c", "abs_chi"], rows)
    with_betti = [(r["label"], c) for r in e["orbit_types"] for c in r["components"] if "betti" in c]
    if with_betti:
        out += ["", "component closures"] + _table(
            ["orbit type", "component", "dim", "closed", "betti"],
            [[lab, c["id"], c["dim"], "yes" if c["closed"] else "no", c["betti"]] for lab, c in with_betti])
    return out


def _components(title: str, comps: list[dict]) -> list[str]:
    if not comps:
        return []
    return [f"  {title}"] + ["    " + line for line in _table(
        ["isotropy", "component", "dim", "chi_c", "least simplex"],
        [[c["isotropy"], c["id"], c["dim"], c["chi_c"], "{" + ",".join(c["least_simplex"]) + "}"] for c in comps])]


def _decision(d: dict) -> list[str]:
    out = ["", f"decision ({d['kind']}): {d['verdict']}"]
    if d["kind"] == "path-field":
        out += ["  " + line for line in _table(
            ["orbit type", "abs_chi"], [[r["label"], r["abs_chi"]] for r in d["abs_chi"]])]
        out += _components("witnesses", d["witnesses"])
    else:
        out.append(f"  fixed set: {len(d['fixed_set'])} simplices")
        out += _components("violations", d["violations"])
    return out


def _matching(m: dict) -> list[str]:
    out = ["", f"matching ({'cancelled' if m['cancelled'] else 'greedy'}): {m['n_pairs']} pairs, "
               f"critical by dimension {m['critical_by_dim']}"]
    out += _table(["isotropy", "component", "chi_c", "critical", "orbits", "betti sum", "gap"],
                  [[c["isotropy"], c["component"], c["chi_c"], c["critical"], c["critical_orbits"],
                    "-" if c["betti_sum"] is None else c["betti_sum"],
                    "-" if c["morse_gap"] is None else c["morse_gap"]] for c in m["components"]])
    out += [f"  problem: {p}" for p in m["problems"]]
    return out


def _displacement(d: dict) -> list[str]:
    out = ["", "displacement"]
    out += _table(["components", "strategy"], [[s["components"], s["strategy"]] for s in d["strategies"]])
    return out


def _certificate(c: dict) -> list[str]:
    out = ["", f"certificate: {c['status']}",
           f"  singular simplices {c['n_singular']}  flagged chains {c['flagged_chains']} of {c['n_chains']}"
           f"  fixed-point free {'yes' if c['fixed_point_free'] else 'no'}"]
    out += [f"  problem: {p}" for p in c["problems"]]
    for g in c["singular_orbits"]:
        out.append(f"  isotropy {g['isotropy']} component {g['component']}: {g['singular_orbits']} singular orbit(s)")
    return out


def render_table(report: dict) -> str:
    out = _header(report)
    if "catalog" in report:
        out += ["", "catalog entries"] + [f"  {n}" for n in report["catalog"]]
    if "validation" in report:
        out += _validation(report["validation"])
    if report.get("regularization", {}).get("subdivisions"):
        r = report["regularization"]
        out.append(f"  subdivided {r['subdivisions']}x for regularity, f-vector {r['f_vector']}")
    if "subdivision" in report:
        s = report["subdivision"]
        out += ["", f"subdivided {s['times']}x: f-vector {s['f_vector']}  chi {s['chi']}  "
                    f"regular {'yes' if s['regular'] else 'no'}"]
    for key, fn in (("stratification", _stratification), ("euler", _euler), ("decision", _decision),
                    ("matching", _matching), ("displacement", _displacement), ("certificate", _certificate)):
        if key in report:
            out += fn(report[key])
    if report.get("verdicts"):
        out += ["", "verdict: " + ", ".join(report["verdicts"])]
    if "error" in report:
        out += ["", f"error: {report['error']['type']}: {report['error']['message']}"]
    if report.get("warnings"):
        out += ["", "warnings"] + [f"  - {w}" for w in report["warnings"]]
    return "\n".join(out) + "\n"


def render(report: dict, fmt: str = "json") -> str:
    """``json``, ``table`` or ``both`` (table first, then the JSON document)."""
    if fmt == "json":
        return canonical_json(report)
    if fmt == "table":
        return render_table(report)
    if fmt == "both":
        return render_table(report) + "\n" + canonical_json(report)
    raise ValueError(f"unknown format {fmt!r}")
