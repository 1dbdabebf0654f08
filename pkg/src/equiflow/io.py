"""JSON documents for groups, complexes, fixed sets and displacement maps.

Complex document::

    {"vertices": ["a", "b", ...],
     "maximal_simplices": [[0, 1, 2], ...],
     "group": {"order": n, "table": [[...]], "names": [...]},
     "action": {"0": [perm...], "1": [...], ...},
     "fixed_set": [[...], ...]}            # optional

Every number is an integer; output is canonical (sorted keys) so equal
inputs give byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import catalog as _catalog
from .complex import (
    GComplex,
    Subcomplex,
    build_complex,
    full_subcomplex,
    orbit_closure,
    subcomplex,
    subdivide_subcomplex,
)
from .errors import ParseError, SchemaError
from .groups import FiniteGroup, build_group, make_subgroup
from .stratify import fixed_subcomplex


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def group_to_json(G: FiniteGroup) -> dict:
    return {"order": G.order, "table": G.table.tolist(), "names": list(G.names)}


def group_from_json(obj) -> FiniteGroup:
    if not isinstance(obj, dict) or "table" not in obj:
        raise SchemaError("group must be an object with a 'table'")
    table = obj["table"]
    if "order" in obj and (not isinstance(table, list) or obj["order"] != len(table)):
        raise SchemaError(f"group order {obj['order']} does not match table size")
    return build_group(table, obj.get("names"))


def complex_to_json(K: GComplex, fixed_set: Subcomplex | None = None) -> dict:
    doc = {
        "vertices": list(K.vertex_names),
        "maximal_simplices": [list(s) for s in K.maximal_simplices],
        "group": group_to_json(K.group),
        "action": {str(g): K.action[g].tolist() for g in range(K.group.order)},
    }
    if fixed_set is not None:
        doc["fixed_set"] = fixed_set.as_lists()
    return doc


def complex_from_json(obj) -> GComplex:
    if not isinstance(obj, dict):
        raise SchemaError("complex document must be a JSON object")
    for key in ("vertices", "maximal_simplices", "group", "action"):
        if key not in obj:
            raise SchemaError(f"complex document lacks '{key}'")
    verts = obj["vertices"]
    if isinstance(verts, bool) or not isinstance(verts, (list, int)):
        raise SchemaError("'vertices' must be a list of names or a count")
    tops = obj["maximal_simplices"]
    if not isinstance(tops, list) or not all(isinstance(s, list) for s in tops):
        raise SchemaError("'maximal_simplices' must be a list of vertex lists")
    G = group_from_json(obj["group"])
    action = obj["action"]
    if isinstance(action, dict):
        try:
            action = {int(k): v for k, v in action.items()}
        except ValueError:
            raise SchemaError("action keys must be element indices") from None
    return build_complex(verts, tops, G, action)


def load_document(source: str) -> dict:
    """``catalog:<name>`` or a path to a JSON file."""
    if source.startswith("catalog:"):
        return complex_to_json(_catalog.catalog(source[len("catalog:"):]))
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def fixed_set_from_selector(K: GComplex, selector: str, doc: dict | None = None) -> Subcomplex:
    """Resolve a fixed-set selector on ``K``.

    ``input``        the document's ``fixed_set`` entry (face closure taken)
    ``all``          the whole complex
    ``vertex:i,j``   invariant closure of the G-orbits of the listed vertices
    ``fixed:a,b``    ``M^H`` for the subgroup ``H`` with the listed elements
    ``[[...], ...]`` inline JSON simplex list (face closure taken; must be invariant)
    """
    sel = selector.strip()
    if sel == "all":
        return full_subcomplex(K)
    if sel == "input":
        if not doc or "fixed_set" not in doc:
            raise SchemaError("selector 'input' needs a 'fixed_set' entry in the document")
        return _inline(K, doc["fixed_set"])
    if sel.startswith("vertex:"):
        try:
            verts = [int(x) for x in sel[len("vertex:"):].split(",")]
        except ValueError:
            raise SchemaError(f"bad vertex selector {selector!r}") from None
        return orbit_closure(K, [[v] for v in verts])
    if sel.startswith("fixed:"):
        try:
            elems = [int(x) for x in sel[len("fixed:"):].split(",")]
        except ValueError:
            raise SchemaError(f"bad subgroup selector {selector!r}") from None
        return fixed_subcomplex(K, make_subgroup(K.group, elems))
    if sel.startswith("["):
        try:
            return _inline(K, json.loads(sel))
        except json.JSONDecodeError:
            raise ParseError(f"inline fixed set is not valid JSON: {selector!r}") from None
    raise SchemaError(f"unknown fixed-set selector {selector!r}")


def _inline(K: GComplex, simplices) -> Subcomplex:
    if not isinstance(simplices, list) or not all(isinstance(s, list) for s in simplices):
        raise SchemaError("fixed set must be a list of vertex lists")
    return subcomplex(K, simplices, close=True, require_invariant=True)


def transport(A: Subcomplex, chain: list[GComplex]) -> Subcomplex:
    """Carry ``A`` through successive subdivisions ``chain``."""
    for sd in chain:
        A = subdivide_subcomplex(A, sd)
    return A


def displacement_to_json(assignment) -> dict:
    return {"format": "equiflow-displacement", "assignment": assignment}


def displacement_pairs_from_json(obj) -> list:
    if not isinstance(obj, dict) or "assignment" not in obj:
        raise SchemaError("map document must be an object with an 'assignment'")
    pairs = obj["assignment"]
    if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(x, list) for x in p) for p in pairs):
        raise SchemaError("'assignment' must be a list of [simplex, image] pairs")
    return pairs
