"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--subdivisions 2]

Workloads come from a catalog complex subdivided a few times, so the
arrays have realistic shapes.  The first numba call (compilation or cache
load) is excluded from the timings.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from equiflow import _kernels as k
from equiflow.catalog import catalog
from equiflow.complex import barycentric_subdivision
from equiflow.pathfield import all_chains, build_displacement, build_matching
from equiflow.stratify import strata


def workloads(name: str, subdivisions: int):
    K = catalog(name)
    for _ in range(subdivisions):
        K = barycentric_subdivision(K)
    top = K.dimension
    rows = np.array([K.simplices[i] for i in K.simplices_of_dim(top)], dtype=np.int64)
    base = K.n_vertices + 1
    keys = k.encode_rows(rows, base)
    perms = np.ascontiguousarray(K.action, dtype=np.int64)
    chains = all_chains(K)
    image = build_displacement(K).image
    m = build_matching(strata(K))
    table = np.ascontiguousarray(K.group.table, dtype=np.int64)
    crit = m.critical
    src, dst = (crit[-1], crit[0]) if crit else (len(K) - 1, 0)
    return K, {
        "assoc_violation": (k.assoc_violation_np, k.assoc_violation_nb, (table,)),
        "simplex_images": (k.simplex_images_np, k.simplex_images_nb, (perms, rows, keys, base)),
        "pointwise_fixed": (k.pointwise_fixed_np, k.pointwise_fixed_nb, (perms, rows)),
        "flagged_chains": (k.flagged_chains_np, k.flagged_chains_nb, (chains, image)),
        "vpath_reaches": (k.vpath_reaches_py, k.vpath_reaches_nb,
                          (K.face_ptr, K.face_idx, m.partner, K.dims, src, dst)),
    }


def _same(a, b) -> bool:
    return np.array_equal(np.asarray(a), np.asarray(b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--complex", default="torus7-rot")
    ap.add_argument("--subdivisions", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    K, cases = workloads(args.complex, args.subdivisions)
    print(f"{args.complex} subdivided {args.subdivisions}x: f-vector {K.f_vector}, |G| = {K.group.order}")
    print(f"{'kernel':<18}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}  agree")
    for name, (f_np, f_nb, a) in cases.items():
        f_nb(*a)  # compile / load from cache
        agree = _same(f_np(*a), f_nb(*a))
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<18}{t_np:>12.3f}{t_nb:>12.3f}{t_np / max(t_nb, 1e-9):>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
