"""Hot inner loops, each in two flavours.

Every kernel has a vectorised numpy implementation (``*_np``) and a loop
implementation compiled with ``numba.njit`` (``*_nb``).  The public names
(``assoc_violation`` etc.) are bound at import time: numba is used unless
``EQUIFLOW_DISABLE_NUMBA`` is set to a truthy value or numba is missing.
Both flavours must return identical results; ``tests/test_kernels.py``
checks this and ``benchmarks/bench_kernels.py`` times them.

Graph searches (``vpath_reaches``) have no sensible vectorised form, so the
fallback is the same loop run by the interpreter.
"""
import os

import numpy as np

_FLAG = os.environ.get("EQUIFLOW_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda fn: fn


USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

# largest key the positional simplex encoding may produce
_KEY_LIMIT = 2**62


def key_base_ok(base, width):
    return base ** width < _KEY_LIMIT


def encode_rows(rows, base):
    """Positional integer key of each (sorted) row; lexicographic order is kept."""
    rows = np.asarray(rows, dtype=np.int64)
    keys = np.zeros(rows.shape[:-1], dtype=np.int64)
    for j in range(rows.shape[-1]):
        keys = keys * base + rows[..., j]
    return keys


# ---------------------------------------------------------------- associativity


def assoc_violation_np(table):
    left = table[table]  # [a, b, c] -> (ab)c
    right = table[:, table]  # [a, b, c] -> a(bc)
    bad = np.argwhere(left != right)
    if len(bad):
        return bad[0].astype(np.int64)
    return np.full(3, -1, dtype=np.int64)


@njit(cache=True)
def assoc_violation_nb(table):
    n = table.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    out[0] = a
                    out[1] = b
                    out[2] = c
                    return out
    return out


# ---------------------------------------------------------------- simplex images


def simplex_images_np(perms, rows, keys, base):
    """out[g, i] = index (within ``rows``) of perms[g] applied to rows[i], or -1."""
    if rows.shape[0] == 0:
        return np.zeros((perms.shape[0], 0), dtype=np.int64)
    img = np.sort(perms[:, rows], axis=-1)
    img_keys = encode_rows(img, base)
    loc = np.searchsorted(keys, img_keys)
    loc = np.minimum(loc, len(keys) - 1)
    return np.where(keys[loc] == img_keys, loc, -1).astype(np.int64)


@njit(cache=True)
def simplex_images_nb(perms, rows, keys, base):
    n_g = perms.shape[0]
    n, k = rows.shape
    out = np.full((n_g, n), -1, dtype=np.int64)
    buf = np.empty(k, dtype=np.int64)
    for g in range(n_g):
        for i in range(n):
            for j in range(k):
                buf[j] = perms[g, rows[i, j]]
            # insertion sort; k is tiny
            for a in range(1, k):
                v = buf[a]
                b = a - 1
                while b >= 0 and buf[b] > v:
                    buf[b + 1] = buf[b]
                    b -= 1
                buf[b + 1] = v
            key = 0
            for j in range(k):
                key = key * base + buf[j]
            lo = 0
            hi = n
            while lo < hi:
                mid = (lo + hi) // 2
                if keys[mid] < key:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < n and keys[lo] == key:
                out[g, i] = lo
    return out


# ---------------------------------------------------------------- pointwise fixing


def pointwise_fixed_np(perms, rows):
    """out[g, i] is True iff perms[g] fixes every vertex of rows[i]."""
    return np.all(perms[:, rows] == rows[None, :, :], axis=-1)


@njit(cache=True)
def pointwise_fixed_nb(perms, rows):
    n_g = perms.shape[0]
    n, k = rows.shape
    out = np.ones((n_g, n), dtype=np.bool_)
    for g in range(n_g):
        for i in range(n):
            for j in range(k):
                if perms[g, rows[i, j]] != rows[i, j]:
                    out[g, i] = False
                    break
    return out


# ---------------------------------------------------------------- chain flags


def flagged_chains_np(chains, image):
    """Chains (rows padded with -1) whose member set meets its image set."""
    valid = chains >= 0
    img = np.where(valid, image[np.where(valid, chains, 0)], -2)
    hit = (img[:, :, None] == chains[:, None, :]) & valid[:, None, :]
    return hit.any(axis=(1, 2))


@njit(cache=True)
def flagged_chains_nb(chains, image):
    n, width = chains.shape
    out = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        for a in range(width):
            s = chains[i, a]
            if s < 0:
                continue
            t = image[s]
            for b in range(width):
                if chains[i, b] == t:
                    out[i] = True
                    break
            if out[i]:
                break
    return out


# ---------------------------------------------------------------- gradient paths


def vpath_reaches_py(face_ptr, face_idx, partner, dim, start, target):
    """True iff a gradient path leaving the cell ``start`` arrives at ``target``.

    From a (d+1)-cell we step down to any facet other than its own partner;
    from a d-cell we step up to its partner when that partner is a coface.
    """
    n = partner.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n + 1, dtype=np.int64)
    stack[0] = start
    top = 1
    seen[start] = True
    while top > 0:
        top -= 1
        tau = stack[top]
        for k in range(face_ptr[tau], face_ptr[tau + 1]):
            rho = face_idx[k]
            if rho == partner[tau]:
                continue
            if rho == target:
                return True
            nxt = partner[rho]
            if nxt >= 0 and dim[nxt] > dim[rho] and not seen[nxt]:
                seen[nxt] = True
                stack[top] = nxt
                top += 1
    return False


vpath_reaches_nb = njit(cache=True)(vpath_reaches_py)


if USE_NUMBA:
    assoc_violation = assoc_violation_nb
    simplex_images = simplex_images_nb
    pointwise_fixed = pointwise_fixed_nb
    flagged_chains = flagged_chains_nb
    vpath_reaches = vpath_reaches_nb
else:
    assoc_violation = assoc_violation_np
    simplex_images = simplex_images_np
    pointwise_fixed = pointwise_fixed_np
    flagged_chains = flagged_chains_np
    vpath_reaches = vpath_reaches_py
