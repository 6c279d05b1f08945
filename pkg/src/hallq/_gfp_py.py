"""Pure numpy fallback for the GF(p) kernels.

Same contract as the Cython module `_gfp_cy`; selected at import time by
`hallq.gfp` when the extension is unavailable (or HALLQ_PURE_PYTHON=1).
"""

import numpy as np

BACKEND = "python"


def rref_inplace(a: np.ndarray, p: int) -> list:
    """Reduce `a` (int64, entries in [0,p)) to RREF in place; return pivot columns."""
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape (k, rows, cols)."""
    out = np.empty(mats.shape[0], dtype=np.int64)
    for i in range(mats.shape[0]):
        a = np.ascontiguousarray(mats[i]) % p
        out[i] = len(rref_inplace(a, p))
    return out
