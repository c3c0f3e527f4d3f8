"""Pure numpy fallback for the rank kernel, used when the compiled core is absent."""
import numpy as np


def rank_inplace(a, p, stop_at=-1):
    """Rank of ``a`` over GF(p). ``a`` is overwritten when it is already uint64.

    Requires p < 2**32 so that ``x + (p - 1)**2`` fits in an unsigned 64-bit word.
    """
    if a.dtype != np.uint64:
        a = a.astype(np.uint64)
    m, n = a.shape
    p = np.uint64(p)
    r = 0
    for c in range(n):
        if r == m or r == stop_at:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = np.uint64(pow(int(a[r, c]), -1, int(p)))
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            g = p - a[below, c]
            a[below, c:] = (a[below, c:] + g[:, None] * a[r, c:]) % p
        r += 1
    return r
