"""Prime-field arithmetic and dense rank.

The rank kernel comes from the compiled ``_ffcore`` extension when it is
importable and from the numpy implementation in ``_ffpure`` otherwise.
Set ``CHOWSECANT_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

if os.environ.get("CHOWSECANT_PURE"):
    from . import _ffpure as _kernel
    BACKEND = "python"
else:
    try:
        from . import _ffcore as _kernel
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _ffpure as _kernel
        BACKEND = "python"

#: largest prime below 2**31; recorded in every certificate
DEFAULT_PRIME = 2_147_483_647

#: storage type for residues
FIELD_DTYPE = np.uint32

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A prime 2**20 < p < 2**31 (the compiled kernel stores residues as uint32)."""

    p: int

    def __post_init__(self):
        p = int(self.p)
        if not (1 << 20) < p < (1 << 31):
            raise ValueError(f"prime must satisfy 2**20 < p < 2**31, got {p}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "p", p)

    def __int__(self):
        return self.p


DEFAULT_MODULUS = PrimeModulus(DEFAULT_PRIME)


def as_modulus(p) -> PrimeModulus:
    if p is None:
        return DEFAULT_MODULUS
    return p if isinstance(p, PrimeModulus) else PrimeModulus(int(p))


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` is an int, a SeedSequence or a Generator (used as is)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_uniform(count: int, seed, p) -> np.ndarray:
    """``count`` field elements drawn uniformly from [0, p), deterministic in (seed, count, p)."""
    p = int(as_modulus(p))
    return make_rng(seed).integers(0, p, size=count, dtype=np.int64).astype(FIELD_DTYPE)


def reduce_matrix(m, p) -> np.ndarray:
    """Copy of the 2-d integer matrix ``m`` as C-contiguous uint32 with entries in [0, p)."""
    p = int(as_modulus(p))
    a = np.asarray(m)
    if a.dtype.kind == "u":
        a = a.astype(np.uint64) % np.uint64(p)
    else:
        a = np.mod(a, p)
    return np.ascontiguousarray(a, dtype=FIELD_DTYPE)


def rank(m, p=None, *, overwrite: bool = False, stop_at: int | None = None) -> int:
    """Exact rank of ``m`` over GF(p).

    ``m`` must hold entries already in [0, p). A uint32 C-contiguous input is
    consumed when ``overwrite`` is true; otherwise a copy is eliminated.
    ``stop_at`` ends elimination after that many pivots (useful when an
    upper bound on the rank is known).
    """
    p = int(as_modulus(p))
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError("rank expects a 2-d matrix")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    if not (overwrite and a.dtype == FIELD_DTYPE and a.flags.c_contiguous and a.flags.writeable):
        a = np.array(a, dtype=FIELD_DTYPE, order="C")
    return int(_kernel.rank_inplace(a, p, -1 if stop_at is None else int(stop_at)))
