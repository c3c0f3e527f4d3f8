"""Statement spaces A(n,d,s,t,u,v), their count function, and secant dimensions.

A statement space is spanned by products of generic linear forms:

* each of ``s`` d-tuples contributes ``pi_j(f) * R_1`` for j = 1..d
  (the affine tangent space to the Chow variety at ``prod f``);
* each of ``t`` (d+1)-tuples contributes ``pi_1(f)``;
* each of ``u`` (d+1)-tuples contributes ``pi_j(f)`` for j = 1..d+1;
* each of ``v`` d-tuples contributes ``pi_1(f) * R_1``;

where ``pi_j`` drops the j-th factor. Generic coefficients are replaced by
uniform random elements of GF(p). The rank of any such specialization is a
lower bound for the generic dimension over a field of characteristic zero,
so reaching the count ``a`` proves the statement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .ff_linalg import FIELD_DTYPE, PrimeModulus, as_modulus, make_rng, rank
from .monomials import basis_size, get_basis, mul_linear_coeffs

DEFAULT_TRIALS = 3
#: root seed used when the caller does not pick one
DEFAULT_SEED = 20160721


@dataclass(frozen=True, order=True)
class Statement:
    n: int
    d: int
    s: int = 0
    t: int = 0
    u: int = 0
    v: int = 0

    def __post_init__(self):
        for name in ("n", "d", "s", "t", "u", "v"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.d < 1 and (self.s or self.t or self.u or self.v):
            raise ValueError(f"degree {self.d} statement cannot carry blocks: {self}")

    @classmethod
    def of(cls, value) -> Statement:
        return value if isinstance(value, cls) else cls(*value)

    def astuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.n, self.d, self.s, self.t, self.u, self.v)

    def __str__(self):
        return "A(%d,%d,%d,%d,%d,%d)" % self.astuple()

    @property
    def rows(self) -> int:
        n, d = self.n, self.d
        return self.s * d * (n + 1) + self.t + self.u * (d + 1) + self.v * (n + 1)

    @property
    def cols(self) -> int:
        return basis_size(self.n, self.d)


def a_value(st) -> int:
    """Upper bound on dim A: s(dn+1) + t + u(d+1) + v(n+1).

    Each t-block is the span of one form, so t enters with coefficient 1.
    """
    st = Statement.of(st)
    n, d = st.n, st.d
    return st.s * (d * n + 1) + st.t + st.u * (d + 1) + st.v * (n + 1)


def is_subabundant(st) -> bool:
    st = Statement.of(st)
    return a_value(st) <= basis_size(st.n, st.d)


def derive_seed(root_seed: int, st, trial: int) -> int:
    """64-bit seed for one trial: SeedSequence keyed by (statement, trial) under the root seed."""
    st = Statement.of(st)
    ss = np.random.SeedSequence(int(root_seed), spawn_key=st.astuple() + (int(trial),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


# ---------------------------------------------------------------------------
# matrix construction


def _mul_poly(ca: np.ndarray, da: int, cb: np.ndarray, db: int, n: int, p: int) -> np.ndarray:
    """Product of a degree-``da`` and a degree-``db`` polynomial."""
    if da == 0:
        return (cb.astype(np.uint64) * np.uint64(int(ca[0])) % np.uint64(p)).astype(FIELD_DTYPE)
    if db == 0:
        return _mul_poly(cb, db, ca, da, n, p)
    if cb.size < ca.size:
        ca, da, cb, db = cb, db, ca, da
    ea = get_basis(n, da).exponents
    eb = get_basis(n, db).exponents
    target = get_basis(n, da + db)
    pp = np.uint64(p)
    cb64 = cb.astype(np.uint64)
    out = np.zeros(target.size, dtype=np.uint64)
    for i in np.flatnonzero(ca):
        # fixed monomial of the first factor: exponent shift is injective
        idx = target.indices_of(eb + ea[i])
        out[idx] += cb64 * np.uint64(int(ca[i])) % pp
        out %= pp
    return out.astype(FIELD_DTYPE)


def drop_one_products(forms: np.ndarray, n: int, p: int) -> list[np.ndarray]:
    """``[pi_1(forms), ..., pi_k(forms)]`` via cached prefix and suffix products."""
    k = len(forms)
    one = np.ones(1, dtype=FIELD_DTYPE)
    prefix = [one]
    for j in range(k - 1):
        prefix.append(mul_linear_coeffs(prefix[-1], n, j, forms[j], p))
    suffix = [one]
    for j in range(k - 1, 0, -1):
        suffix.append(mul_linear_coeffs(suffix[-1], n, k - 1 - j, forms[j], p))
    # prefix[i] = f_1..f_i, suffix[i] = f_{k-i+1}..f_k
    return [_mul_poly(prefix[j], j, suffix[k - 1 - j], k - 1 - j, n, p) for j in range(k)]


def _times_r1_rows(poly: np.ndarray, n: int, deg: int, out: np.ndarray, start: int) -> int:
    table = get_basis(n, deg).times_variable
    for k in range(n + 1):
        out[start + k, table[:, k]] = poly
    return start + n + 1


def _sample_tuple(rng: np.random.Generator, length: int, n: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(length, n + 1), dtype=np.int64)


def build_statement_matrix(st, seed, p=None) -> np.ndarray:
    """Rows spanning a random specialization of A(n,d,s,t,u,v) over GF(p).

    Layout: the s-blocks first (d*(n+1) rows each, ordered by j then k), then
    one row per t-block, d+1 rows per u-block, n+1 rows per v-block. Tuples are
    drawn from one generator in the same order, so the matrix for ``s`` blocks
    is a prefix of the one for ``s + 1`` under the same seed.
    """
    st = Statement.of(st)
    p = int(as_modulus(p))
    n, d = st.n, st.d
    cols = basis_size(n, d)
    out = np.zeros((st.rows, cols), dtype=FIELD_DTYPE)
    if st.rows == 0:
        return out
    rng = make_rng(seed)
    row = 0
    for _ in range(st.s):
        for pi in drop_one_products(_sample_tuple(rng, d, n, p), n, p):
            row = _times_r1_rows(pi, n, d - 1, out, row)
    for _ in range(st.t):
        forms = _sample_tuple(rng, d + 1, n, p)
        out[row] = drop_one_products(forms, n, p)[0]
        row += 1
    for _ in range(st.u):
        for pi in drop_one_products(_sample_tuple(rng, d + 1, n, p), n, p):
            out[row] = pi
            row += 1
    for _ in range(st.v):
        pi = drop_one_products(_sample_tuple(rng, d, n, p), n, p)[0]
        row = _times_r1_rows(pi, n, d - 1, out, row)
    assert row == st.rows
    return out


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class CheckOutcome:
    statement: Statement
    certified: bool
    achieved_rank: int
    target: int
    prime: int
    seed: int | None
    trials_used: int
    impossible: bool = False

    @property
    def vacuous(self) -> bool:
        return self.target == 0


def _trial_ranks(st: Statement, trials: int, root_seed: int, p: int) -> Iterator[tuple[int, int]]:
    for trial in range(trials):
        tseed = derive_seed(root_seed, st, trial)
        yield tseed, rank(build_statement_matrix(st, tseed, p), p, overwrite=True)


def check_statement(st, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, p=None) -> CheckOutcome:
    """Try up to ``trials`` random specializations; certified once one reaches a_value.

    Superabundant statements are reported impossible without linear algebra.
    """
    st = Statement.of(st)
    p = int(as_modulus(p))
    if trials < 1:
        raise ValueError("trials must be at least 1")
    target = a_value(st)
    if target == 0:
        return CheckOutcome(st, True, 0, 0, p, None, 0)
    if target > st.cols:
        return CheckOutcome(st, False, 0, target, p, None, 0, impossible=True)
    best, best_seed, used = -1, None, 0
    for tseed, r in _trial_ranks(st, trials, seed, p):
        used += 1
        if r > best:
            best, best_seed = r, tseed
        if r == target:
            break
    return CheckOutcome(st, best == target, best, target, p, best_seed, used)


def replay_rank(st, trial_seed: int, p) -> int:
    """Rank of the specialization built from an exact trial seed."""
    p = int(as_modulus(p))
    return rank(build_statement_matrix(Statement.of(st), trial_seed, p), p, overwrite=True)


# ---------------------------------------------------------------------------
# secant dimensions


@dataclass(frozen=True)
class SecantDimResult:
    n: int
    d: int
    s: int
    dim_lower_bound: int
    expected: int
    nondefective_certified: bool
    fills_ambient: bool
    prime: int | None = None
    seed: int | None = None
    trials_used: int = 0
    method: str = "rank"

    @property
    def ambient(self) -> int:
        return basis_size(self.n, self.d) - 1


def expected_dimension(n: int, d: int, s: int) -> int:
    """min{s(dn+1), C(n+d,d)} - 1."""
    if n < 1 or d < 1 or s < 1:
        raise ValueError(f"need n, d, s >= 1, got ({n}, {d}, {s})")
    return min(s * (d * n + 1), basis_size(n, d)) - 1


def d2_dimension(n: int, s: int) -> int:
    """Dimension of the s-th secant variety of products of two linear forms.

    The span of ``l_i * R_1`` over 2s generic forms is all of R_2 once
    2s > n, and otherwise has codimension C(n-2s+2, 2).
    """
    if n < 1 or s < 1:
        raise ValueError(f"need n, s >= 1, got ({n}, {s})")
    full = basis_size(n, 2)
    if 2 * s > n:
        return full - 1
    return min(s * (2 * n + 1) - 2 * s * (s - 1), full) - 1


def secant_dimension(n: int, d: int, s: int, trials: int = DEFAULT_TRIALS,
                     seed: int = DEFAULT_SEED, p=None) -> SecantDimResult:
    """Lower bound for dim sigma_s of the Chow variety via Terracini ranks.

    The bound is the best rank over up to ``trials`` specializations, minus
    one; it is certified nondefective when it reaches the expected dimension.
    """
    if n < 1 or d < 1 or s < 1:
        raise ValueError(f"need n, d, s >= 1, got ({n}, {d}, {s})")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p = int(as_modulus(p))
    expected = expected_dimension(n, d, s)
    ambient = basis_size(n, d) - 1
    if d == 1:
        return SecantDimResult(n, d, s, n, expected, True, True, method="linear")
    st = Statement(n, d, s)
    best, best_seed, used = -1, None, 0
    for tseed, r in _trial_ranks(st, trials, seed, p):
        used += 1
        if r > best:
            best, best_seed = r, tseed
        if r - 1 == expected:
            break
    dim = best - 1
    return SecantDimResult(n, d, s, dim, expected, dim == expected, dim == ambient,
                           prime=p, seed=best_seed, trials_used=used)


__all__ = [
    "CheckOutcome", "DEFAULT_SEED", "DEFAULT_TRIALS", "PrimeModulus", "SecantDimResult",
    "Statement", "a_value", "build_statement_matrix", "check_statement", "d2_dimension",
    "derive_seed", "drop_one_products", "expected_dimension", "is_subabundant",
    "replay_rank", "secant_dimension",
]
