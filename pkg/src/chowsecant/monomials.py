"""Degree-d monomial bases and dense polynomial arithmetic over GF(p).

Monomials in x_0..x_n of degree d are ordered lexicographically descending on
the exponent vector, e.g. for n=2, d=2::

    x0^2, x0*x1, x0*x2, x1^2, x1*x2, x2^2

Polynomials are dense coefficient vectors in that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .ff_linalg import DEFAULT_PRIME, FIELD_DTYPE, as_modulus

_INT64_MAX = (1 << 63) - 1


def basis_size(n: int, d: int) -> int:
    """Number of degree-``d`` monomials in ``n + 1`` variables, ``C(n+d, d)``.

    Raises OverflowError when the value does not fit a signed 64-bit word.
    """
    if n < 0 or d < 0:
        raise ValueError(f"need n >= 0 and d >= 0, got n={n}, d={d}")
    # multiplicative formula, exact division at every step
    k = min(n, d)
    value = 1
    for i in range(1, k + 1):
        value = value * (n + d - k + i) // i
        if value > _INT64_MAX:
            raise OverflowError(f"C({n + d}, {d}) exceeds 64-bit range")
    return value


@lru_cache(maxsize=None)
def _binom_table(top: int) -> np.ndarray:
    table = np.zeros((top + 1, top + 1), dtype=np.int64)
    for a in range(top + 1):
        for b in range(a + 1):
            table[a, b] = comb(a, b)
    return table


def _lex_desc_exponents(n: int, d: int) -> np.ndarray:
    nvars = n + 1
    out = np.zeros((basis_size(n, d), nvars), dtype=np.int64)
    row = 0
    stack = [(0, d, ())]
    # iterative DFS; pushing smaller exponents first pops larger ones first
    while stack:
        k, rem, prefix = stack.pop()
        if k == n:
            out[row, :n] = prefix
            out[row, n] = rem
            row += 1
            continue
        for e in range(rem + 1):
            stack.append((k + 1, rem - e, prefix + (e,)))
    return out


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 0 or self.d < 0:
            raise ValueError(f"need n >= 0 and d >= 0, got n={self.n}, d={self.d}")

    @cached_property
    def size(self) -> int:
        return basis_size(self.n, self.d)

    def __len__(self):
        return self.size

    @cached_property
    def exponents(self) -> np.ndarray:
        """All exponent vectors, row ``i`` being the monomial at index ``i``."""
        exps = _lex_desc_exponents(self.n, self.d)
        exps.setflags(write=False)
        return exps

    def _check_exponents(self, e) -> tuple[int, ...]:
        e = tuple(int(x) for x in e)
        if len(e) != self.n + 1:
            raise ValueError(f"exponent vector {e} must have length {self.n + 1}")
        if any(x < 0 for x in e) or sum(e) != self.d:
            raise ValueError(f"exponent vector {e} is not a degree-{self.d} monomial")
        return e

    def index_of(self, e: Sequence[int]) -> int:
        e = self._check_exponents(e)
        idx = 0
        rem = self.d
        for k in range(self.n):
            # vectors sharing the prefix but with a larger k-th exponent
            if rem > e[k]:
                idx += comb(rem - e[k] - 1 + self.n - k, self.n - k)
            rem -= e[k]
        return idx

    def indices_of(self, exps: np.ndarray) -> np.ndarray:
        """Vectorised ``index_of`` over the rows of ``exps`` (no validation)."""
        exps = np.asarray(exps, dtype=np.int64)
        table = _binom_table(self.n + self.d + 1)
        idx = np.zeros(exps.shape[0], dtype=np.int64)
        rem = np.full(exps.shape[0], self.d, dtype=np.int64)
        for k in range(self.n):
            gap = rem - exps[:, k]
            hit = gap > 0
            idx[hit] += table[gap[hit] - 1 + self.n - k, self.n - k]
            rem -= exps[:, k]
        return idx

    def exp_of(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside [0, {self.size})")
        out = []
        rem = self.d
        for k in range(self.n):
            for e in range(rem, -1, -1):
                count = comb(rem - e + self.n - k - 1, self.n - k - 1)
                if i < count:
                    break
                i -= count
            out.append(e)
            rem -= e
        out.append(rem)
        return tuple(out)

    @cached_property
    def times_variable(self) -> np.ndarray:
        """``T[i, k]`` is the index in degree ``d + 1`` of monomial ``i`` times ``x_k``."""
        up = MonomialBasis(self.n, self.d + 1)
        exps = self.exponents
        table = np.empty((self.size, self.n + 1), dtype=np.int64)
        for k in range(self.n + 1):
            shifted = exps.copy()
            shifted[:, k] += 1
            table[:, k] = up.indices_of(shifted)
        table.setflags(write=False)
        return table


@lru_cache(maxsize=256)
def get_basis(n: int, d: int) -> MonomialBasis:
    """Shared basis instance so the cached tables are built once per (n, d)."""
    return MonomialBasis(n, d)


def mul_linear_coeffs(coeffs: np.ndarray, n: int, e: int, form, p: int) -> np.ndarray:
    """Coefficients over degree ``e + 1`` of (poly of degree ``e``) times a linear form."""
    table = get_basis(n, e).times_variable
    c = np.asarray(coeffs, dtype=np.uint64)
    out = np.zeros(basis_size(n, e + 1), dtype=np.uint64)
    pp = np.uint64(p)
    for k in range(n + 1):
        lk = np.uint64(int(form[k]) % p)
        if lk:
            # x_k-multiplication is injective, so plain fancy-index accumulation is safe
            out[table[:, k]] += (c * lk) % pp
            out %= pp
    return out.astype(FIELD_DTYPE)


def product_coeffs(forms: Sequence, n: int, p: int) -> np.ndarray:
    """Coefficients of the product of ``forms`` (degree ``len(forms)``)."""
    acc = np.ones(1, dtype=FIELD_DTYPE)
    for e, form in enumerate(forms):
        acc = mul_linear_coeffs(acc, n, e, form, p)
    return acc


@dataclass(frozen=True, eq=False)
class PolyVector:
    """An element of R_d as a dense coefficient vector mod ``p``."""

    basis: MonomialBasis
    coeffs: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {c.shape}")
        p = int(self.p)
        if c.dtype.kind == "u":
            c = c.astype(np.uint64) % np.uint64(p)
        else:
            c = np.mod(c.astype(np.int64), p)
        object.__setattr__(self, "coeffs", c.astype(FIELD_DTYPE))
        object.__setattr__(self, "p", p)

    @classmethod
    def monomial(cls, basis: MonomialBasis, e, p: int = DEFAULT_PRIME) -> PolyVector:
        c = np.zeros(basis.size, dtype=FIELD_DTYPE)
        c[basis.index_of(e)] = 1
        return cls(basis, c, p)

    def __add__(self, other: PolyVector) -> PolyVector:
        if self.basis != other.basis or self.p != other.p:
            raise ValueError("cannot add polynomials over different bases or fields")
        s = (self.coeffs.astype(np.uint64) + other.coeffs) % np.uint64(self.p)
        return PolyVector(self.basis, s, self.p)

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return (self.basis == other.basis and self.p == other.p
                and np.array_equal(self.coeffs, other.coeffs))

    def as_dict(self) -> dict[tuple[int, ...], int]:
        """Nonzero terms keyed by exponent vector."""
        return {tuple(int(x) for x in self.basis.exponents[i]): int(self.coeffs[i])
                for i in np.flatnonzero(self.coeffs)}


def multiply_by_linear(poly: PolyVector, form) -> PolyVector:
    """``poly * form`` where ``form`` lists the coefficients of x_0..x_n."""
    n, e = poly.basis.n, poly.basis.d
    if len(form) != n + 1:
        raise ValueError(f"linear form has {len(form)} coefficients, expected {n + 1}")
    coeffs = mul_linear_coeffs(poly.coeffs, n, e, form, poly.p)
    return PolyVector(get_basis(n, e + 1), coeffs, poly.p)


def expand_product(forms: Sequence, target: MonomialBasis, p=None) -> PolyVector:
    """Expand a product of ``target.d`` linear forms into ``target`` coordinates."""
    p = int(as_modulus(p))
    if not forms:
        raise ValueError("expand_product needs at least one linear form")
    if len(forms) != target.d:
        raise ValueError(f"{len(forms)} factors cannot give degree {target.d}")
    for f in forms:
        if len(f) != target.n + 1:
            raise ValueError(f"linear form has {len(f)} coefficients, expected {target.n + 1}")
    return PolyVector(target, product_coeffs(forms, target.n, p), p)
