"""Independent reference computations used as test oracles.

Nothing here imports the package's arithmetic: ranks use plain Python
integers, monomial orders come from sorting, products from dictionaries.
"""
from fractions import Fraction
from itertools import combinations
from math import comb


def naive_rank_mod(rows, p):
    """Row reduction on lists of Python ints."""
    m = [[x % p for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def planted_matrix(rng, rows, r, cols, p):
    """rows x cols product of random rows x r and r x cols factors (rank <= r)."""
    a = [[rng.randrange(p) for _ in range(r)] for _ in range(rows)]
    b = [[rng.randrange(p) for _ in range(cols)] for _ in range(r)]
    return [[sum(x * y for x, y in zip(ar, col)) % p for col in zip(*b)] for ar in a]


def rational_rank(rows):
    """Rank over Q with exact fractions."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def compositions(n, d):
    """All exponent vectors of length n+1 summing to d (stars and bars)."""
    out = []
    for bars in combinations(range(d + n), n):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(d + n - prev - 1)
        out.append(tuple(e))
    return out


def lex_desc_basis(n, d):
    return sorted(compositions(n, d), reverse=True)


def poly_mul(a, b, p=None):
    """Product of dict polynomials {exponent tuple: coeff}."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    if p is not None:
        out = {e: c % p for e, c in out.items()}
    return {e: c for e, c in out.items() if c}


def linear_to_dict(form):
    nv = len(form)
    return {tuple(int(i == k) for i in range(nv)): c for k, c in enumerate(form) if c}


def product_dict(forms, p=None):
    acc = {tuple(0 for _ in forms[0]): 1}
    for f in forms:
        acc = poly_mul(acc, linear_to_dict(f), p)
    return acc


def dict_to_vector(poly, n, d, p=None):
    basis = lex_desc_basis(n, d)
    vec = [poly.get(e, 0) for e in basis]
    return [x % p for x in vec] if p is not None else vec


def statement_rows_rational(n, d, s, t, u, v, rng, lo=-9, hi=9):
    """Spanning set of A(n,d,s,t,u,v) over Q with small random integer forms."""
    def form():
        return [rng.randint(lo, hi) for _ in range(n + 1)]

    def drop(forms, j):
        return forms[:j] + forms[j + 1:]

    def prod(forms):
        if not forms:
            return {tuple([0] * (n + 1)): 1}
        return product_dict(forms)

    xs = [[int(i == k) for i in range(n + 1)] for k in range(n + 1)]
    rows = []
    for _ in range(s):
        f = [form() for _ in range(d)]
        for j in range(d):
            base = prod(drop(f, j))
            for x in xs:
                rows.append(dict_to_vector(poly_mul(base, linear_to_dict(x)), n, d))
    for _ in range(t):
        f = [form() for _ in range(d + 1)]
        rows.append(dict_to_vector(prod(drop(f, 0)), n, d))
    for _ in range(u):
        f = [form() for _ in range(d + 1)]
        for j in range(d + 1):
            rows.append(dict_to_vector(prod(drop(f, j)), n, d))
    for _ in range(v):
        f = [form() for _ in range(d)]
        base = prod(drop(f, 0))
        for x in xs:
            rows.append(dict_to_vector(poly_mul(base, linear_to_dict(x)), n, d))
    return rows


# ---------------------------------------------------------------------------
# threshold functions and case clauses, by brute force over a box

_S1_TEXT = {
    0: "1/18 1/6 1", 1: "1/18 2/9 -5/18", 2: "1/18 5/18 2/9",
    3: "1/18 1/6 0", 4: "1/18 2/9 2/9", 5: "1/18 5/18 2/9",
}
_S2_TEXT = {
    0: "1/18 1/3 1", 1: "1/18 7/18 14/9", 2: "1/18 4/9 8/9",
    3: "1/18 1/3 1/2", 4: "1/18 7/18 5/9", 5: "1/18 4/9 7/18",
}


def _eval(text, d):
    a, b, c = (Fraction(x) for x in text.split())
    return a * d ** 2 + b * d + c


def s1_oracle(d):
    return _eval(_S1_TEXT[d % 6], d)


def s2_oracle(d):
    return _eval(_S2_TEXT[d % 6], d)


def clause_cases_oracle(s, box=80):
    """(n, d) pairs of the three clauses, each min/max taken over the whole box."""
    def bound(d):
        return min(n for n in range(1, 10 * box) if Fraction(comb(n + d, d), d * n + 1) >= s)

    out = set()
    rng = range(3, box)
    n_lo = min(n for n in rng if s < s2_oracle(n))
    for n in range(n_lo, bound(3) + 1):
        out.add((n, 3))
    ii = [d for d in rng if s >= s2_oracle(d)]
    if ii:
        # the thresholds are non-decreasing, so the box maximum is the true one
        for d in range(4, max(ii) + 1):
            out.update((n, d) for n in range(4, bound(d) + 1))
    d_lo = min(d for d in rng if s < s2_oracle(d))
    iii = [d for d in rng if s > s1_oracle(d)]
    if iii:
        for d in range(d_lo, max(iii) + 1):
            out.update((n, d) for n in range(3, bound(d) + 1))
    return out
