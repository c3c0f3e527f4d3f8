"""Bounded-s verification of nondefectivity for secant varieties of Chow varieties.

For a fixed s, induction on n reduces the question to finitely many (n, d):
the cases below the first subabundant n, outside the ranges already covered
by the known threshold functions s1 and s2 for n = 3 and d = 3. Quadrics are
settled by their closed form.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .ff_linalg import as_modulus
from .monomials import basis_size
from .terracini import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    d2_dimension,
    expected_dimension,
    secant_dimension,
)

SCAN_CEILING = 10_000

# (quadratic, linear, constant) coefficients by d mod 6
_S1 = {
    0: (Fraction(1, 18), Fraction(1, 6), Fraction(1)),
    1: (Fraction(1, 18), Fraction(2, 9), Fraction(-5, 18)),
    2: (Fraction(1, 18), Fraction(5, 18), Fraction(2, 9)),
    3: (Fraction(1, 18), Fraction(1, 6), Fraction(0)),
    4: (Fraction(1, 18), Fraction(2, 9), Fraction(2, 9)),
}
_S1[5] = _S1[2]
_S2 = {
    0: (Fraction(1, 18), Fraction(1, 3), Fraction(1)),
    1: (Fraction(1, 18), Fraction(7, 18), Fraction(14, 9)),
    2: (Fraction(1, 18), Fraction(4, 9), Fraction(8, 9)),
    3: (Fraction(1, 18), Fraction(1, 3), Fraction(1, 2)),
    4: (Fraction(1, 18), Fraction(7, 18), Fraction(5, 9)),
    5: (Fraction(1, 18), Fraction(4, 9), Fraction(7, 18)),
}


def _threshold(table, d: int) -> Fraction:
    if d < 3:
        raise ValueError(f"threshold functions are defined for d >= 3, got {d}")
    a, b, c = table[d % 6]
    return a * d * d + b * d + c


def s1(d: int) -> Fraction:
    """Lower threshold: s <= s1(d) is nondefective for n = 3 (and by symmetry d = 3)."""
    return _threshold(_S1, d)


def s2(d: int) -> Fraction:
    """Upper threshold: s >= s2(d) is nondefective for n = 3 (and d = 3)."""
    return _threshold(_S2, d)


def subabundant_bound(s: int, d: int) -> int:
    """Least n >= 1 with s(dn+1) <= C(n+d, d)."""
    for n in range(1, SCAN_CEILING + 1):
        if s * (d * n + 1) <= basis_size(n, d):
            return n
    raise RuntimeError(f"scan ceiling hit looking for the subabundant bound (s={s}, d={d})")


def _first(pred: Callable[[int], bool], start: int) -> int:
    for k in range(start, SCAN_CEILING + 1):
        if pred(k):
            return k
    raise RuntimeError("scan ceiling hit")


def _last(pred: Callable[[int], bool], start: int) -> int | None:
    """Largest k >= start with pred(k), for a predicate that is true on an initial run."""
    k = start
    while pred(k):
        k += 1
        if k > SCAN_CEILING:
            raise RuntimeError("scan ceiling hit")
    return k - 1 if k > start else None


@dataclass(frozen=True, order=True)
class Case:
    n: int
    d: int
    clause: str


@dataclass
class CaseList:
    s: int
    cases: list[Case] = field(default_factory=list)

    def pairs(self) -> set[tuple[int, int]]:
        return {(c.n, c.d) for c in self.cases}

    def __len__(self):
        return len(self.cases)

    def __iter__(self):
        return iter(self.cases)


def clause_bounds(s: int) -> dict:
    """The min/max quantities that delimit each clause, for display and testing."""
    return {
        "i_n_lo": _first(lambda n: s < s2(n), 3),
        "i_n_hi": subabundant_bound(s, 3),
        "ii_d_hi": _last(lambda d: s >= s2(d), 3),
        "iii_d_lo": _first(lambda d: s < s2(d), 3),
        "iii_d_hi": _last(lambda d: s > s1(d), 3),
    }


def enumerate_cases(s: int, no_trust: bool = False) -> CaseList:
    """(n, d) pairs that must be checked directly for this s.

    Clause i:   d = 3 and min{n: s < s2(n)} <= n <= subabundant bound.
    Clause ii:  4 <= d <= max{d: s >= s2(d)} and 4 <= n <= subabundant bound.
    Clause iii: min{d: s < s2(d)} <= d <= max{d: s > s1(d)} and 3 <= n <= bound.

    With ``no_trust`` every 3 <= n <= bound is listed for each d in the same
    degree window, so the n = 3 and d = 3 threshold results are rechecked too.
    """
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    b = clause_bounds(s)
    out: dict[tuple[int, int], Case] = {}

    def add(n, d, clause):
        out.setdefault((n, d), Case(n, d, clause))

    if no_trust:
        top = max(b["ii_d_hi"] or 3, b["iii_d_hi"] or 3, 3)
        for d in range(3, top + 1):
            for n in range(3, subabundant_bound(s, d) + 1):
                add(n, d, "all")
        return CaseList(s, sorted(out.values(), key=lambda c: (c.d, c.n)))

    for n in range(b["i_n_lo"], b["i_n_hi"] + 1):
        add(n, 3, "i")
    if b["ii_d_hi"] is not None:
        for d in range(4, b["ii_d_hi"] + 1):
            for n in range(4, subabundant_bound(s, d) + 1):
                add(n, d, "ii")
    if b["iii_d_hi"] is not None:
        for d in range(b["iii_d_lo"], b["iii_d_hi"] + 1):
            for n in range(3, subabundant_bound(s, d) + 1):
                add(n, d, "iii")
    return CaseList(s, sorted(out.values(), key=lambda c: (c.d, c.n)))


# ---------------------------------------------------------------------------
# verification driver


@dataclass(frozen=True)
class CaseResult:
    n: int
    d: int
    s: int
    method: str
    clause: str
    dim: int
    expected: int
    certified: bool
    seed: int | None = None
    trials_used: int = 0

    def sort_key(self):
        return (self.s, self.d, self.n)


@dataclass
class ConjectureReport:
    s_max: int
    prime: int
    root_seed: int
    verified: list[CaseResult] = field(default_factory=list)
    exceptions_confirmed: list[CaseResult] = field(default_factory=list)
    failures: list[CaseResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        def rows(items):
            out = []
            for r in items:
                row = asdict(r)
                if row["seed"] is not None:
                    row["seed"] = str(row["seed"])
                out.append(row)
            return out

        return {
            "s_max": self.s_max,
            "prime": str(self.prime),
            "root_seed": str(self.root_seed),
            "ok": self.ok,
            "verified": rows(self.verified),
            "exceptions_confirmed": rows(self.exceptions_confirmed),
            "failures": rows(self.failures),
        }


def _check_case(args) -> CaseResult:
    n, d, s, clause, trials, seed, p = args
    r = secant_dimension(n, d, s, trials, seed, p)
    return CaseResult(n, d, s, "rank", clause, r.dim_lower_bound, r.expected,
                      r.nondefective_certified, r.seed, r.trials_used)


def quadric_results(s: int, n_max: int | None = None) -> list[CaseResult]:
    """Closed-form d = 2 dimensions for 1 <= n <= n_max (default 2s + 1)."""
    n_max = 2 * s + 1 if n_max is None else n_max
    out = []
    for n in range(1, n_max + 1):
        dim, exp = d2_dimension(n, s), expected_dimension(n, 2, s)
        out.append(CaseResult(n, 2, s, "closed-form-d2", "d2", dim, exp, dim == exp))
    return out


def verify_conjecture(s_max: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                      p=None, jobs: int = 1, no_trust: bool = False,
                      progress: Callable[[str], None] | None = None) -> ConjectureReport:
    """Certify every case for 1 <= s <= s_max; the report lists every outcome."""
    if s_max < 1:
        raise ValueError(f"s_max must be positive, got {s_max}")
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    p = int(as_modulus(p))
    report = ConjectureReport(s_max, p, seed)
    tasks = []
    for s in range(1, s_max + 1):
        for c in enumerate_cases(s, no_trust):
            tasks.append((c.n, c.d, s, c.clause, trials, seed, p))
        for r in quadric_results(s):
            predicted_defective = 2 <= s <= r.n / 2
            if r.certified == predicted_defective:
                report.failures.append(r)
            elif r.certified:
                report.verified.append(r)
            else:
                report.exceptions_confirmed.append(r)
    # largest matrices first keeps a worker pool busy until the end
    tasks.sort(key=lambda t: -basis_size(t[0], t[1]) * t[1] * t[2])
    results = _run(tasks, jobs, progress)
    for r in results:
        (report.verified if r.certified else report.failures).append(r)
    for items in (report.verified, report.exceptions_confirmed, report.failures):
        items.sort(key=CaseResult.sort_key)
    return report


def _run(tasks: list, jobs: int, progress) -> Iterable[CaseResult]:
    total = len(tasks)
    results = []
    if jobs == 1:
        it = map(_check_case, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        it = pool.map(_check_case, tasks)
    try:
        for i, r in enumerate(it, 1):
            results.append(r)
            if progress is not None:
                progress(f"[{i}/{total}] s={r.s} d={r.d} n={r.n} "
                         f"{'ok' if r.certified else 'FAIL'} dim={r.dim}/{r.expected}")
    finally:
        if pool is not None:
            pool.shutdown()
    return results


# ---------------------------------------------------------------------------
# generic Chow rank


def generic_chow_rank(n: int, d: int) -> int:
    """ceil(C(n+d, d) / (dn+1)); valid when the relevant secant varieties are nondefective."""
    if n < 1 or d < 1:
        raise ValueError(f"need n, d >= 1, got ({n}, {d})")
    if d == 2:
        raise ValueError("quadrics are defective; use generic_chow_rank_d2")
    return -(-basis_size(n, d) // (d * n + 1))


def generic_chow_rank_d2(n: int) -> int:
    """Least s whose secant variety of products of two linear forms fills the space."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    full = basis_size(n, 2) - 1
    return _first(lambda s: d2_dimension(n, s) == full, 1)


def least_filling_s(n: int, d: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, p=None) -> int:
    """Least s whose computed secant dimension reaches the ambient space."""
    s = 1
    while not secant_dimension(n, d, s, trials, seed, p).fills_ambient:
        s += 1
    return s


__all__ = [
    "Case", "CaseList", "CaseResult", "ConjectureReport", "clause_bounds", "enumerate_cases",
    "generic_chow_rank", "generic_chow_rank_d2", "least_filling_s", "quadric_results",
    "s1", "s2", "subabundant_bound", "verify_conjecture",
]
