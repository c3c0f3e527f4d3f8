"""Proof search over statement spaces with replayable certificates.

Three inference rules are available besides direct rank checks:

* **split**: for n >= 2, d >= 3 and a splitting of the block counts, the
  statement (n,d,s,t,u,v) is true and subabundant when the three statements

      (n-1, d,   s'', t''+u', u'',    s'+v'')
      (n-1, d-1, s',  t'+v'', s''+u', v')
      (n-1, d-2, 0,   v',     s',     0)

  are all subabundant and true;
* **lemma-f**: if (n,d+1,s,0,0,0) is true and subabundant then so is
  (n,d,0,0,s,0);
* closed forms for d <= 2 and empty statements.

A certificate is a tree whose leaves are trivial facts or modular rank
computations recorded with their seed and prime.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterator

from .ff_linalg import as_modulus
from .monomials import basis_size
from .terracini import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    Statement,
    a_value,
    check_statement,
    d2_dimension,
    is_subabundant,
    replay_rank,
)

CERT_VERSION = 1
DEFAULT_BUDGET = 100_000


class Method(str, enum.Enum):
    DIRECT = "direct"
    SPLIT = "split"
    LEMMA_F = "lemma-f"
    CLOSED_FORM_D2 = "closed-form-d2"
    TRIVIAL_D1 = "trivial-d1"
    TRIVIAL_EMPTY = "trivial-empty"


class ProofFailure(Exception):
    """The statement could not be proved."""


class NotSubabundant(ProofFailure, ValueError):
    pass


class BudgetExhausted(ProofFailure):
    pass


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Splitting:
    """Block counts split as s = s1 + s2, ... (s1 is s', s2 is s'')."""

    s1: int = 0
    s2: int = 0
    t1: int = 0
    t2: int = 0
    u1: int = 0
    u2: int = 0
    v1: int = 0
    v2: int = 0

    def __post_init__(self):
        if min(self.astuple()) < 0:
            raise ValueError(f"splitting entries must be nonnegative: {self}")

    def astuple(self):
        return (self.s1, self.s2, self.t1, self.t2, self.u1, self.u2, self.v1, self.v2)

    def matches(self, st: Statement) -> bool:
        return (self.s1 + self.s2 == st.s and self.t1 + self.t2 == st.t
                and self.u1 + self.u2 == st.u and self.v1 + self.v2 == st.v)

    @classmethod
    def of(cls, st: Statement, s1: int = 0, t1: int = 0, u1: int = 0, v1: int = 0) -> Splitting:
        return cls(s1, st.s - s1, t1, st.t - t1, u1, st.u - u1, v1, st.v - v1)


@dataclass(frozen=True)
class Evidence:
    seed: int
    prime: int
    rank: int
    rows: int
    cols: int
    trials_used: int


@dataclass(frozen=True, eq=False)
class Certificate:
    statement: Statement
    method: Method
    splitting: Splitting | None = None
    children: tuple[Certificate, ...] = ()
    evidence: Evidence | None = None

    def walk(self, path: str = "root") -> Iterator[tuple[str, Certificate]]:
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(f"{path}/{i}")

    def distinct(self) -> Iterator[Certificate]:
        """Each node once, shared subtrees included a single time."""
        seen: set[int] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> Iterator[Certificate]:
        return (node for node in self.distinct() if not node.children)

    @property
    def depth(self) -> int:
        memo: dict[int, int] = {}

        def measure(node):
            # shared subtrees are measured once
            if id(node) not in memo:
                memo[id(node)] = 1 + max((measure(c) for c in node.children), default=0)
            return memo[id(node)]

        return measure(self)

    def count(self, method: Method) -> int:
        """Distinct nodes using ``method``."""
        return sum(1 for node in self.distinct() if node.method is method)


def split_children(st, sp: Splitting) -> list[Statement]:
    st = Statement.of(st)
    if st.n < 2 or st.d < 3:
        raise ValueError(f"splitting needs n >= 2 and d >= 3, got {st}")
    if not sp.matches(st):
        raise ValueError(f"splitting {sp.astuple()} does not sum to the blocks of {st}")
    n, d = st.n, st.d
    return [
        Statement(n - 1, d, sp.s2, sp.t2 + sp.u1, sp.u2, sp.s1 + sp.v2),
        Statement(n - 1, d - 1, sp.s1, sp.t1 + sp.v2, sp.s2 + sp.u1, sp.v1),
        Statement(n - 1, d - 2, 0, sp.v1, sp.s1, 0),
    ]


def lemma_f_consequence(st) -> Statement:
    """(n,d,s,0,0,0) true and subabundant gives (n,d-1,0,0,s,0) true and subabundant."""
    st = Statement.of(st)
    if st.t or st.u or st.v or st.d < 2:
        raise ValueError(f"lemma-f needs a statement (n,d,s,0,0,0) with d >= 2, got {st}")
    return Statement(st.n, st.d - 1, 0, 0, st.s, 0)


def _s1_order(s: int) -> list[int]:
    # the pattern s' = 0 first (induction on n), then balanced splits outward
    mid = s // 2
    order = [0]
    for k in range(s + 1):
        for cand in (mid - k, mid + k):
            if 0 <= cand <= s and cand not in order:
                order.append(cand)
    return order


def splittings(st: Statement) -> Iterator[Splitting]:
    for s1 in _s1_order(st.s):
        for t1 in range(st.t + 1):
            for u1 in range(st.u + 1):
                for v1 in range(st.v + 1):
                    yield Splitting.of(st, s1, t1, u1, v1)


@dataclass(frozen=True)
class BasePolicy:
    """When a statement may be settled by a direct rank computation."""

    max_cols: int = 5000
    max_cells: int | None = None
    max_n: int | None = None

    def allows(self, st: Statement) -> bool:
        cols = basis_size(st.n, st.d)
        if cols > self.max_cols:
            return False
        if self.max_cells is not None and cols * st.rows > self.max_cells:
            return False
        return self.max_n is None or st.n <= self.max_n


def _trivial(st: Statement) -> Certificate | None:
    if st.d == 1:
        # generic linear forms plus at most one copy of R_1: subabundant means independent
        return Certificate(st, Method.TRIVIAL_D1)
    if a_value(st) == 0:
        return Certificate(st, Method.TRIVIAL_EMPTY)
    return None


def _closed_form_d2_true(st: Statement) -> bool:
    return d2_dimension(st.n, st.s) + 1 == a_value(st)


class Prover:
    """Memoised depth-first proof search.

    The memo maps statements to certificates (or None for failures). Seeds for
    direct checks are derived from the statement, so results do not depend on
    the order in which goals are visited.
    """

    def __init__(self, base_policy: BasePolicy | None = None, budget: int = DEFAULT_BUDGET,
                 trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, p=None):
        self.policy = base_policy or BasePolicy()
        self.budget = budget
        self.trials = trials
        self.seed = seed
        self.p = int(as_modulus(p))
        self.memo: dict[Statement, Certificate | None] = {}

    def prove(self, st) -> Certificate:
        st = Statement.of(st)
        if not is_subabundant(st):
            raise NotSubabundant(f"{st} is not subabundant: a={a_value(st)} > {st.cols}")
        cert = self._prove(st)
        if cert is None:
            raise ProofFailure(f"no proof found for {st}")
        return cert

    def _prove(self, st: Statement) -> Certificate | None:
        if st in self.memo:
            return self.memo[st]
        if len(self.memo) >= self.budget:
            raise BudgetExhausted(f"memo table reached {self.budget} entries")
        cert = self._attempt(st)
        self.memo[st] = cert
        return cert

    def _attempt(self, st: Statement) -> Certificate | None:
        if not is_subabundant(st):
            return None
        cert = _trivial(st)
        if cert is not None:
            return cert
        if st.d == 2 and not (st.t or st.u or st.v):
            return Certificate(st, Method.CLOSED_FORM_D2) if _closed_form_d2_true(st) else None
        if st.u and not (st.s or st.t or st.v):
            parent = self.memo.get(Statement(st.n, st.d + 1, st.u))
            if parent is not None:
                return Certificate(st, Method.LEMMA_F, children=(parent,))
        if self.policy.allows(st):
            out = check_statement(st, self.trials, self.seed, self.p)
            if out.certified:
                ev = Evidence(out.seed, out.prime, out.achieved_rank, st.rows, st.cols, out.trials_used)
                return Certificate(st, Method.DIRECT, evidence=ev)
        if st.n >= 2 and st.d >= 3:
            for sp in splittings(st):
                kids = split_children(st, sp)
                if not all(is_subabundant(k) for k in kids):
                    continue
                certs = []
                for k in kids:
                    c = self._prove(k)
                    if c is None:
                        break
                    certs.append(c)
                else:
                    return Certificate(st, Method.SPLIT, sp, tuple(certs))
        return None


def prove(st, base_policy: BasePolicy | None = None, budget: int = DEFAULT_BUDGET, *,
          trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, p=None) -> Certificate:
    """Prove ``st`` true; raises ProofFailure (or a subclass) otherwise."""
    return Prover(base_policy, budget, trials, seed, p).prove(st)


def extend_n(n0: int, d: int, s: int, n_target: int, base_policy: BasePolicy | None = None, *,
             trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, p=None) -> Certificate:
    """Certificate for (n_target,d,s,0,0,0) by induction on n from a proved base at n0.

    Each step splits with s' = 0: children (k,d,s), lemma-f on (k,d-1,0,0,s,0),
    and the empty or linear statement (k,d-2,0,0,0,0).
    """
    if d < 3:
        raise ValueError(f"induction on n needs d >= 3, got d={d}")
    if n_target < n0:
        raise ValueError(f"n_target={n_target} is below n0={n0}")
    base_st = Statement(n0, d, s)
    if not is_subabundant(base_st):
        raise NotSubabundant(f"{base_st}: s(dn+1)={a_value(base_st)} exceeds C(n+d,d)={base_st.cols}")
    cur = prove(base_st, base_policy, trials=trials, seed=seed, p=p)
    for k in range(n0, n_target):
        lf = Certificate(lemma_f_consequence(cur.statement), Method.LEMMA_F, children=(cur,))
        third = _trivial(Statement(k, d - 2))
        st = Statement(k + 1, d, s)
        cur = Certificate(st, Method.SPLIT, Splitting.of(st, 0), (cur, lf, third))
    return cur


# ---------------------------------------------------------------------------
# verification


class _Verifier:
    def __init__(self, replay: bool):
        self.replay = replay
        self.errors: list[str] = []
        self._replayed: dict[tuple, int] = {}
        self._ok: dict[int, bool] = {}

    def fail(self, path: str, msg: str) -> bool:
        self.errors.append(f"{path}: {msg}")
        return False

    def check(self, c: Certificate, path: str) -> bool:
        if id(c) in self._ok:
            return self._ok[id(c)]
        ok = self._check(c, path)
        self._ok[id(c)] = ok
        return ok

    def _check(self, c: Certificate, path: str) -> bool:
        st = c.statement
        if not is_subabundant(st):
            return self.fail(path, f"{st} is not subabundant")
        m = c.method
        if m is not Method.SPLIT and c.splitting is not None:
            return self.fail(path, "splitting recorded on a non-split node")
        if m is not Method.DIRECT and c.evidence is not None:
            return self.fail(path, "evidence recorded on a non-direct node")
        if m in (Method.TRIVIAL_EMPTY, Method.TRIVIAL_D1, Method.CLOSED_FORM_D2, Method.DIRECT):
            if c.children:
                return self.fail(path, f"{m.value} node must be a leaf")
        if m is Method.TRIVIAL_EMPTY:
            return a_value(st) == 0 or self.fail(path, f"{st} is not empty")
        if m is Method.TRIVIAL_D1:
            return st.d == 1 or self.fail(path, f"{st} does not have degree 1")
        if m is Method.CLOSED_FORM_D2:
            if st.d != 2 or st.t or st.u or st.v or st.s < 1:
                return self.fail(path, f"{st} is not of the form (n,2,s,0,0,0)")
            return _closed_form_d2_true(st) or self.fail(path, f"closed form does not give {st} true")
        if m is Method.LEMMA_F:
            if st.s or st.t or st.v or st.u < 1:
                return self.fail(path, f"{st} is not of the form (n,d,0,0,s,0)")
            want = Statement(st.n, st.d + 1, st.u)
            if len(c.children) != 1 or c.children[0].statement != want:
                return self.fail(path, f"lemma-f child must be {want}")
            return self.check(c.children[0], f"{path}/0")
        if m is Method.SPLIT:
            sp = c.splitting
            if sp is None:
                return self.fail(path, "split node without splitting")
            if st.n < 2 or st.d < 3:
                return self.fail(path, f"split needs n >= 2 and d >= 3, got {st}")
            if not sp.matches(st):
                return self.fail(path, f"splitting {sp.astuple()} does not sum to {st}")
            want = split_children(st, sp)
            if len(c.children) != 3:
                return self.fail(path, f"split node has {len(c.children)} children, expected 3")
            for i, (k, w) in enumerate(zip(c.children, want)):
                if k.statement != w:
                    return self.fail(f"{path}/{i}", f"statement {k.statement} should be {w} under the recorded splitting")
            if sum(a_value(k) for k in want) != a_value(st):
                return self.fail(path, "children counts do not add up to the parent count")
            ok = True
            for i, k in enumerate(c.children):
                ok = self.check(k, f"{path}/{i}") and ok
            return ok
        if m is Method.DIRECT:
            ev = c.evidence
            if ev is None:
                return self.fail(path, "direct node without evidence")
            if ev.rank != a_value(st):
                return self.fail(path, f"recorded rank {ev.rank} != a={a_value(st)}")
            if (ev.rows, ev.cols) != (st.rows, st.cols):
                return self.fail(path, f"recorded shape {ev.rows}x{ev.cols} != {st.rows}x{st.cols}")
            if self.replay:
                key = (st, ev.seed, ev.prime)
                if key not in self._replayed:
                    self._replayed[key] = replay_rank(st, ev.seed, ev.prime)
                got = self._replayed[key]
                if got != ev.rank:
                    return self.fail(path, f"replayed rank {got} != recorded {ev.rank}")
            return True
        return self.fail(path, f"unknown method {m!r}")


def certificate_errors(cert: Certificate, replay: bool = True) -> list[str]:
    """Problems found in ``cert``, each prefixed with the node path (empty when valid)."""
    v = _Verifier(replay)
    v.check(cert, "root")
    return v.errors


def verify_certificate(cert: Certificate, replay: bool = True) -> bool:
    """True iff every side condition holds and every direct leaf replays."""
    return not certificate_errors(cert, replay)


# ---------------------------------------------------------------------------
# JSON


def _node_to_json(c: Certificate, path: str, seen: dict[int, str]) -> dict:
    if id(c) in seen:
        # shared subtree: refer back to its first occurrence
        return {"statement": list(c.statement.astuple()), "ref": seen[id(c)]}
    seen[id(c)] = path
    node: dict = {"statement": list(c.statement.astuple()), "method": c.method.value}
    if c.splitting is not None:
        node["splitting"] = dict(zip(("s1", "s2", "t1", "t2", "u1", "u2", "v1", "v2"),
                                     c.splitting.astuple()))
    node["children"] = [_node_to_json(k, f"{path}/{i}", seen) for i, k in enumerate(c.children)]
    if c.evidence is not None:
        ev = c.evidence
        node["evidence"] = {"seed": str(ev.seed), "prime": str(ev.prime), "rank": ev.rank,
                            "rows": ev.rows, "cols": ev.cols, "trials_used": ev.trials_used}
    return node


def certificate_to_json(cert: Certificate, root_seed: int = DEFAULT_SEED, prime=None) -> dict:
    return {
        "version": CERT_VERSION,
        "prime": str(int(as_modulus(prime))),
        "root_seed": str(int(root_seed)),
        "statement": list(cert.statement.astuple()),
        "tree": _node_to_json(cert, "root", {}),
    }


def _node_from_json(node, path: str, seen: dict[str, Certificate]) -> Certificate:
    try:
        st = Statement(*node["statement"])
        if "ref" in node:
            target = seen.get(node["ref"])
            if target is None:
                raise CertificateFormatError(f"{path}: dangling reference {node['ref']!r}")
            if target.statement != st:
                raise CertificateFormatError(f"{path}: reference {node['ref']!r} names {target.statement}, not {st}")
            return target
        method = Method(node["method"])
        sp = node.get("splitting")
        splitting = Splitting(**sp) if sp is not None else None
        ev = node.get("evidence")
        evidence = None
        if ev is not None:
            evidence = Evidence(int(ev["seed"]), int(ev["prime"]), int(ev["rank"]),
                                int(ev["rows"]), int(ev["cols"]), int(ev["trials_used"]))
        raw_children = node.get("children", [])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CertificateFormatError):
            raise
        raise CertificateFormatError(f"{path}: malformed node ({exc})") from exc
    children = []
    for i, k in enumerate(raw_children):
        children.append(_node_from_json(k, f"{path}/{i}", seen))
    cert = Certificate(st, method, splitting, tuple(children), evidence)
    seen[path] = cert
    return cert


def certificate_from_json(doc) -> Certificate:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if doc.get("version") != CERT_VERSION:
        raise CertificateFormatError(f"unsupported certificate version {doc.get('version')!r}")
    cert = _node_from_json(doc["tree"], "root", {})
    if list(cert.statement.astuple()) != list(doc["statement"]):
        raise CertificateFormatError("top-level statement does not match the tree root")
    return cert


def dump_certificate(cert: Certificate, root_seed: int = DEFAULT_SEED, prime=None) -> str:
    return json.dumps(certificate_to_json(cert, root_seed, prime), indent=1) + "\n"


def load_certificate(text: str) -> Certificate:
    return certificate_from_json(json.loads(text))
