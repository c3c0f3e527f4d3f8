"""Command-line front end.

Exit codes: 0 success or certified, 2 uncertified or defective evidence,
64 usage error, 70 internal error. Standard output only ever carries the
report (text, json or csv); progress goes to standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import conjecture as conj
from .ff_linalg import BACKEND, DEFAULT_PRIME, PrimeModulus
from .inductor import (
    DEFAULT_BUDGET,
    BasePolicy,
    CertificateFormatError,
    Method,
    NotSubabundant,
    ProofFailure,
    certificate_errors,
    certificate_to_json,
    certificate_from_json,
)
from .inductor import prove as run_prove
from .monomials import basis_size
from .terracini import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    Statement,
    a_value,
    check_statement,
    d2_dimension,
    expected_dimension,
    secant_dimension,
)

EXIT_OK = 0
EXIT_UNCERTIFIED = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    jobs: int = 1
    output: str | None = None
    format: str = "text"
    no_trust: bool = False
    explain: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(63)
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'random', got {text!r}")
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field characteristic (2**20 < p < 2**31)")
    g.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="root seed, or 'random'")
    g.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--format", choices=("text", "json", "csv"), default="text")
    g.add_argument("--out", dest="output", metavar="PATH")
    g.add_argument("--no-trust", action="store_true",
                   help="conjecture: also recheck the cases covered by the n=3 / d=3 thresholds")
    g.add_argument("--explain", action="store_true", help="describe how the result was derived")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="chowsecant", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernel)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dim", parents=[common], help="dimension of a secant variety of a Chow variety")
    for name in ("n", "d", "s"):
        p.add_argument(f"--{name}", type=int, required=True)

    p = sub.add_parser("statement", parents=[common], help="check a statement A(n,d,s,t,u,v) directly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    for name in ("s", "t", "u", "v"):
        p.add_argument(f"--{name}", type=int, default=0)

    p = sub.add_parser("prove", parents=[common], help="search for an induction certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    for name in ("s", "t", "u", "v"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.add_argument("--max-cols", type=int, default=5000, help="largest basis size checked directly")
    p.add_argument("--max-n", type=int, default=None, help="largest n checked directly")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="memo-table ceiling")

    p = sub.add_parser("verify-cert", parents=[common], help="replay a certificate file")
    p.add_argument("path")

    p = sub.add_parser("conjecture", parents=[common], help="verify nondefectivity for all s <= S")
    p.add_argument("--max-s", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="tables of d=2 dimensions or generic Chow ranks")
    p.add_argument("--d", type=int, default=2, help="degree for the dimension table (only 2)")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--max-s", type=int, default=None)
    p.add_argument("--chow-rank", action="store_true")
    p.add_argument("--max-d", type=int, default=6)
    return parser


# ---------------------------------------------------------------------------
# output helpers


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _markdown(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(x) for x in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _info(msg: str):
    print(msg, file=sys.stderr, flush=True)


def _positive(**kw):
    for name, value in kw.items():
        if value < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be at least 1, got {value}")


# ---------------------------------------------------------------------------
# commands


def cmd_dim(n: int, d: int, s: int, cfg: RunConfig) -> int:
    _positive(n=n, d=d, s=s)
    r = secant_dimension(n, d, s, cfg.trials, cfg.seed, cfg.prime)
    status = "CERTIFIED" if r.nondefective_certified else "defective(evidence)"
    fills = "yes" if r.fills_ambient else "no"
    if cfg.format == "json":
        out = asdict(r)
        out["seed"] = None if r.seed is None else str(r.seed)
        out["prime"] = str(cfg.prime)
        out["status"] = status
        text = _json(out)
    elif cfg.format == "csv":
        text = _csv(["n", "d", "s", "dim", "expected", "status", "fills", "trials_used"],
                    [[n, d, s, r.dim_lower_bound, r.expected, status, fills, r.trials_used]])
    else:
        text = f"dim={r.dim_lower_bound} expected={r.expected} {status}"
        if r.nondefective_certified:
            text += f" fills={fills}"
        text += "\n"
        if cfg.explain:
            text += (f"# rank of a {s * d * (n + 1)} x {basis_size(n, d)} Terracini matrix over GF({cfg.prime}),"
                     f" best of {r.trials_used} trial(s); ambient dimension {r.ambient}\n")
    _emit(cfg, text)
    return EXIT_OK if r.nondefective_certified else EXIT_UNCERTIFIED


def cmd_statement(n, d, s, t, u, v, cfg: RunConfig) -> int:
    try:
        st = Statement(n, d, s, t, u, v)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    out = check_statement(st, cfg.trials, cfg.seed, cfg.prime)
    a, cols = a_value(st), st.cols
    if out.impossible:
        verdict, code = f"IMPOSSIBLE (a > binom = {cols})", EXIT_UNCERTIFIED
        text = f"a={a} superabundant {verdict}\n"
    elif out.vacuous:
        verdict, code = "TRUE (vacuous)", EXIT_OK
        text = f"a=0 {verdict}\n"
    else:
        verdict = "TRUE" if out.certified else "UNKNOWN"
        code = EXIT_OK if out.certified else EXIT_UNCERTIFIED
        text = f"a={a} subabundant rank={out.achieved_rank} {verdict}\n"
    if cfg.format == "json":
        text = _json({"statement": list(st.astuple()), "a": a, "binom": cols,
                      "subabundant": a <= cols, "rank": out.achieved_rank, "verdict": verdict,
                      "seed": None if out.seed is None else str(out.seed), "prime": str(out.prime),
                      "trials_used": out.trials_used})
    elif cfg.format == "csv":
        text = _csv(["n", "d", "s", "t", "u", "v", "a", "binom", "rank", "verdict"],
                    [list(st.astuple()) + [a, cols, out.achieved_rank, verdict]])
    _emit(cfg, text)
    return code


def cmd_prove(args, cfg: RunConfig) -> int:
    try:
        st = Statement(args.n, args.d, args.s, args.t, args.u, args.v)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    policy = BasePolicy(max_cols=args.max_cols, max_n=args.max_n)
    try:
        cert = run_prove(st, policy, args.budget, trials=cfg.trials, seed=cfg.seed, p=cfg.prime)
    except NotSubabundant as exc:
        _info(f"not provable: {exc}")
        return EXIT_UNCERTIFIED
    except ProofFailure as exc:
        _info(f"no proof: {exc}")
        return EXIT_UNCERTIFIED
    doc = _json(certificate_to_json(cert, cfg.seed, cfg.prime))
    if cfg.output:
        Path(cfg.output).write_text(doc, encoding="utf-8")
        counts = ", ".join(f"{m.value}={cert.count(m)}" for m in Method if cert.count(m))
        sys.stdout.write(f"PROVED {st} depth={cert.depth} ({counts}) -> {cfg.output}\n")
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_verify_cert(path: str, cfg: RunConfig) -> int:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        cert = certificate_from_json(doc)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except (json.JSONDecodeError, CertificateFormatError, KeyError, TypeError, ValueError) as exc:
        sys.stdout.write(f"INVALID malformed certificate: {exc}\n")
        return EXIT_UNCERTIFIED
    errors = certificate_errors(cert)
    if errors:
        sys.stdout.write("".join(f"INVALID {e}\n" for e in errors))
        return EXIT_UNCERTIFIED
    sys.stdout.write(f"VALID {cert.statement} nodes={sum(1 for _ in cert.distinct())}\n")
    return EXIT_OK


def _explain_conjecture(s_max: int) -> str:
    lines = ["# clause bounds per s (clause i applies the s2 threshold to n, as written)"]
    for s in range(1, s_max + 1):
        b = conj.clause_bounds(s)
        lines.append(f"# s={s}: " + " ".join(f"{k}={v}" for k, v in b.items()))
    return "\n".join(lines) + "\n"


def cmd_conjecture(max_s: int, cfg: RunConfig) -> int:
    _positive(max_s=max_s)
    t0 = time.perf_counter()
    report = conj.verify_conjecture(max_s, cfg.trials, cfg.seed, cfg.prime, cfg.jobs,
                                    cfg.no_trust, progress=_info)
    elapsed = time.perf_counter() - t0
    everything = sorted(report.verified + report.exceptions_confirmed + report.failures,
                        key=conj.CaseResult.sort_key)

    def status(r):
        if r in report.failures:
            return "FAILED"
        return "nondefective" if r.certified else "defective(known)"

    if cfg.format == "json":
        text = _json(report.as_dict())
    elif cfg.format == "csv":
        text = _csv(["s", "d", "n", "method", "clause", "dim", "expected", "status"],
                    [[r.s, r.d, r.n, r.method, r.clause, r.dim, r.expected, status(r)] for r in everything])
    else:
        rows = [[r.s, r.d, r.n, r.method, r.clause, r.dim, r.expected, status(r)] for r in everything]
        text = _markdown(["s", "d", "n", "method", "clause", "dim", "expected", "status"], rows)
        text += (f"\nverified={len(report.verified)} quadric_exceptions={len(report.exceptions_confirmed)}"
                 f" failures={len(report.failures)} s_max={max_s} wall={elapsed:.1f}s"
                 f" kernel={BACKEND}\n")
        text += "RESULT: " + ("all cases certified" if report.ok else "FAILURES PRESENT") + "\n"
        if cfg.explain:
            text += _explain_conjecture(max_s)
    _emit(cfg, text)
    return EXIT_OK if report.ok else EXIT_UNCERTIFIED


def cmd_table(args, cfg: RunConfig) -> int:
    _positive(max_n=args.max_n)
    if args.chow_rank:
        _positive(max_d=args.max_d)
        header = ["n", "d", "chow_rank", "status"]
        rows = []
        for n in range(1, args.max_n + 1):
            for d in range(1, args.max_d + 1):
                if d == 1:
                    rows.append([n, d, 1, "trivial"])
                elif d == 2:
                    rows.append([n, d, conj.generic_chow_rank_d2(n), "closed-form"])
                else:
                    g = conj.generic_chow_rank(n, d)
                    r = secant_dimension(n, d, g, cfg.trials, cfg.seed, cfg.prime)
                    rows.append([n, d, g, "certified" if r.fills_ambient else "unverified"])
        ok = all(row[3] != "unverified" for row in rows)
    else:
        if args.d != 2:
            raise UsageError("the dimension table is available for --d 2 only")
        max_s = args.max_s or args.max_n
        _positive(max_s=max_s)
        header = ["n", "s", "dim", "expected", "defective"]
        rows = []
        for n in range(1, args.max_n + 1):
            for s in range(1, max_s + 1):
                dim, exp = d2_dimension(n, s), expected_dimension(n, 2, s)
                rows.append([n, s, dim, exp, "yes" if dim < exp else "no"])
        ok = True
    if cfg.format == "csv":
        text = _csv(header, rows)
    elif cfg.format == "json":
        text = _json([dict(zip(header, row)) for row in rows])
    else:
        text = _markdown(header, rows)
    _emit(cfg, text)
    return EXIT_OK if ok else EXIT_UNCERTIFIED


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            prime = PrimeModulus(args.prime).p
        except ValueError as exc:
            raise UsageError(str(exc))
        cfg = RunConfig(prime, args.seed, args.trials, args.jobs, args.output, args.format,
                        args.no_trust, args.explain)
        if args.command == "dim":
            return cmd_dim(args.n, args.d, args.s, cfg)
        if args.command == "statement":
            return cmd_statement(args.n, args.d, args.s, args.t, args.u, args.v, cfg)
        if args.command == "prove":
            return cmd_prove(args, cfg)
        if args.command == "verify-cert":
            return cmd_verify_cert(args.path, cfg)
        if args.command == "conjecture":
            return cmd_conjecture(args.max_s, cfg)
        if args.command == "table":
            return cmd_table(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chowsecant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - mapped to the internal-error exit code
        print(f"chowsecant: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    parser.error(f"unknown command {args.command}")


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
