import json
import random
from dataclasses import replace

import pytest

from chowsecant.inductor import (
    BasePolicy,
    BudgetExhausted,
    Certificate,
    CertificateFormatError,
    Evidence,
    Method,
    NotSubabundant,
    ProofFailure,
    Splitting,
    certificate_errors,
    dump_certificate,
    extend_n,
    lemma_f_consequence,
    load_certificate,
    prove,
    split_children,
    splittings,
    verify_certificate,
)
from chowsecant.terracini import Statement, a_value, check_statement, is_subabundant, secant_dimension

SMALL = BasePolicy(max_n=3)


def S(*xs):
    return Statement(*xs)


def test_split_children_examples():
    st = S(4, 3, 2)
    assert split_children(st, Splitting.of(st, 0)) == [S(3, 3, 2), S(3, 2, 0, 0, 2), S(3, 1)]
    assert split_children(S(2, 3), Splitting()) == [S(1, 3), S(1, 2), S(1, 1)]
    sp = Splitting(s1=1, s2=2, t1=1, t2=0, u1=0, u2=1, v1=1, v2=0)
    assert split_children(S(5, 4, 3, 1, 1, 1), sp) == [
        S(4, 4, 2, 0, 1, 1), S(4, 3, 1, 1, 2, 1), S(4, 2, 0, 1, 1, 0)]


def test_split_children_errors():
    with pytest.raises(ValueError):
        split_children(S(1, 3, 1), Splitting(0, 1))
    with pytest.raises(ValueError):
        split_children(S(3, 2, 1), Splitting(0, 1))
    with pytest.raises(ValueError):
        split_children(S(3, 3, 2), Splitting(1, 0))
    with pytest.raises(ValueError):
        Splitting(-1, 2)


def test_split_a_values_add_up():
    rng = random.Random(5)
    for _ in range(100):
        st = S(rng.randint(2, 8), rng.randint(3, 8), *(rng.randint(0, 5) for _ in range(4)))
        sp = Splitting.of(st, rng.randint(0, st.s), rng.randint(0, st.t),
                          rng.randint(0, st.u), rng.randint(0, st.v))
        assert sum(a_value(k) for k in split_children(st, sp)) == a_value(st)


def test_splittings_enumerate_every_split_once():
    st = S(4, 4, 3, 1, 2, 1)
    found = list(splittings(st))
    assert len(found) == len(set(found)) == 4 * 2 * 3 * 2
    assert all(sp.matches(st) for sp in found)
    assert found[0].s1 == 0


def test_lemma_f_examples():
    assert lemma_f_consequence(S(3, 3, 2)) == S(3, 2, 0, 0, 2)
    assert lemma_f_consequence(S(5, 2, 3)) == S(5, 1, 0, 0, 3)
    with pytest.raises(ValueError):
        lemma_f_consequence(S(3, 3, 2, 1))
    with pytest.raises(ValueError):
        lemma_f_consequence(S(3, 1, 2))


@pytest.mark.parametrize("n,d,s", [(3, 3, 2), (4, 4, 3), (2, 6, 2), (5, 3, 3)])
def test_lemma_f_consequence_has_rank_sd(n, d, s):
    assert is_subabundant(S(n, d, s))
    out = check_statement(lemma_f_consequence(S(n, d, s)))
    assert out.certified and out.achieved_rank == s * d


def test_prove_trivial():
    c = prove(S(3, 1))
    assert c.method is Method.TRIVIAL_D1 and not c.children
    assert prove(S(3, 4)).method is Method.TRIVIAL_EMPTY


def test_prove_matches_induction_pattern():
    c = prove(S(4, 3, 2), SMALL)
    assert c.method is Method.SPLIT
    assert [k.statement for k in c.children] == [S(3, 3, 2), S(3, 2, 0, 0, 2), S(3, 1)]
    assert [k.method for k in c.children] == [Method.DIRECT, Method.LEMMA_F, Method.TRIVIAL_D1]
    assert c.children[1].children[0] is c.children[0]
    assert verify_certificate(c)


def test_prove_rejects_superabundant():
    with pytest.raises(NotSubabundant):
        prove(S(2, 2, 3))


def test_shallow_policy_can_fail():
    # below n = 5 every s' = 0 child is superabundant and no other split closes
    with pytest.raises(ProofFailure):
        prove(S(6, 3, 3), BasePolicy(max_n=3))


def test_prove_reports_defective_quadrics():
    with pytest.raises(ProofFailure):
        prove(S(6, 2, 2))


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted):
        prove(S(6, 4, 5), BasePolicy(max_n=2), budget=3)


def test_prove_is_deterministic():
    a = dump_certificate(prove(S(7, 4, 4), BasePolicy(max_n=4)))
    b = dump_certificate(prove(S(7, 4, 4), BasePolicy(max_n=4)))
    assert a == b


def test_extend_n_chain():
    c = extend_n(3, 3, 2, 6, SMALL)
    assert c.statement == S(6, 3, 2)
    assert verify_certificate(c)
    chain = [c]
    while chain[-1].method is Method.SPLIT:
        chain.append(chain[-1].children[0])
    assert [x.statement.n for x in chain] == [6, 5, 4, 3]
    for x in chain[:-1]:
        assert x.children[1].method is Method.LEMMA_F
        assert x.children[2].method in (Method.TRIVIAL_D1, Method.TRIVIAL_EMPTY)
    # each derived statement agrees with a direct rank computation
    for n in (4, 5, 6):
        assert secant_dimension(n, 3, 2).nondefective_certified


def test_extend_n_identity_and_errors():
    assert extend_n(3, 3, 2, 3, SMALL).method is Method.DIRECT
    with pytest.raises(NotSubabundant):
        extend_n(3, 4, 3, 5)
    with pytest.raises(ValueError):
        extend_n(3, 2, 1, 5)
    with pytest.raises(ValueError):
        extend_n(4, 3, 1, 3)


def _find(cert, method):
    return next(p for p, n in cert.walk() if n.method is method)


def _replace_at(cert, path, fn):
    parts = path.split("/")[1:]
    if not parts:
        return fn(cert)
    i = int(parts[0])
    kids = list(cert.children)
    kids[i] = _replace_at(kids[i], "root/" + "/".join(parts[1:]) if parts[1:] else "root", fn)
    return replace(cert, children=tuple(kids))


def test_corrupted_child_is_named():
    c = prove(S(4, 3, 2), SMALL)
    bad = _replace_at(c, "root/0", lambda n: replace(n, statement=S(3, 3, 1)))
    errs = certificate_errors(bad)
    assert errs and errs[0].startswith("root/0:")
    assert not verify_certificate(bad)


def test_altered_direct_rank_fails():
    c = prove(S(4, 3, 2), SMALL)
    path = _find(c, Method.DIRECT)
    bad = _replace_at(c, path, lambda n: replace(n, evidence=replace(n.evidence, rank=n.evidence.rank - 1)))
    assert not verify_certificate(bad)


def test_recorded_shape_must_match():
    c = prove(S(3, 3, 2))
    ev = c.evidence
    bad = replace(c, evidence=Evidence(ev.seed, ev.prime, ev.rank, ev.rows, ev.cols + 1, ev.trials_used))
    assert any("shape" in e for e in certificate_errors(bad))


def test_replay_detects_rank_deficient_seed():
    # quadrics at n = 6, s = 2 are defective, so no seed reaches a = 26
    c = Certificate(S(6, 2, 2), Method.DIRECT, evidence=Evidence(1, 2147483647, 26, 28, 28, 1))
    errs = certificate_errors(c)
    assert any("replayed rank 22" in e for e in errs)


def test_structural_checks():
    leaf = Certificate(S(3, 3, 2), Method.TRIVIAL_EMPTY)
    assert not verify_certificate(leaf)
    assert not verify_certificate(Certificate(S(3, 2, 0, 0, 2), Method.LEMMA_F))
    assert not verify_certificate(Certificate(S(2, 2, 3), Method.CLOSED_FORM_D2))
    assert verify_certificate(Certificate(S(5, 2, 1), Method.CLOSED_FORM_D2))
    assert verify_certificate(Certificate(S(5, 2, 3), Method.CLOSED_FORM_D2)) is False
    assert not verify_certificate(Certificate(S(6, 2, 2), Method.CLOSED_FORM_D2))


def test_json_round_trip_with_refs():
    c = prove(S(7, 3, 3), BasePolicy(max_n=5))
    text = dump_certificate(c)
    doc = json.loads(text)
    assert doc["version"] == 1 and doc["statement"] == [7, 3, 3, 0, 0, 0]
    back = load_certificate(text)
    assert dump_certificate(back) == text
    assert verify_certificate(back)
    assert '"ref"' in text


def test_malformed_json():
    text = dump_certificate(prove(S(4, 3, 2), SMALL))
    doc = json.loads(text)
    doc["version"] = 7
    with pytest.raises(CertificateFormatError):
        load_certificate(json.dumps(doc))
    doc = json.loads(text)
    del doc["tree"]["method"]
    with pytest.raises(CertificateFormatError):
        load_certificate(json.dumps(doc))
    doc = json.loads(text)
    doc["tree"]["children"][1]["children"][0] = {"statement": [3, 3, 2, 0, 0, 0], "ref": "root/9"}
    with pytest.raises(CertificateFormatError, match="dangling"):
        load_certificate(json.dumps(doc))
    doc = json.loads(text)
    doc["statement"] = [4, 3, 1, 0, 0, 0]
    with pytest.raises(CertificateFormatError):
        load_certificate(json.dumps(doc))


def test_soundness_against_direct_checking():
    rng = random.Random(2016)
    policy = BasePolicy(max_n=2)
    done = 0
    while done < 20:
        st = S(rng.randint(3, 6), rng.randint(3, 5), rng.randint(0, 3),
               rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
        if not is_subabundant(st) or a_value(st) == 0:
            continue
        try:
            cert = prove(st, policy)
        except ProofFailure:
            continue
        assert verify_certificate(cert)
        assert check_statement(st).certified, st
        done += 1


@pytest.mark.parametrize("st", [S(4, 1, 1, 0, 0, 0), S(4, 1, 0, 3, 1, 0), S(3, 1, 0, 0, 0, 1)])
def test_trivial_d1_agrees_with_rank(st):
    assert prove(st).method is Method.TRIVIAL_D1
    assert check_statement(st).certified


def test_shared_subtrees_counted_once():
    c = extend_n(3, 3, 2, 8, SMALL)
    assert c.count(Method.DIRECT) == 1
    assert c.count(Method.SPLIT) == c.count(Method.LEMMA_F) == 5
    assert len(list(c.distinct())) == 16
    assert len(list(c.leaves())) == 6  # one direct base, five trivial linear statements
    # each lemma-f link adds a level on top of the split chain
    assert c.depth == 11
