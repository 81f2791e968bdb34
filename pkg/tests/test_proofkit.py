import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jstit.harness.formulas import random_instance
from jstit.proofkit import (
    MP, Axiom, ConstantSpecification, Line, Mode, Proof, SCHEME_ORDER, check_proof, corpus,
    eliminate_s4, format_proof, match_axiom, parse_cs, parse_proof,
)
from jstit.proofkit.axioms import a3_instance, as4_instance, b13_instance
from jstit.proofkit.builder import ProofBuilder
from jstit.proofkit.corpus import t5_lines
from jstit.proofkit.proof import CSError, ProofFormatError
from jstit.proofkit.s4elim import LINES_PER_S4_STEP, S4EliminationError
from jstit.syntax import (
    Atom, Neg, ProofConst, ProofVar, Prove, parse_formula, print_formula,
)

AG = ("i", "j")
TERMS = (ProofVar("x"), ProofVar("t"), ProofConst("c"))
POOL = tuple(parse_formula(s, AG) for s in (
    "p", "q", "~p", "p -> q", "[]p", "<>q", "[i]p", "<j>q", "Kp", "t:p",
    "Prove(i, x, p)", "Proven(t, q)", "p & q | r"))


def f(text):
    return parse_formula(text, AG)


def check(text, cs=None, mode=Mode.PI):
    return check_proof(parse_proof(text, AG), cs, mode)


@pytest.mark.parametrize("text, scheme", [
    ("s:(p->q) -> (t:p -> (s*t):q)", "A4"),
    ("Prove(j,t,p) -> (~Proven(t,p) & [j]Prove(j,t,p) & ~[]Prove(j,t,p) & t:p)", "B9"),
    ("p -> p", None),
    ("Kp -> p", "A7-T"),
    ("[]p -> [j]p", "A2"),
    ("[]p -> p", "A1-T"),
    ("~[]~p -> []~[]~p", "A1-5"),
    ("<>p -> []<>p", "A1-5"),
    ("t:p -> !t:t:p & Kp", "A5"),
    ("s:p | t:p -> (s+t):p", "A6"),
    ("Kp -> []K[]p", "A8"),
    ("false -> p", "A0-11"),
])
def test_match_axiom(text, scheme):
    assert match_axiom(f(text), AG) == scheme


def test_a3_needs_distinct_agents():
    p, q = Atom("p"), Atom("q")
    assert match_axiom(a3_instance([("i", p), ("j", q)]), AG) == "A3"
    assert match_axiom(a3_instance([("i", p), ("i", q)]), AG) is None


def test_b13_and_as4_agent_order():
    t, p = ProofVar("t"), Atom("p")
    assert match_axiom(b13_instance("i", t, p, AG), AG) == "B13"
    assert match_axiom(b13_instance("i", t, p, AG[::-1]), AG) is None
    as4 = as4_instance([(t, p)], AG)
    assert match_axiom(as4, AG) is None
    assert match_axiom(as4, AG, pi_prime=True) == "AS4"
    assert match_axiom(as4_instance([(t, p)], AG[::-1]), AG, pi_prime=True) is None


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SCHEME_ORDER), st.integers(0, 2**32))
def test_random_instances_match_and_survive_reprinting(scheme, seed):
    g = random_instance(random.Random(seed), scheme, AG, POOL, TERMS)
    pi_prime = scheme == "AS4"
    found = match_axiom(g, AG, pi_prime=pi_prime)
    assert found is not None
    again = parse_formula(print_formula(g), AG)
    assert match_axiom(again, AG, pi_prime=pi_prime) == found


def test_single_axiom_line():
    assert check("1. Kp -> p ; ax:A7-T")


def test_rejections():
    v = check("1. Kp -> p ; ax:A7-4")
    assert (v.line, "scheme mismatch" in v.reason) == (1, True)
    v = check("1. Kp -> p ; ax:A7-T\n2. p ; mp:1,3")
    assert v.line == 2 and "malformed index" in v.reason
    v = check("1. Kp -> p ; ax:A7-T\n2. p ; mp:1,2")
    assert v.line == 2 and "malformed index" in v.reason
    v = check("1. p ; cs")
    assert v.line == 1 and not v
    v = check("1. Kp -> p ; ax:A7-T\n2. K(Kp -> p) ; nec:1\n3. Kp ; nec:1")
    assert v.line == 3
    with pytest.raises(ProofFormatError):
        parse_proof("1. [k]p -> p ; ax:A1-T", AG)
    v = check("1. Kp -> p ; ax:Z9")
    assert "unknown axiom scheme" in v.reason
    assert str(v) == "rejected at line 1: unknown axiom scheme 'Z9'"


def test_mode_violations():
    as4 = str(as4_instance([(ProofVar("x"), Atom("p"))], AG))
    v = check(f"agents: i j\n1. {as4} ; ax:AS4")
    assert not v and "mode violation" in v.reason
    assert check(f"agents: i j\n1. {as4} ; ax:AS4", mode=Mode.PI_PRIME)
    s4 = format_proof(corpus()["AS4-n1"].proof)
    assert check(s4)
    v = check(s4, mode=Mode.PI_PRIME)
    assert v.line == 2 and "mode violation" in v.reason


def test_s4_agent_order_rejected():
    text = ("agents: i j\n"
            "1. K~Proven(x,p) -> ~Proven(x,p) ; ax:A7-T\n"
            "2. K~Proven(x,p) -> ~Prove(j,x,p) & ~Prove(i,x,p) ; s4:1[(x,p)]\n")
    v = check(text)
    assert v.line == 2 and "canonical" in v.reason
    assert check(text.replace("~Prove(j,x,p) & ~Prove(i,x,p)", "~Prove(i,x,p) & ~Prove(j,x,p)"))


def test_s4_pairs_must_match_premise():
    text = ("agents: i j\n"
            "1. K~Proven(x,p) -> ~Proven(x,p) ; ax:A7-T\n"
            "2. K~Proven(x,p) -> ~Prove(i,y,p) & ~Prove(j,y,p) ; s4:1[(y,p)]\n")
    assert check(text).line == 2


def test_mp_either_order():
    assert check("1. Kp -> p ; ax:A7-T\n2. K(Kp -> p) ; nec:1\n"
                 "3. K(Kp -> p) -> (KKp -> Kp) ; ax:A7-K\n4. KKp -> Kp ; mp:3,2")


def test_proof_format_errors():
    with pytest.raises(ProofFormatError):
        parse_proof("1. Kp -> p ; ax:A7-T")
    with pytest.raises(ProofFormatError):
        parse_proof("1. p -> p", AG)
    with pytest.raises(ProofFormatError):
        parse_proof("2. Kp -> p ; ax:A7-T", AG)
    with pytest.raises(ProofFormatError):
        parse_proof("1. Kp -> p ; frob:1", AG)


def test_constant_specification():
    good = parse_cs("c:(p -> (q -> p))\nd:c:(p -> (q -> p))", AG)
    assert len(good) == 2
    assert f("c:(p -> q -> p)") in good
    with pytest.raises(CSError):
        parse_cs("d:c:(p -> (q -> p))", AG)
    with pytest.raises(CSError):
        parse_cs("c:(p -> p)", AG)
    with pytest.raises(CSError):
        parse_cs("x:(p -> (q -> p))", AG)
    proof = "agents: i j\n1. c:(p -> (q -> p)) ; cs\n2. K c:(p -> (q -> p)) ; nec:1"
    assert check(proof, good)
    assert not check(proof)


@pytest.fixture(scope="module")
def entries():
    return corpus()


def test_corpus_entries(entries):
    assert list(entries)[:7] == ["T0", "T1", "T2", "T3", "T4", "T5-n1", "T5-n2"]
    expected = {
        "T0": "Kp -> []p", "T1": "t:p -> Kt:p", "T2": "t:p -> []t:p", "T3": "Kp -> []Kp",
        "T4": "Proven(t,p) -> []Proven(t,p)", "T5-n1": "~[](Prove(i,t,p))",
        "T5-n2": "~[](Prove(i,t,p) | Prove(j,t,p))",
    }
    for name, text in expected.items():
        assert entries[name].formula == f(text)
        verdict = check_proof(entries[name].proof)
        assert verdict, (name, str(verdict))
        assert verdict.conclusion == f(text)


def test_corpus_file_round_trip(entries):
    for entry in entries.values():
        again = parse_proof(format_proof(entry.proof))
        assert again == entry.proof


def test_t5_with_a_larger_agent_set():
    b = ProofBuilder(("i", "j", "k"))
    proof = b.build(t5_lines(b, ("i", "j"), ProofVar("t"), Atom("p")))
    assert check_proof(proof)
    assert proof.conclusion == parse_formula("~[](Prove(i,t,p) | Prove(j,t,p))")


def test_eliminate_s4(entries):
    with_s4 = [e for e in entries.values() if e.proof.s4_steps()]
    assert {e.name for e in with_s4} == {"AS4-n1", "AS4-n2", "S4-two"}
    for entry in with_s4:
        out = eliminate_s4(entry.proof)
        assert out.s4_steps() == 0
        assert out.conclusion == entry.proof.conclusion
        assert check_proof(out, mode=Mode.PI_PRIME)
        assert not check_proof(entry.proof, mode=Mode.PI_PRIME)
        assert len(out) <= len(entry.proof) + (LINES_PER_S4_STEP - 1) * entry.proof.s4_steps()


def test_eliminate_s4_identity_without_s4(entries):
    proof = entries["T3"].proof
    assert eliminate_s4(proof) is proof


def test_eliminate_s4_rejects_bad_input():
    with pytest.raises(S4EliminationError):
        eliminate_s4(parse_proof("1. Kp -> p ; ax:A7-4", AG))


def _insert(proof, at, line):
    """Insert ``line`` before position ``at`` (1-based), shifting later references."""
    def shift(i):
        return i + 1 if i >= at else i

    lines = []
    for n, old in enumerate(proof.lines, start=1):
        if n == at:
            lines.append(line)
        why = old.why
        if isinstance(why, MP):
            why = MP(shift(why.minor), shift(why.major))
        elif hasattr(why, "premise"):
            why = dataclasses.replace(why, premise=shift(why.premise))
        lines.append(Line(old.formula, why))
    return Proof(tuple(lines), proof.agents)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["T0", "T1", "T3", "T4", "AS4-n2", "S4-two"]), st.data())
def test_monotone_under_line_insertion(name, data):
    proof = corpus()[name].proof
    at = data.draw(st.integers(1, len(proof)))
    extra = Line(f("Kq -> q"), Axiom("A7-T"))
    bigger = _insert(proof, at, extra)
    verdict = check_proof(bigger)
    assert verdict and verdict.conclusion == proof.conclusion


def test_builder_tautology():
    b = ProofBuilder(AG)
    goal = f("(p -> q) -> (~q -> ~p)")
    proof = b.build(b.tautology(goal))
    assert check_proof(proof) and proof.conclusion == goal
    with pytest.raises(ValueError):
        b.tautology(f("p -> q"))


def test_builder_necessitation_rules():
    b = ProofBuilder(AG)
    k = b.tautology(f("p -> p"))
    boxed = b.build(b.box_nec(k))
    assert boxed.conclusion == f("[](p -> p)") and check_proof(boxed)
    b = ProofBuilder(AG)
    stit = b.build(b.stit_nec("j", b.tautology(f("p -> p"))))
    assert stit.conclusion == f("[j](p -> p)") and check_proof(stit)


def test_prove_node_agents_checked():
    g = Neg(Prove("k", ProofVar("x"), Atom("p")))
    proof = Proof((Line(g, Axiom("A0-1")),), AG)
    assert "agents outside" in check_proof(proof).reason
