import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jstit.syntax import (
    FALSUM, And, App, Atom, Box, Check, Cstit, CstitDual, Diamond, Et, Imp, Just, K, Neg, Or,
    ParseError, Prove, ProofConst, ProofVar, Proven, Sum, node_count, normalize, parse_formula,
    parse_term, print_formula, print_term, subformulas,
)

AGENTS = ["i", "j"]

x, y, z = ProofVar("x"), ProofVar("y"), ProofVar("z")
p, q = Atom("p"), Atom("q")

terms = st.recursive(
    st.sampled_from([x, y, ProofVar("w2"), ProofConst("c"), ProofConst("d1")]),
    lambda ts: st.one_of(st.builds(Sum, ts, ts), st.builds(App, ts, ts), st.builds(Check, ts)),
    max_leaves=5,
)
agents = st.sampled_from(AGENTS)


def _formulas(allow_et=False):
    leaves = [st.sampled_from([p, q, Atom("r"), Atom("goal"), FALSUM])]
    if allow_et:
        leaves.append(st.builds(Et, terms))

    def grow(fs):
        return st.one_of(
            st.builds(Neg, fs), st.builds(And, fs, fs), st.builds(Or, fs, fs),
            st.builds(Imp, fs, fs), st.builds(Box, fs), st.builds(Diamond, fs),
            st.builds(Cstit, agents, fs), st.builds(CstitDual, agents, fs), st.builds(K, fs),
            st.builds(Just, terms, fs), st.builds(Prove, agents, terms, fs),
            st.builds(Proven, terms, fs))

    return st.recursive(st.one_of(*leaves), grow, max_leaves=12)


formulas = _formulas()


def full_term(t):
    if isinstance(t, Sum):
        return f"({full_term(t.left)} + {full_term(t.right)})"
    if isinstance(t, App):
        return f"({full_term(t.left)} * {full_term(t.right)})"
    if isinstance(t, Check):
        return f"(!{full_term(t.inner)})"
    return t.name


def full(f):
    """Print with every compound subformula parenthesised."""
    if isinstance(f, Atom):
        return f.name
    if f == FALSUM:
        return "false"
    if isinstance(f, Et):
        return f"(E {full_term(f.term)})"
    if isinstance(f, (And, Or, Imp)):
        op = {And: "&", Or: "|", Imp: "->"}[type(f)]
        return f"({full(f.left)} {op} {full(f.right)})"
    if isinstance(f, Neg):
        return f"(~{full(f.body)})"
    if isinstance(f, Box):
        return f"([]{full(f.body)})"
    if isinstance(f, Diamond):
        return f"(<>{full(f.body)})"
    if isinstance(f, Cstit):
        return f"([{f.agent}]{full(f.body)})"
    if isinstance(f, CstitDual):
        return f"(<{f.agent}>{full(f.body)})"
    if isinstance(f, K):
        return f"(K{full(f.body)})"
    if isinstance(f, Just):
        return f"({full_term(f.term)}:{full(f.body)})"
    if isinstance(f, Prove):
        return f"Prove({f.agent}, {full_term(f.term)}, {full(f.body)})"
    if isinstance(f, Proven):
        return f"Proven({full_term(f.term)}, {full(f.body)})"
    raise TypeError(f)


@pytest.mark.parametrize("text, expected", [
    ("x", x),
    ("!x + y*z", Sum(Check(x), App(y, z))),
    ("x*(y+z)", App(x, Sum(y, z))),
    ("x + y + z", Sum(Sum(x, y), z)),
    ("x*y*z", App(App(x, y), z)),
    ("!!c", Check(Check(ProofConst("c")))),
])
def test_parse_term(text, expected):
    assert parse_term(text) == expected


def test_print_term():
    assert print_term(Sum(Check(x), App(y, z))) == "!x + y*z"
    assert print_term(App(x, Sum(y, z))) == "x*(y + z)"


@pytest.mark.parametrize("text, expected", [
    ("K(<>p & <>~p)", K(And(Diamond(p), Diamond(Neg(p))))),
    ("Prove(j, x*y, p -> q)", Prove("j", App(x, y), Imp(p, q))),
    ("[]p -> [j]p", Imp(Box(p), Cstit("j", p))),
    ("p -> q -> p", Imp(p, Imp(q, p))),
    ("p | q & ~p", Or(p, And(q, Neg(p)))),
    ("p & q | p", Or(And(p, q), p)),
    ("~[]p", Neg(Box(p))),
    ("x:p & q", And(Just(x, p), q)),
    ("<i>p", CstitDual("i", p)),
    ("Proven(c, false)", Proven(ProofConst("c"), FALSUM)),
])
def test_parse_formula(text, expected):
    assert parse_formula(text, AGENTS) == expected


def test_print_minimal():
    assert print_formula(K(And(Diamond(p), Diamond(Neg(p))))) == "K(<>p & <>~p)"
    assert print_formula(p) == "p"
    assert print_formula(Imp(Imp(p, q), p)) == "(p -> q) -> p"
    assert print_formula(And(Or(p, q), p)) == "(p | q) & p"


@pytest.mark.parametrize("text", ["p &", "(p", "p q", "[k]p", "Prove(j, p, p)", "E x", "p -> ", "x +"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text, AGENTS)


def test_error_position():
    with pytest.raises(ParseError) as info:
        parse_formula("p &\n  & q", AGENTS)
    assert info.value.line == 2


def test_et_behind_flag():
    assert parse_formula("E x -> p", AGENTS, allow_et=True) == Imp(Et(x), p)
    with pytest.raises(ParseError):
        parse_formula("E x", AGENTS)


def test_unknown_agent_only_with_agent_set():
    assert parse_formula("[k]p") == Cstit("k", p)
    with pytest.raises(ParseError):
        parse_formula("[k]p", AGENTS)
    with pytest.raises(ValueError):
        parse_formula("p", [])


def test_subformulas_examples():
    assert subformulas(p) == [p]
    assert subformulas(Imp(p, q)) == [p, q, Imp(p, q)]
    assert subformulas(Proven(ProofVar("t"), p)) == [p, Proven(ProofVar("t"), p)]
    assert subformulas(And(p, p)) == [p, And(p, p)]


def test_normalize_duals():
    assert normalize(Diamond(CstitDual("j", p))) == Neg(Box(Neg(Neg(Cstit("j", Neg(p))))))


@given(terms)
def test_term_round_trip(t):
    assert parse_term(print_term(t)) == t


@given(_formulas(allow_et=True))
def test_formula_round_trip(f):
    assert parse_formula(print_formula(f), AGENTS, allow_et=True) == f


@given(_formulas(allow_et=True))
def test_precedence_soundness(f):
    assert parse_formula(full(f), AGENTS, allow_et=True) == parse_formula(
        print_formula(f), AGENTS, allow_et=True)


@given(formulas)
def test_subformula_laws(f):
    subs = subformulas(f)
    assert len(subs) == len(set(subs)) <= node_count(f)
    assert subs[-1] == f
    closed = set(subs)
    for g in subs:
        assert set(subformulas(g)) <= closed
    position = {g: n for n, g in enumerate(subs)}
    for g in subs:
        for child in subformulas(g)[:-1]:
            assert position[child] < position[g]


@settings(max_examples=50)
@given(formulas)
def test_normalize_idempotent(f):
    once = normalize(f)
    assert normalize(once) == once
    assert not any(isinstance(g, (Diamond, CstitDual)) for g in subformulas(once))
