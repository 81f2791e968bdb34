"""Proof polynomials, formulas, and their concrete ASCII syntax.

Surface syntax::

    ~A   A & B   A | B   A -> B   false
    []A  <>A     [j]A    <j>A     KA
    t:A  Prove(j, t, A)  Proven(t, A)  E t   (the last only with ``allow_et``)

Terms are built from variables (initial letter s-z), constants (initial
letter c or d), ``+``, ``*`` and ``!``.  Any other lowercase identifier
is a propositional atom in formula position and an agent in agent
position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

__all__ = [
    "ProofVar", "ProofConst", "Sum", "App", "Check", "Term",
    "Atom", "Falsum", "Neg", "And", "Or", "Imp", "Box", "Diamond",
    "Cstit", "CstitDual", "K", "Just", "Prove", "Proven", "Et", "Formula",
    "AgentSet", "ParseError", "parse_term", "parse_formula",
    "print_term", "print_formula", "subformulas", "subterms", "normalize",
    "agents_of", "terms_of", "atoms_of", "conj", "disj", "is_term_var",
    "is_term_const", "FALSUM",
]

_VAR_INITIALS = frozenset("stuvwxyz")
_CONST_INITIALS = frozenset("cd")


def is_term_var(name: str) -> bool:
    return bool(name) and name[0] in _VAR_INITIALS


def is_term_const(name: str) -> bool:
    return bool(name) and name[0] in _CONST_INITIALS


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class ProofVar:
    name: str

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class ProofConst:
    name: str

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class App:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Check:
    inner: "Term"

    def __str__(self) -> str:
        return print_term(self)


Term = Union[ProofVar, ProofConst, Sum, App, Check]


# -- formulas ----------------------------------------------------------------


class _Printable:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)  # type: ignore[arg-type]


@dataclass(frozen=True, repr=False)
class Atom(_Printable):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Falsum(_Printable):
    def __repr__(self) -> str:
        return "Falsum()"


@dataclass(frozen=True)
class Neg(_Printable):
    body: "Formula"


@dataclass(frozen=True)
class And(_Printable):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or(_Printable):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp(_Printable):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box(_Printable):
    body: "Formula"


@dataclass(frozen=True)
class Diamond(_Printable):
    body: "Formula"


@dataclass(frozen=True)
class Cstit(_Printable):
    agent: str
    body: "Formula"


@dataclass(frozen=True)
class CstitDual(_Printable):
    agent: str
    body: "Formula"


@dataclass(frozen=True)
class K(_Printable):
    body: "Formula"


@dataclass(frozen=True)
class Just(_Printable):
    term: Term
    body: "Formula"


@dataclass(frozen=True)
class Prove(_Printable):
    agent: str
    term: Term
    body: "Formula"


@dataclass(frozen=True)
class Proven(_Printable):
    term: Term
    body: "Formula"


@dataclass(frozen=True)
class Et(_Printable):
    term: Term


Formula = Union[Atom, Falsum, Neg, And, Or, Imp, Box, Diamond, Cstit,
                CstitDual, K, Just, Prove, Proven, Et]
AgentSet = Sequence[str]

FALSUM = Falsum()

_UNARY = (Neg, Box, Diamond, K)
_AGENTIVE = (Cstit, CstitDual)
_BINARY = (And, Or, Imp)


def conj(parts: Sequence[Formula]) -> Formula:
    """Left-associated conjunction of one or more formulas."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    """Left-associated disjunction of one or more formulas."""
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# -- lexer -------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<box>\[\])
  | (?P<dia><>)
  | (?P<upper>Proven|Prove|K|E)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
  | (?P<punct>[~&|()\[\]<>:,;!+*])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unknown lexeme {text[pos]!r}", line, col)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            if kind == "punct":
                kind = m.group()
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, agents: AgentSet | None = None,
                 allow_et: bool = False):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.agents = None if agents is None else frozenset(agents)
        self.allow_et = allow_et

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        line, col = _line_col(self.text, tok.pos)
        return ParseError(message, line, col)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # terms
    def term(self) -> Term:
        t = self.app()
        while self.accept("+"):
            t = Sum(t, self.app())
        return t

    def app(self) -> Term:
        t = self.bang()
        while self.accept("*"):
            t = App(t, self.bang())
        return t

    def bang(self) -> Term:
        if self.accept("!"):
            return Check(self.bang())
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        tok = self.tok
        if tok.kind == "ident":
            if is_term_var(tok.text):
                self.i += 1
                return ProofVar(tok.text)
            if is_term_const(tok.text):
                self.i += 1
                return ProofConst(tok.text)
            raise self.error(f"{tok.text!r} is not a proof variable or constant")
        raise self.error(f"expected a proof term, found {tok.text or 'end of input'!r}")

    def starts_term(self) -> bool:
        tok = self.tok
        if tok.kind == "!":
            return True
        return tok.kind == "ident" and (is_term_var(tok.text) or is_term_const(tok.text))

    # formulas
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("arrow"):
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def agent(self) -> str:
        tok = self.expect("ident")
        if self.agents is not None and tok.text not in self.agents:
            raise self.error(f"unknown agent {tok.text!r}", tok)
        return tok.text

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("~"):
            return Neg(self.unary())
        if self.accept("box"):
            return Box(self.unary())
        if self.accept("dia"):
            return Diamond(self.unary())
        if tok.kind == "[" and self.peek().kind == "ident" and self.peek(2).kind == "]":
            self.i += 1
            a = self.agent()
            self.expect("]")
            return Cstit(a, self.unary())
        if tok.kind == "<" and self.peek().kind == "ident" and self.peek(2).kind == ">":
            self.i += 1
            a = self.agent()
            self.expect(">")
            return CstitDual(a, self.unary())
        if tok.kind == "upper" and tok.text == "K":
            self.i += 1
            return K(self.unary())
        if self.starts_term():
            t = self.term()
            self.expect(":")
            return Just(t, self.unary())
        if tok.kind == "(":
            # either a parenthesised formula or a parenthesised term before ':'
            save = self.i
            try:
                t = self.term()
            except ParseError:
                t = None
            if t is not None and self.tok.kind == ":":
                self.i += 1
                return Just(t, self.unary())
            self.i = save
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "false":
                return FALSUM
            return Atom(tok.text)
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "upper":
            self.i += 1
            if tok.text == "Prove":
                self.expect("(")
                a = self.agent()
                self.expect(",")
                t = self.term()
                self.expect(",")
                f = self.formula()
                self.expect(")")
                return Prove(a, t, f)
            if tok.text == "Proven":
                self.expect("(")
                t = self.term()
                self.expect(",")
                f = self.formula()
                self.expect(")")
                return Proven(t, f)
            if tok.text == "E":
                if not self.allow_et:
                    raise self.error("the E modality is an extension and is disabled", tok)
                return Et(self.bang())
        raise self.error(f"expected a formula, found {tok.text or 'end of input'!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_formula(text: str, agents: AgentSet | None = None, *,
                  allow_et: bool = False) -> Formula:
    """Parse ``text``.  When ``agents`` is given, agent names are checked
    against it."""
    if agents is not None and not agents:
        raise ValueError("agent set must be non-empty")
    p = _Parser(text, agents, allow_et)
    f = p.formula()
    p.finish()
    return f


# -- printer -----------------------------------------------------------------

# precedence levels: -> 1, | 2, & 3, unary 4
def print_term(t: Term) -> str:
    return _pt(t, 0)


def _pt(t: Term, ctx: int) -> str:
    # ctx: 0 sum position, 1 app operand, 2 bang operand
    if isinstance(t, (ProofVar, ProofConst)):
        return t.name
    if isinstance(t, Check):
        return "!" + _pt(t.inner, 2)
    if isinstance(t, App):
        s = f"{_pt(t.left, 1)}*{_pt(t.right, 2)}"
        return f"({s})" if ctx >= 2 else s
    if isinstance(t, Sum):
        s = f"{_pt(t.left, 0)} + {_pt(t.right, 1)}"
        return f"({s})" if ctx >= 1 else s
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    return _pf(f, 0)


def _term_prefix(t: Term) -> str:
    # a term before ':' is read as a whole sum, so parentheses are never needed
    return print_term(t)


def _pf(f: Formula, ctx: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Neg):
        return "~" + _pf(f.body, 4)
    if isinstance(f, Box):
        return "[]" + _pf(f.body, 4)
    if isinstance(f, Diamond):
        return "<>" + _pf(f.body, 4)
    if isinstance(f, K):
        return "K" + _pf(f.body, 4)
    if isinstance(f, Cstit):
        return f"[{f.agent}]" + _pf(f.body, 4)
    if isinstance(f, CstitDual):
        return f"<{f.agent}>" + _pf(f.body, 4)
    if isinstance(f, Just):
        return f"{_term_prefix(f.term)}:" + _pf(f.body, 4)
    if isinstance(f, Prove):
        return f"Prove({f.agent}, {print_term(f.term)}, {_pf(f.body, 0)})"
    if isinstance(f, Proven):
        return f"Proven({print_term(f.term)}, {_pf(f.body, 0)})"
    if isinstance(f, Et):
        return "E" + _pt(f.term, 2)
    if isinstance(f, And):
        s = f"{_pf(f.left, 3)} & {_pf(f.right, 4)}"
        return f"({s})" if ctx > 3 else s
    if isinstance(f, Or):
        s = f"{_pf(f.left, 2)} | {_pf(f.right, 3)}"
        return f"({s})" if ctx > 2 else s
    if isinstance(f, Imp):
        s = f"{_pf(f.left, 2)} -> {_pf(f.right, 1)}"
        return f"({s})" if ctx > 1 else s
    raise TypeError(f"not a formula: {f!r}")


# -- structural utilities ----------------------------------------------------


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Falsum, Et)):
        return ()
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return (f.body,)  # type: ignore[union-attr]


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subformulas of ``f`` (itself included), children first."""
    seen: dict[Formula, None] = {}

    def walk(g: Formula) -> None:
        if g in seen:
            return
        for c in children(g):
            walk(c)
        seen[g] = None

    walk(f)
    return list(seen)


def subterms(t: Term) -> list[Term]:
    seen: dict[Term, None] = {}

    def walk(u: Term) -> None:
        if u in seen:
            return
        if isinstance(u, (Sum, App)):
            walk(u.left)
            walk(u.right)
        elif isinstance(u, Check):
            walk(u.inner)
        seen[u] = None

    walk(t)
    return list(seen)


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def agents_of(f: Formula) -> set[str]:
    return {g.agent for g in _walk(f) if isinstance(g, (Cstit, CstitDual, Prove))}


def terms_of(f: Formula) -> set[Term]:
    return {g.term for g in _walk(f) if isinstance(g, (Just, Prove, Proven, Et))}


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in _walk(f) if isinstance(g, Atom)}


def node_count(f: Formula) -> int:
    return sum(1 for _ in _walk(f))


def normalize(f: Formula) -> Formula:
    """Rewrite ``<>A`` as ``~[]~A`` and ``<j>A`` as ``~[j]~A`` throughout."""
    if isinstance(f, (Atom, Falsum, Et)):
        return f
    if isinstance(f, Diamond):
        return Neg(Box(Neg(normalize(f.body))))
    if isinstance(f, CstitDual):
        return Neg(Cstit(f.agent, Neg(normalize(f.body))))
    if isinstance(f, _BINARY):
        left, right = normalize(f.left), normalize(f.right)
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    body = normalize(f.body)  # type: ignore[union-attr]
    if body is f.body:  # type: ignore[union-attr]
        return f
    if isinstance(f, (Cstit,)):
        return Cstit(f.agent, body)
    if isinstance(f, Just):
        return Just(f.term, body)
    if isinstance(f, Prove):
        return Prove(f.agent, f.term, body)
    if isinstance(f, Proven):
        return Proven(f.term, body)
    return type(f)(body)  # type: ignore[call-arg]
