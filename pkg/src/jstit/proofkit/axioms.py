"""Axiom schemes and scheme recognition.

All matching is done on normalised formulas (``<>A`` read as ``~[]~A`` and
``<j>A`` as ``~[j]~A``).  The indexed conjunctions and disjunctions of A3,
B13, S4 and AS4 are canonically right-associated (``a | (b | c)``), and
agent conjunctions list agents in the order of the agent set.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from typing import Callable, Sequence

from ..syntax import (
    FALSUM, And, App, Box, Check, Cstit, CstitDual, Diamond, Formula, Imp, Just, K,
    Neg, Or, Prove, Proven, Sum, Term, normalize,
)

__all__ = [
    "SCHEME_ORDER", "PI_PRIME_ONLY", "CS_SCHEMES", "match_axiom", "is_instance",
    "b13_instance", "as4_instance", "s4_conclusion", "proven_disjunction",
    "a3_instance", "instantiate", "SCHEMES", "rconj", "rdisj",
]


@dataclass(frozen=True)
class MetaF:
    name: str


@dataclass(frozen=True)
class MetaT:
    name: str


A, B, C = MetaF("A"), MetaF("B"), MetaF("C")
s, t = MetaT("s"), MetaT("t")
J = "?j"


def _box_like(op: str):
    """Constructor for □ (op '') or [j] (op = agent metavariable)."""
    if op == "":
        return Box
    return lambda body: Cstit(op, body)


def _s5(op: str) -> dict[str, Formula]:
    M = _box_like(op)
    return {
        "A1-K": Imp(M(Imp(A, B)), Imp(M(A), M(B))),
        "A1-T": Imp(M(A), A),
        "A1-5": Imp(Neg(M(Neg(A))), M(Neg(M(Neg(A))))),
    }


_PATTERNS: dict[str, list[Formula]] = {
    "A0-1": [Imp(A, Imp(B, A))],
    "A0-2": [Imp(Imp(A, Imp(B, C)), Imp(Imp(A, B), Imp(A, C)))],
    "A0-3": [Imp(And(A, B), A)],
    "A0-4": [Imp(And(A, B), B)],
    "A0-5": [Imp(A, Imp(B, And(A, B)))],
    "A0-6": [Imp(A, Or(A, B))],
    "A0-7": [Imp(B, Or(A, B))],
    "A0-8": [Imp(Imp(A, C), Imp(Imp(B, C), Imp(Or(A, B), C)))],
    "A0-9": [Imp(Imp(A, B), Imp(Imp(A, Neg(B)), Neg(A)))],
    "A0-10": [Imp(Neg(Neg(A)), A)],
    "A0-11": [Imp(FALSUM, A)],
    "A0-12": [Imp(Neg(A), Imp(A, FALSUM))],
    "A1-K": [_s5("")["A1-K"], _s5(J)["A1-K"]],
    "A1-T": [_s5("")["A1-T"], _s5(J)["A1-T"]],
    "A1-5": [_s5("")["A1-5"], _s5(J)["A1-5"]],
    "A2": [Imp(Box(A), Cstit(J, A))],
    "A4": [Imp(Just(s, Imp(A, B)), Imp(Just(t, A), Just(App(s, t), B)))],
    "A5": [Imp(Just(t, A), And(Just(Check(t), Just(t, A)), K(A)))],
    "A6": [Imp(Or(Just(s, A), Just(t, A)), Just(Sum(s, t), A))],
    "A7-K": [Imp(K(Imp(A, B)), Imp(K(A), K(B)))],
    "A7-T": [Imp(K(A), A)],
    "A7-4": [Imp(K(A), K(K(A)))],
    "A8": [Imp(K(A), Box(K(Box(A))))],
    "B9": [Imp(Prove(J, t, A), And(And(And(Neg(Proven(t, A)), Cstit(J, Prove(J, t, A))),
                                       Neg(Box(Prove(J, t, A)))), Just(t, A)))],
    "B10": [Imp(And(Prove(J, t, A), Just(t, B)), Prove(J, t, B))],
    "B11": [Imp(Proven(t, A), And(K(Proven(t, A)), Just(t, A)))],
    "B12": [Imp(And(Proven(t, A), Just(t, B)), Proven(t, B))],
}

SCHEME_ORDER = (
    "A0-1", "A0-2", "A0-3", "A0-4", "A0-5", "A0-6", "A0-7", "A0-8", "A0-9", "A0-10",
    "A0-11", "A0-12", "A1-K", "A1-T", "A1-5", "A2", "A3", "A4", "A5", "A6",
    "A7-K", "A7-T", "A7-4", "A8", "B9", "B10", "B11", "B12", "B13", "AS4",
)
PI_PRIME_ONLY = frozenset({"AS4"})
CS_SCHEMES = tuple(x for x in SCHEME_ORDER if x not in PI_PRIME_ONLY)


def _match(pat, obj, env: dict) -> bool:
    if isinstance(pat, (MetaF, MetaT)):
        if isinstance(pat, MetaT) != _is_term(obj):
            return False
        if pat in env:
            return env[pat] == obj
        env[pat] = obj
        return True
    if isinstance(pat, str):
        if pat.startswith("?"):
            if pat in env:
                return env[pat] == obj
            env[pat] = obj
            return True
        return pat == obj
    if type(pat) is not type(obj):
        return False
    if is_dataclass(pat):
        return all(_match(getattr(pat, fd.name), getattr(obj, fd.name), env)
                   for fd in fields(pat))
    return pat == obj


def _is_term(obj) -> bool:
    return isinstance(obj, (Sum, App, Check)) or type(obj).__name__ in ("ProofVar", "ProofConst")


def _flatten(f: Formula, cls) -> list[Formula]:
    if isinstance(f, cls):
        return _flatten(f.left, cls) + _flatten(f.right, cls)
    return [f]


def rconj(parts: Sequence[Formula]) -> Formula:
    """Right-associated conjunction ``a & (b & c)``."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = And(f, out)
    return out


def rdisj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Or(f, out)
    return out


def a3_instance(pairs: Sequence[tuple[str, Formula]]) -> Formula:
    """``(<>[j1]A1 & ... & <>[jn]An) -> <>([j1]A1 & ... & [jn]An)``."""
    return Imp(rconj([Diamond(Cstit(j, a)) for j, a in pairs]),
               Diamond(rconj([Cstit(j, a) for j, a in pairs])))


def b13_instance(agent: str, term: Term, body: Formula, agents: Sequence[str]) -> Formula:
    return Imp(Neg(Prove(agent, term, body)),
               CstitDual(agent, rconj([Neg(Prove(i, term, body)) for i in agents])))


def proven_disjunction(pairs: Sequence[tuple[Term, Formula]]) -> Formula:
    return rdisj([Neg(Proven(tk, bk)) for tk, bk in pairs])


def s4_conclusion(pairs: Sequence[tuple[Term, Formula]], agents: Sequence[str]) -> Formula:
    """The disjunction of agent conjunctions produced by the S4 rule."""
    return rdisj([rconj([Neg(Prove(j, tk, bk)) for j in agents]) for tk, bk in pairs])


def as4_instance(pairs: Sequence[tuple[Term, Formula]], agents: Sequence[str]) -> Formula:
    return Imp(K(proven_disjunction(pairs)), s4_conclusion(pairs, agents))


def _check_a3(f: Formula, agents) -> bool:
    if not isinstance(f, Imp):
        return False
    items = _flatten(f.left, And)
    pairs = []
    for it in items:
        if not (isinstance(it, Neg) and isinstance(it.body, Box) and isinstance(it.body.body, Neg)
                and isinstance(it.body.body.body, Cstit)):
            return False
        cs = it.body.body.body
        pairs.append((cs.agent, cs.body))
    names = [j for j, _ in pairs]
    if len(set(names)) != len(names) or not set(names) <= set(agents):
        return False
    return normalize(a3_instance(pairs)) == f


def _check_b13(f: Formula, agents) -> bool:
    if not (isinstance(f, Imp) and isinstance(f.left, Neg) and isinstance(f.left.body, Prove)):
        return False
    p = f.left.body
    if p.agent not in agents:
        return False
    return normalize(b13_instance(p.agent, p.term, p.body, agents)) == f


def _check_as4(f: Formula, agents) -> bool:
    if not (isinstance(f, Imp) and isinstance(f.left, K)):
        return False
    pairs = []
    for d in _flatten(f.left.body, Or):
        if not (isinstance(d, Neg) and isinstance(d.body, Proven)):
            return False
        pairs.append((d.body.term, d.body.body))
    return normalize(as4_instance(pairs, agents)) == f


_PROCEDURAL: dict[str, Callable[[Formula, Sequence[str]], bool]] = {
    "A3": _check_a3, "B13": _check_b13, "AS4": _check_as4,
}

# patterns are written without diamonds, so they are already normal
_NORMALIZED = _PATTERNS


def _agents_ok(env: dict, agents) -> bool:
    return all(v in agents for k, v in env.items() if isinstance(k, str))


def is_instance(f: Formula, scheme: str, agents: Sequence[str]) -> bool:
    """Whether ``f`` is an instance of the named scheme."""
    g = normalize(f)
    if scheme in _PROCEDURAL:
        return _PROCEDURAL[scheme](g, agents)
    if scheme not in _NORMALIZED:
        raise KeyError(f"unknown axiom scheme {scheme!r}")
    for pat in _NORMALIZED[scheme]:
        env: dict = {}
        if _match(pat, g, env) and _agents_ok(env, agents):
            return True
    return False


def match_axiom(f: Formula, agents: Sequence[str], pi_prime: bool = False) -> str | None:
    """First scheme (in ``SCHEME_ORDER``) that ``f`` instantiates, if any.

    The ``AS4`` scheme is only considered when ``pi_prime`` is set.
    """
    for scheme in SCHEME_ORDER:
        if scheme in PI_PRIME_ONLY and not pi_prime:
            continue
        if is_instance(f, scheme, agents):
            return scheme
    return None


def instantiate(scheme: str, *, A: Formula | None = None, B: Formula | None = None,
                C: Formula | None = None, s: Term | None = None, t: Term | None = None,
                agent: str | None = None, modality: str | None = None) -> Formula:
    """Build an instance of a pattern-defined scheme.

    ``modality`` selects the A1 variant: ``None`` for the historical box,
    an agent name for that agent's stit.
    """
    env = {MetaF("A"): A, MetaF("B"): B, MetaF("C"): C, MetaT("s"): s, MetaT("t"): t, J: agent}
    pats = _PATTERNS[scheme]
    pat = pats[0] if modality is None or len(pats) == 1 else pats[1]
    if modality is not None and len(pats) > 1:
        env[J] = modality
    return _subst(pat, env)


def _subst(pat, env):
    if isinstance(pat, (MetaF, MetaT)) or (isinstance(pat, str) and pat.startswith("?")):
        val = env.get(pat)
        if val is None:
            raise ValueError(f"scheme needs a value for {pat}")
        return val
    if is_dataclass(pat) and not isinstance(pat, type):
        return type(pat)(*(_subst(getattr(pat, fd.name), env) for fd in fields(pat)))
    return pat


SCHEMES = SCHEME_ORDER
