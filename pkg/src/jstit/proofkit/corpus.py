"""Bundled machine-checked proofs of the elementary theorems T0-T5 and of
A_S4 instances in Pi."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ..syntax import (
    Atom, Box, Check, Cstit, Formula, Imp, Just, K, Neg, ProofVar, Prove, Proven,
    Term, conj, disj, parse_formula,
)
from .axioms import b13_instance, proven_disjunction
from .builder import ProofBuilder
from .proof import Proof

__all__ = ["CorpusEntry", "corpus", "CORPUS_AGENTS", "t5_lines", "as4_by_s4"]

CORPUS_AGENTS = ("i", "j")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    proof: Proof
    formula: Formula
    description: str


def _t1(b: ProofBuilder, t: Term, a: Formula) -> int:
    """``t:A -> Kt:A``: A5 twice, keeping the left then the right conjunct."""
    first = b.scheme("A5", t=t, A=a)  # t:A -> !t:t:A & KA
    left = b.scheme("A0-3", A=Just(Check(t), Just(t, a)), B=K(a))
    second = b.scheme("A5", t=Check(t), A=Just(t, a))  # !t:t:A -> !!t:!t:t:A & Kt:A
    right = b.scheme("A0-4", A=Just(Check(Check(t)), Just(Check(t), Just(t, a))), B=K(Just(t, a)))
    return b.chain(first, left, second, right)


def _t5_single(b: ProofBuilder, agent: str, t: Term, a: Formula) -> int:
    """``~[]Prove(j,t,A)``."""
    p = Prove(agent, t, a)
    refl = b.scheme("A1-T", A=p)  # []P -> P
    b9 = b.scheme("B9", agent=agent, t=t, A=a)
    body = b.formula(b9).right  # ((~Proven & [j]P) & ~[]P) & t:A
    drop_just = b.scheme("A0-3", A=body.left, B=body.right)
    keep_nbox = b.scheme("A0-4", A=body.left.left, B=body.left.right)
    p_not_box = b.chain(b9, drop_just, keep_nbox)  # P -> ~[]P
    return b.follows(Neg(Box(p)), refl, p_not_box)


def _dual_mono(b: ProofBuilder, k: int, agent: str) -> int:
    """From ``X -> Y`` infer ``<j>X -> <j>Y`` (both in primitive form)."""
    f = b.formula(k)
    contra = b.follows(Imp(Neg(f.right), Neg(f.left)), k)
    lifted = b.mono(contra, agent)  # [j]~Y -> [j]~X
    return b.follows(Imp(Neg(Cstit(agent, Neg(f.left))), Neg(Cstit(agent, Neg(f.right)))), lifted)


def t5_lines(b: ProofBuilder, agents: Sequence[str], t: Term, a: Formula) -> int:
    """``~[](Prove(i1,t,A) | ... | Prove(in,t,A))`` for distinct agents."""
    first = agents[0]
    base = _t5_single(b, first, t, a)
    if len(agents) == 1:
        return base
    provs = [Prove(i, t, a) for i in agents]
    d = disj(provs)
    p1 = provs[0]
    sub = conj([Neg(p) for p in provs])
    z6 = b.axiom(b13_instance(first, t, a, b.agents), "B13")
    full = b.formula(z6).right.body  # the Ag conjunction inside <i1>
    if full != sub:
        z7 = _dual_mono(b, b.tautology(Imp(full, sub)), first)
        z8 = b.hs(z6, z7)
    else:
        z8 = z6
    # [i1]D -> [i1]~(~P1 & ... & ~Pn), then contrapose z8
    mono = b.mono(b.tautology(Imp(d, Neg(sub))), first)
    z9 = b.follows(Imp(b.formula(mono).left, p1), z8, mono)
    z10 = b.hs(b.scheme("A2", A=d, agent=first), z9)
    z11 = b.box_lift(z10)
    return b.follows(Neg(Box(d)), z11, base)


def as4_by_s4(b: ProofBuilder, pairs: Sequence[tuple[Term, Formula]]) -> int:
    """An A_S4 instance by one S4 step applied to the A7-T instance ``KB -> B``."""
    d = proven_disjunction(pairs)
    return b.s4(b.scheme("A7-T", A=d), pairs)


def _entry(name, build, conclusion_text, description) -> CorpusEntry:
    b = ProofBuilder(CORPUS_AGENTS)
    goal = parse_formula(conclusion_text, CORPUS_AGENTS)
    proof = b.build(build(b), conclusion=goal)
    return CorpusEntry(name, proof, goal, description)


@lru_cache(maxsize=None)
def _corpus() -> tuple[CorpusEntry, ...]:
    p, q = Atom("p"), Atom("q")
    t, x, y = ProofVar("t"), ProofVar("x"), ProofVar("y")
    s4_pairs_1 = ((x, p),)
    s4_pairs_2 = ((x, p), (y, q))

    def two_s4(b):
        one, two = as4_by_s4(b, s4_pairs_1), as4_by_s4(b, s4_pairs_2)
        f1, f2 = b.formula(one), b.formula(two)
        return b.mp(two, b.mp(one, b.scheme("A0-5", A=f1, B=f2)))

    specs = [
        ("T0", lambda b: b.t0(p), "Kp -> []p", "KA -> []A"),
        ("T1", lambda b: _t1(b, t, p), "t:p -> Kt:p", "t:A -> Kt:A"),
        ("T2", lambda b: b.hs(_t1(b, t, p), b.t0(Just(t, p))), "t:p -> []t:p", "t:A -> []t:A"),
        ("T3", lambda b: b.hs(b.scheme("A7-4", A=p), b.t0(K(p))), "Kp -> []Kp", "KA -> []KA"),
        ("T4", lambda b: b.chain(b.scheme("B11", t=t, A=p),
                                 b.scheme("A0-3", A=K(Proven(t, p)), B=Just(t, p)),
                                 b.t0(Proven(t, p))),
         "Proven(t,p) -> []Proven(t,p)", "Proven(t,A) -> []Proven(t,A)"),
        ("T5-n1", lambda b: t5_lines(b, ("i",), t, p), "~[](Prove(i,t,p))",
         "~[]Prove(j,t,A)"),
        ("T5-n2", lambda b: t5_lines(b, ("i", "j"), t, p),
         "~[](Prove(i,t,p) | Prove(j,t,p))", "~[](Prove(i1,t,A) | Prove(i2,t,A))"),
        ("AS4-n1", lambda b: as4_by_s4(b, s4_pairs_1),
         "K~Proven(x,p) -> ~Prove(i,x,p) & ~Prove(j,x,p)",
         "A_S4 instance from one S4 step on KB -> B"),
        ("AS4-n2", lambda b: as4_by_s4(b, s4_pairs_2),
         "K(~Proven(x,p) | ~Proven(y,q)) -> "
         "(~Prove(i,x,p) & ~Prove(j,x,p)) | (~Prove(i,y,q) & ~Prove(j,y,q))",
         "A_S4 instance from one S4 step on KB -> B"),
        ("S4-two", two_s4,
         "(K~Proven(x,p) -> ~Prove(i,x,p) & ~Prove(j,x,p)) & "
         "(K(~Proven(x,p) | ~Proven(y,q)) -> "
         "(~Prove(i,x,p) & ~Prove(j,x,p)) | (~Prove(i,y,q) & ~Prove(j,y,q)))",
         "two S4 steps joined by conjunction"),
    ]
    return tuple(_entry(*s) for s in specs)


def corpus() -> dict[str, CorpusEntry]:
    """Named corpus entries, in a fixed order."""
    return {e.name: e for e in _corpus()}
