"""Programmatic construction of Hilbert proofs.

``ProofBuilder`` keeps a growing pool of lines, each tagged with the set
of hypotheses it rests on.  Hypothetical lines never reach the output:
``discharge`` turns them into implications by the deduction theorem, and
``build`` emits only the hypothesis-free lines the conclusion actually
needs, renumbered.  Propositional tautologies (over any formulas, with
non-classical subformulas read as atoms) are proved by Kalmár's method
from the A0 basis.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Sequence

from ..syntax import (
    And, Box, Cstit, Falsum, FALSUM, Formula, Imp, K, Neg, Or, Term, normalize,
)
from .axioms import instantiate, is_instance, match_axiom
from .proof import MP, Axiom, FromCS, Line, Nec, Proof, S4

__all__ = ["ProofBuilder", "ProofBuildError", "prop_atoms", "is_tautology"]

_CLASSICAL = (Neg, And, Or, Imp, Falsum)


class ProofBuildError(ValueError):
    pass


@dataclass(frozen=True)
class _Hyp:
    pass


@dataclass
class _Entry:
    formula: Formula  # as displayed
    key: Formula  # normalised
    why: object
    deps: frozenset


def prop_atoms(f: Formula) -> list[Formula]:
    """Maximal non-classical subformulas of normalised ``f``, first-seen order."""
    out: list[Formula] = []

    def walk(g):
        if isinstance(g, Falsum):
            return
        if isinstance(g, Neg):
            walk(g.body)
        elif isinstance(g, (And, Or, Imp)):
            walk(g.left)
            walk(g.right)
        elif g not in out:
            out.append(g)

    walk(normalize(f))
    return out


def _truth(f: Formula, v: dict) -> bool:
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Neg):
        return not _truth(f.body, v)
    if isinstance(f, And):
        return _truth(f.left, v) and _truth(f.right, v)
    if isinstance(f, Or):
        return _truth(f.left, v) or _truth(f.right, v)
    if isinstance(f, Imp):
        return not _truth(f.left, v) or _truth(f.right, v)
    return v[f]


def is_tautology(f: Formula) -> bool:
    g = normalize(f)
    atoms = prop_atoms(g)
    return all(_truth(g, dict(zip(atoms, bits)))
               for bits in itertools.product((True, False), repeat=len(atoms)))


class ProofBuilder:
    """Accumulates justified lines; every method returns a line handle (int)."""

    def __init__(self, agents: Sequence[str]):
        if not agents:
            raise ValueError("agent set must be non-empty")
        self.agents = tuple(agents)
        self._lines: list[_Entry] = []
        self._by_key: dict[Formula, list[int]] = {}
        self._discharged: dict[tuple[Formula, int], int] = {}

    # -- primitive steps -------------------------------------------------------

    def _add(self, f: Formula, why, deps: frozenset) -> int:
        key = normalize(f)
        for k in self._by_key.get(key, ()):
            if self._lines[k].deps <= deps:
                return k
        self._lines.append(_Entry(f, key, why, deps))
        idx = len(self._lines) - 1
        self._by_key.setdefault(key, []).append(idx)
        return idx

    def formula(self, k: int) -> Formula:
        return self._lines[k].formula

    def key(self, k: int) -> Formula:
        return self._lines[k].key

    def deps(self, k: int) -> frozenset:
        return self._lines[k].deps

    def axiom(self, f: Formula, scheme: str | None = None) -> int:
        if scheme is None:
            scheme = match_axiom(f, self.agents, pi_prime=True)
            if scheme is None:
                raise ProofBuildError(f"not an axiom instance: {f}")
        elif not is_instance(f, scheme, self.agents):
            raise ProofBuildError(f"not an instance of {scheme}: {f}")
        return self._add(f, Axiom(scheme), frozenset())

    def scheme(self, name: str, **kw) -> int:
        return self.axiom(instantiate(name, **kw), name)

    def cs(self, f: Formula) -> int:
        return self._add(f, FromCS(), frozenset())

    def assume(self, f: Formula) -> int:
        return self._add(f, _Hyp(), frozenset({normalize(f)}))

    def mp(self, minor: int, major: int) -> int:
        a, b = self.key(minor), self._lines[major]
        if not (isinstance(b.key, Imp) and b.key.left == a):
            raise ProofBuildError(f"modus ponens mismatch: {self.formula(minor)} / {b.formula}")
        conclusion = b.formula.right if isinstance(b.formula, Imp) else b.key.right
        return self._add(conclusion, MP(minor, major), self.deps(minor) | b.deps)

    def nec(self, k: int) -> int:
        self._closed(k, "R2")
        return self._add(K(self.formula(k)), Nec(k), frozenset())

    def s4(self, k: int, pairs: Sequence[tuple[Term, Formula]]) -> int:
        from .axioms import s4_conclusion
        self._closed(k, "S4")
        f = self.formula(k)
        if not isinstance(f, Imp):
            raise ProofBuildError("S4 premise must be an implication")
        return self._add(Imp(f.left, s4_conclusion(pairs, self.agents)),
                         S4(k, tuple(pairs)), frozenset())

    def _closed(self, k: int, rule: str) -> None:
        if self.deps(k):
            raise ProofBuildError(f"{rule} needs a theorem, not a line resting on hypotheses")

    # -- deduction theorem -----------------------------------------------------

    def identity(self, a: Formula) -> int:
        """``A -> A`` in five lines."""
        aa = Imp(a, a)
        s1 = self.scheme("A0-1", A=a, B=aa)
        s2 = self.scheme("A0-2", A=a, B=aa, C=a)
        s3 = self.mp(s1, s2)
        s4 = self.scheme("A0-1", A=a, B=a)
        return self.mp(s4, s3)

    def weaken(self, h: Formula, k: int) -> int:
        """From ``B`` infer ``H -> B``."""
        return self.mp(k, self.scheme("A0-1", A=self.formula(k), B=h))

    def discharge(self, h: Formula, k: int) -> int:
        """Line ``H -> F`` from line ``F``, with ``H`` removed from its hypotheses."""
        hk = normalize(h)
        memo_key = (hk, k)
        if memo_key in self._discharged:
            return self._discharged[memo_key]
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20000))
        try:
            out = self._discharge(h, hk, k)
        finally:
            sys.setrecursionlimit(old)
        return out

    def _discharge(self, h: Formula, hk: Formula, k: int) -> int:
        memo_key = (hk, k)
        if memo_key in self._discharged:
            return self._discharged[memo_key]
        e = self._lines[k]
        if hk not in e.deps:
            out = self.weaken(h, k)
        elif isinstance(e.why, _Hyp):
            out = self.identity(h)
        else:
            assert isinstance(e.why, MP)
            a = self._discharge(h, hk, e.why.minor)
            ab = self._discharge(h, hk, e.why.major)
            fa = self.formula(e.why.minor)
            ax = self.scheme("A0-2", A=h, B=fa, C=e.formula)
            out = self.mp(a, self.mp(ab, ax))
        self._discharged[memo_key] = out
        return out

    # -- propositional reasoning -------------------------------------------------

    def hs(self, ab: int, bc: int) -> int:
        """Hypothetical syllogism: from ``A -> B`` and ``B -> C`` infer ``A -> C``.

        Expands to A0-1, MP, A0-2, MP, MP.
        """
        fab, fbc = self.formula(ab), self.formula(bc)
        if normalize(fab.right) != normalize(fbc.left):
            raise ProofBuildError(f"cannot chain {fab} and {fbc}")
        a, b, c = fab.left, fab.right, fbc.right
        s1 = self.scheme("A0-1", A=Imp(b, c), B=a)
        s2 = self.mp(bc, s1)
        s3 = self.scheme("A0-2", A=a, B=b, C=c)
        s4 = self.mp(s2, s3)
        return self.mp(ab, s4)

    def chain(self, *ks: int) -> int:
        out = ks[0]
        for k in ks[1:]:
            out = self.hs(out, k)
        return out

    def falsum_from(self, a: int, na: int) -> int:
        """From ``A`` and ``~A`` infer false."""
        fa = self.formula(a)
        s = self.scheme("A0-12", A=fa)
        return self.mp(a, self.mp(na, s))

    def efq(self, a: int, na: int, target: Formula) -> int:
        bot = self.falsum_from(a, na)
        return self.mp(bot, self.scheme("A0-11", A=target))

    def neg_intro(self, h: Formula, b: int, nb: int) -> int:
        """From ``H |- B`` and ``H |- ~B`` infer ``~H``."""
        fb = self.formula(b)
        hb, hnb = self.discharge(h, b), self.discharge(h, nb)
        ax = self.scheme("A0-9", A=h, B=fb)
        return self.mp(hnb, self.mp(hb, ax))

    def dni(self, a: int) -> int:
        """From ``A`` infer ``~~A``."""
        fa = self.formula(a)
        na = self.assume(Neg(fa))
        return self.neg_intro(Neg(fa), a, na)

    def excluded_middle(self, a: Formula) -> int:
        em = Or(a, Neg(a))
        nem = self.assume(Neg(em))
        ha = self.assume(a)
        not_a = self.neg_intro(a, self.mp(ha, self.scheme("A0-6", A=a, B=Neg(a))), nem)
        em_line = self.mp(not_a, self.scheme("A0-7", A=a, B=Neg(a)))
        nn = self.neg_intro(Neg(em), em_line, nem)
        return self.mp(nn, self.scheme("A0-10", A=em))

    def _lemma(self, f: Formula, v: dict, lits: dict) -> int:
        """Line proving ``f`` (if true under ``v``) or ``~f`` from the literals."""
        if isinstance(f, Falsum):
            bot = self.assume(FALSUM)
            return self.neg_intro(FALSUM, bot, self.mp(bot, self.scheme("A0-11", A=Neg(FALSUM))))
        if not isinstance(f, _CLASSICAL):
            return lits[f]
        if isinstance(f, Neg):
            inner = self._lemma(f.body, v, lits)
            return self.dni(inner) if _truth(f.body, v) else inner
        a, b = f.left, f.right
        ta, tb = _truth(a, v), _truth(b, v)
        la, lb = self._lemma(a, v, lits), self._lemma(b, v, lits)
        if isinstance(f, And):
            if ta and tb:
                return self.mp(lb, self.mp(la, self.scheme("A0-5", A=a, B=b)))
            h = self.assume(f)
            if not ta:
                return self.neg_intro(f, self.mp(h, self.scheme("A0-3", A=a, B=b)), la)
            return self.neg_intro(f, self.mp(h, self.scheme("A0-4", A=a, B=b)), lb)
        if isinstance(f, Or):
            if ta:
                return self.mp(la, self.scheme("A0-6", A=a, B=b))
            if tb:
                return self.mp(lb, self.scheme("A0-7", A=a, B=b))
            a_bot = self.discharge(a, self.falsum_from(self.assume(a), la))
            b_bot = self.discharge(b, self.falsum_from(self.assume(b), lb))
            case = self.scheme("A0-8", A=a, B=b, C=FALSUM)
            or_bot = self.mp(b_bot, self.mp(a_bot, case))
            h = self.assume(f)
            bot = self.mp(h, or_bot)
            return self.neg_intro(f, h, self.mp(bot, self.scheme("A0-11", A=Neg(f))))
        # implication
        if tb:
            return self.mp(lb, self.scheme("A0-1", A=b, B=a))
        if not ta:
            ha = self.assume(a)
            return self.discharge(a, self.efq(ha, la, b))
        h = self.assume(f)
        return self.neg_intro(f, self.mp(la, h), lb)

    def tautology(self, f: Formula) -> int:
        """Prove a propositional tautology (non-classical parts read as atoms)."""
        g = normalize(f)
        if not is_tautology(g):
            raise ProofBuildError(f"not a tautology: {f}")
        atoms = prop_atoms(g)
        em_cache: dict[Formula, int] = {}

        def em(a):
            if a not in em_cache:
                em_cache[a] = self.excluded_middle(a)
            return em_cache[a]

        def solve(prefix: tuple[bool, ...]) -> int:
            k = len(prefix)
            if k == len(atoms):
                v = dict(zip(atoms, prefix))
                lits = {a: self.assume(a if val else Neg(a)) for a, val in v.items()}
                return self._lemma(g, v, lits)
            a = atoms[k]
            pos, neg = solve(prefix + (True,)), solve(prefix + (False,))
            ka = normalize(a)
            if ka not in self.deps(pos) and ka not in self.deps(neg):
                return pos
            if normalize(Neg(a)) not in self.deps(neg):
                return neg
            if ka not in self.deps(pos):
                return pos
            d1, d0 = self.discharge(a, pos), self.discharge(Neg(a), neg)
            case = self.scheme("A0-8", A=a, B=Neg(a), C=g)
            return self.mp(em(a), self.mp(d0, self.mp(d1, case)))

        out = solve(())
        if self.deps(out):
            raise ProofBuildError("internal: tautology proof left open hypotheses")
        return out

    def follows(self, target: Formula, *premises: int) -> int:
        """``target`` from premise lines, when premises -> target is a tautology."""
        f = target
        for k in reversed(premises):
            f = Imp(self.formula(k), f)
        out = self.tautology(f)
        for k in premises:
            out = self.mp(k, out)
        return out

    # -- derived modal rules ----------------------------------------------------

    def t0(self, a: Formula) -> int:
        """``KA -> []A`` via A8, A1-T for [] and A7-T."""
        z3 = self.scheme("A8", A=a)
        z4 = self.scheme("A1-T", A=K(Box(a)))
        z5 = self.scheme("A7-T", A=Box(a))
        return self.chain(z3, z4, z5)

    def box_nec(self, k: int) -> int:
        """From ``A`` infer ``[]A`` (R2 then T0)."""
        return self.mp(self.nec(k), self.t0(self.formula(k)))

    def stit_nec(self, agent: str, k: int) -> int:
        """From ``A`` infer ``[j]A`` (via ``[]A`` and A2)."""
        b = self.box_nec(k)
        return self.mp(b, self.scheme("A2", A=self.formula(k), agent=agent))

    def mono(self, k: int, agent: str | None = None) -> int:
        """From ``A -> B`` infer ``MA -> MB`` for M = [] or [agent]."""
        f = self.formula(k)
        lifted = self.box_nec(k) if agent is None else self.stit_nec(agent, k)
        dist = self.scheme("A1-K", A=f.left, B=f.right, modality=agent)
        return self.mp(lifted, dist)

    def four(self, a: Formula, agent: str | None = None) -> int:
        """``MA -> MMA`` for an S5 modality M, derived from K, T and 5."""
        M = Box if agent is None else (lambda x: Cstit(agent, x))
        ma = M(a)
        dia_ma = Neg(M(Neg(ma)))
        # MA -> <>MA  (contraposed T), then 5: <>MA -> M<>MA
        t = self.scheme("A1-T", A=Neg(ma), modality=agent)
        to_dia = self.follows(Imp(ma, dia_ma), t)
        five = self.scheme("A1-5", A=ma, modality=agent)
        b_inst = self.hs(to_dia, five)  # MA -> M<>MA
        # <>MA -> MA: 5 for ~A, contraposed, with double negations removed
        nn = self.mono(self.scheme("A0-10", A=a), agent)  # M~~A -> MA
        dn = self.mono(self.tautology(Imp(a, Neg(Neg(a)))), agent)  # MA -> M~~A
        five_neg = self.scheme("A1-5", A=Neg(a), modality=agent)  # <>~A -> M<>~A
        # <>~A -> ~MA so M<>~A -> M~MA; contrapose to ~M~MA -> ~M<>~A
        step = self.follows(Imp(Neg(M(Neg(Neg(a)))), Neg(ma)), dn)
        lifted = self.mono(step, agent)
        back = self.follows(Imp(dia_ma, M(a)), five_neg, lifted, nn)
        return self.hs(b_inst, self.mono(back, agent))

    def box_lift(self, k: int, agent: str | None = None) -> int:
        """From ``MD -> P`` infer ``MD -> MP`` for an S5 modality M."""
        f = self.formula(k)
        md = f.left
        inner = md.body
        lifted = self.mono(k, agent)  # MMD -> MP
        return self.hs(self.four(inner, agent), lifted)

    # -- output -------------------------------------------------------------------

    def build(self, target: int, conclusion: Formula | None = None) -> Proof:
        """Proof of line ``target`` containing only the lines it depends on.

        ``conclusion`` may restate the last line in an equivalent surface
        form (same formula up to the <> and <j> abbreviations).
        """
        if self.deps(target):
            raise ProofBuildError("target line rests on open hypotheses")
        needed: set[int] = set()
        stack = [target]
        while stack:
            k = stack.pop()
            if k in needed:
                continue
            needed.add(k)
            why = self._lines[k].why
            if isinstance(why, MP):
                stack += [why.minor, why.major]
            elif isinstance(why, (Nec, S4)):
                stack.append(why.premise)
        order = sorted(needed)
        renum = {k: n for n, k in enumerate(order, start=1)}
        lines = []
        for k in order:
            e = self._lines[k]
            why = e.why
            if isinstance(why, MP):
                why = MP(renum[why.minor], renum[why.major])
            elif isinstance(why, Nec):
                why = Nec(renum[why.premise])
            elif isinstance(why, S4):
                why = S4(renum[why.premise], why.pairs)
            lines.append(Line(e.formula, why))
        if conclusion is not None:
            if normalize(conclusion) != self.key(target):
                raise ProofBuildError("conclusion differs from the target line")
            lines[-1] = Line(conclusion, lines[-1].why)
        return Proof(tuple(lines), self.agents)
