"""Replace applications of the S4 rule by A_S4 axiom instances."""

from __future__ import annotations

from ..syntax import Formula, Imp, K
from .axioms import as4_instance
from .proof import MP, Axiom, ConstantSpecification, Line, Mode, Nec, Proof, S4, check_proof

__all__ = ["eliminate_s4", "LINES_PER_S4_STEP", "S4EliminationError"]

# one S4 line becomes this many Pi' lines
LINES_PER_S4_STEP = 15


class S4EliminationError(ValueError):
    pass


class _Emitter:
    def __init__(self):
        self.lines: list[Line] = []

    def emit(self, f: Formula, why) -> int:
        self.lines.append(Line(f, why))
        return len(self.lines)

    def f(self, n: int) -> Formula:
        return self.lines[n - 1].formula

    def hs(self, ab: int, bc: int) -> int:
        """``A -> C`` from ``A -> B`` and ``B -> C`` in five A0/MP lines."""
        a, b = self.f(ab).left, self.f(ab).right
        c = self.f(bc).right
        s1 = self.emit(Imp(Imp(b, c), Imp(a, Imp(b, c))), Axiom("A0-1"))
        s2 = self.emit(Imp(a, Imp(b, c)), MP(bc, s1))
        s3 = self.emit(Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c))), Axiom("A0-2"))
        s4 = self.emit(Imp(Imp(a, b), Imp(a, c)), MP(s2, s3))
        return self.emit(Imp(a, c), MP(ab, s4))


def eliminate_s4(proof: Proof, cs: ConstantSpecification | None = None) -> Proof:
    """An S4-free proof of the same conclusion, valid in Pi'(CS).

    Each step ``KD -> B`` / ``KD -> C`` is rebuilt as: K(KD -> B) by R2;
    KKD -> KB by A7-K and MP; KD -> KKD by A7-4 and syllogism; KB -> C as
    an A_S4 instance; KD -> C by syllogism.  Other lines are copied with
    their indices renumbered.  Proofs without S4 steps come back unchanged.
    """
    verdict = check_proof(proof, cs, Mode.PI)
    if not verdict:
        raise S4EliminationError(f"input proof is not accepted in Pi: {verdict}")
    if proof.s4_steps() == 0:
        return proof
    out = _Emitter()
    where: dict[int, int] = {}
    for n, line in enumerate(proof.lines, start=1):
        why = line.why
        if isinstance(why, MP):
            where[n] = out.emit(line.formula, MP(where[why.minor], where[why.major]))
        elif isinstance(why, Nec):
            where[n] = out.emit(line.formula, Nec(where[why.premise]))
        elif isinstance(why, S4):
            prem = where[why.premise]
            premise = out.f(prem)  # KD -> B
            kd, b = premise.left, premise.right
            kb = K(b)
            pr2 = out.emit(K(premise), Nec(prem))
            dist = out.emit(Imp(K(premise), Imp(K(kd), kb)), Axiom("A7-K"))
            kkd_kb = out.emit(Imp(K(kd), kb), MP(pr2, dist))
            four = out.emit(Imp(kd, K(kd)), Axiom("A7-4"))
            pr3 = out.hs(four, kkd_kb)
            as4 = as4_instance(why.pairs, proof.agents)
            pr4 = out.emit(Imp(kb, as4.right), Axiom("AS4"))
            pr5 = out.hs(pr3, pr4)
            # keep the original surface form of the conclusion
            out.lines[pr5 - 1] = Line(line.formula, out.lines[pr5 - 1].why)
            where[n] = pr5
        else:
            where[n] = out.emit(line.formula, why)
    return Proof(tuple(out.lines), proof.agents)
