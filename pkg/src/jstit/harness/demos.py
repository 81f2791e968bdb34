"""The two executable demonstrations: the dense-time countermodel (as a
finite quotient) and the failure of the finite model property."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import FiniteJstitModel, load_model, validate
from ..semantics import Evaluator
from ..syntax import Formula, parse_formula
from .generate import EvidenceMode, GenParams, gen_model

__all__ = [
    "PROP1_QUOTIENT", "PROP1_FORMULA", "PROP1_ANTECEDENT", "PROP1_WITNESS",
    "FMP_FORMULA", "HISTORY_NAMES", "prop1_quotient", "Prop1Report", "prop1_demo",
    "FmpReport", "fmp_demo",
]

# 'mid' stands for every real moment strictly between 0 and 1: they all have
# the single history h2, the same act set {x, y} and identical futures.
PROP1_QUOTIENT = """\
agents: j
moments: -1 0 mid a
order: -1<0 0<mid 0<a
choice: 0 j : {a} {mid}
act: 0/mid = x
act: mid/mid = x y
evidence: * * = ALL
R: +order
Re: =R
val: p @ ALL
val: q @ ALL
"""

HISTORY_NAMES = {"a": "h1", "mid": "h2"}

PROP1_FORMULA = parse_formula(
    "K(~Proven(x,p) | Proven(y,q)) -> ~Prove(j,x,p) | (y:q -> Proven(y,q) | Prove(j,y,q))", ["j"])
PROP1_ANTECEDENT = parse_formula("K(~Proven(x,p) | Proven(y,q))", ["j"])
PROP1_WITNESS = parse_formula("Prove(j,x,p) & y:q & ~Prove(j,y,q) & ~Proven(y,q)", ["j"])
FMP_FORMULA = parse_formula("K(<>p & <>~p)")


def prop1_quotient() -> tuple[FiniteJstitModel, Formula]:
    return load_model(PROP1_QUOTIENT), PROP1_FORMULA


@dataclass
class Prop1Report:
    formula_false: bool
    antecedent_true: bool
    witness_true: bool
    violations: list[str]
    lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.formula_false and self.antecedent_true and self.witness_true
                and self.violations == ["no-new-proofs-guaranteed @ mid"])


def prop1_demo() -> Prop1Report:
    model, A = prop1_quotient()
    ev = Evaluator(model, waive_validation=True)
    at = ("0", "mid")
    where = f"(0,{HISTORY_NAMES['mid']})"
    a_val = ev(*at, A)
    ante = ev(*at, PROP1_ANTECEDENT)
    wit = ev(*at, PROP1_WITNESS)
    report = validate(model)
    viol = [f"{v.constraint} @ {' '.join(v.moments)}" for v in report.violations]
    lines = [f"A := {A}"]
    lines.append(f"A {'falsified' if not a_val else 'holds'} at {where}")
    lines.append(f"antecedent {PROP1_ANTECEDENT} {'true' if ante else 'false'} at {where}")
    lines.append(f"witness {PROP1_WITNESS} {'true' if wit else 'false'} at {where}")
    lines += [f"constraint violated: {v}" for v in viol]
    return Prop1Report(not a_val, ante, wit, viol, lines)


@dataclass
class FmpReport:
    models: int = 0
    pairs: int = 0
    fmp_satisfied: list = field(default_factory=list)
    prop1_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.fmp_satisfied and not self.prop1_failures

    def lines(self) -> list[str]:
        out = [f"models: {self.models}, moment/history pairs: {self.pairs}",
               f"{FMP_FORMULA} satisfied at {len(self.fmp_satisfied)} pairs",
               f"A falsified in {len(self.prop1_failures)} models"]
        for seed, m, h in self.fmp_satisfied:
            out.append(f"  seed={seed} {FMP_FORMULA} true at ({m},{h})")
        for seed, m, h in self.prop1_failures:
            out.append(f"  seed={seed} A false at ({m},{h})")
        return out


def fmp_models(n_models: int, seed: int):
    for k in range(n_models):
        s = seed + k
        mode = EvidenceMode.EVERYTHING if s % 2 == 0 else EvidenceMode.SPARSE_CLOSED
        yield s, gen_model(GenParams(seed=s, evidence_mode=mode,
                                     extra_re_pairs=s % 3, max_depth=1 + s % 4))


def fmp_demo(n_models: int = 100, seed: int = 0) -> FmpReport:
    """Evaluate K(<>p & <>~p) and the discrete-time formula everywhere."""
    rep = FmpReport()
    for s, model in fmp_models(n_models, seed):
        ev = Evaluator(model)
        rep.models += 1
        for m, h in model.pairs():
            rep.pairs += 1
            if ev(m, h, FMP_FORMULA):
                rep.fmp_satisfied.append((s, m, h))
        bad = ev.counterexample(PROP1_FORMULA)
        if bad is not None:
            rep.prop1_failures.append((s, *bad))
    return rep
