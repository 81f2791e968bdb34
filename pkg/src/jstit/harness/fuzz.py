"""Soundness fuzzing: random axiom instances, CS members, corpus theorems
and rule applications must be valid on every generated CS-normal model."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from ..model import FiniteJstitModel, dump_model, is_cs_normal
from ..proofkit.axioms import SCHEME_ORDER, proven_disjunction, s4_conclusion
from ..proofkit.proof import ConstantSpecification
from ..semantics import Evaluator
from ..syntax import And, Atom, Formula, Imp, K, ProofConst, ProofVar, Term
from .formulas import random_formula, random_instance
from .generate import EvidenceMode, GenParams, gen_model

__all__ = ["Finding", "FuzzReport", "soundness_fuzz", "FUZZ_AGENTS", "FUZZ_TERMS", "FUZZ_ATOMS"]

FUZZ_AGENTS = ("i", "j")
FUZZ_TERMS: tuple[Term, ...] = (ProofVar("x"), ProofVar("y"), ProofConst("c"))
FUZZ_ATOMS = ("p", "q", "r")


@dataclass(frozen=True)
class Finding:
    seed: int
    source: str  # scheme id, "cs", "corpus:NAME", "R1", "R2" or "S4"
    formula: Formula
    moment: str
    history: str
    model_text: str = ""

    def line(self) -> str:
        return (f"COUNTEREXAMPLE seed={self.seed} source={self.source} "
                f"pair=({self.moment},{self.history}) formula={self.formula}")


@dataclass
class FuzzReport:
    n_models: int
    n_instances: int
    seed: int
    cs_size: int = 0
    checked: int = 0
    per_source: dict = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def lines(self) -> list[str]:
        out = [f"soundness fuzz: models={self.n_models} instances={self.n_instances} "
               f"seed={self.seed} cs={self.cs_size}",
               f"formulas checked: {self.checked}"]
        out += [f"  {src}: {n}" for src, n in self.per_source.items()]
        out.append(f"counterexamples: {len(self.findings)}")
        out += [f.line() for f in self.findings]
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _model_params(seed: int, pool: Sequence[Formula], cs: ConstantSpecification) -> GenParams:
    mode = EvidenceMode.EVERYTHING if seed % 2 == 0 else EvidenceMode.SPARSE_CLOSED
    return GenParams(seed=seed, max_depth=1 + seed % 3, agents=FUZZ_AGENTS, term_pool=FUZZ_TERMS,
                     atom_pool=FUZZ_ATOMS, evidence_mode=mode, formula_pool=tuple(pool),
                     cs=tuple(cs), extra_re_pairs=seed % 3)


def soundness_fuzz(n_models: int, n_instances: int, seed: int = 0,
                   cs: ConstantSpecification | None = None, *,
                   schemes: Sequence[str] = SCHEME_ORDER, formula_depth: int = 2,
                   pool_size: int = 10, include_corpus: bool = True,
                   emit_models: bool = False) -> FuzzReport:
    """Check ``n_instances`` random instances of every scheme on each of
    ``n_models`` generated models, plus CS members, corpus conclusions and
    one-step R1/R2/S4 consequences of verified validities.

    Everything is drawn from ``random.Random(seed)``, so reports are
    reproducible byte for byte.
    """
    cs = cs if cs is not None else ConstantSpecification((), FUZZ_AGENTS)
    rng = random.Random(seed)
    report = FuzzReport(n_models, n_instances, seed, len(cs))
    corpus_items = []
    if include_corpus:
        from ..proofkit.corpus import corpus
        corpus_items = [(f"corpus:{name}", e.formula) for name, e in corpus().items()]

    for k in range(n_models):
        model_seed = rng.randrange(2**31)
        pool = [Atom(a) for a in FUZZ_ATOMS]
        pool += [random_formula(rng, formula_depth, FUZZ_ATOMS, FUZZ_TERMS, FUZZ_AGENTS)
                 for _ in range(pool_size)]
        model = gen_model(_model_params(model_seed, pool, cs))
        if not is_cs_normal(model, cs):
            raise AssertionError(f"generator produced a model that is not CS-normal (seed {model_seed})")
        ev = Evaluator(model)
        tasks: list[tuple[str, Formula]] = []
        for scheme in schemes:
            for _ in range(n_instances):
                tasks.append((scheme, random_instance(rng, scheme, FUZZ_AGENTS, pool, FUZZ_TERMS)))
        tasks += [("cs", f) for f in cs]
        tasks += corpus_items
        valid: list[Formula] = []
        for source, f in tasks:
            if _check(report, ev, model, model_seed, source, f, emit_models):
                valid.append(f)
        for source, f in _rule_applications(rng, valid, pool):
            _check(report, ev, model, model_seed, source, f, emit_models)
    return report


def _check(report: FuzzReport, ev: Evaluator, model: FiniteJstitModel, seed: int,
           source: str, f: Formula, emit: bool) -> bool:
    report.checked += 1
    key = source if not source.startswith("corpus:") else "corpus"
    report.per_source[key] = report.per_source.get(key, 0) + 1
    bad = ev.counterexample(f)
    if bad is None:
        return True
    report.findings.append(Finding(seed, source, f, bad[0], bad[1],
                                   dump_model(model) if emit else ""))
    return False


def _rule_applications(rng: random.Random, valid: list[Formula], pool: Sequence[Formula]):
    """Conclusions of R2, R1 (through an A0-1 instance) and S4 whose premises
    are validities of the current model."""
    if not valid:
        return
    for _ in range(3):
        f = rng.choice(valid)
        yield "R2", K(f)
        g = rng.choice(pool)
        yield "R1", Imp(g, f)
    # S4 from K(D & G) -> D, itself valid by the T law for K
    for _ in range(2):
        pairs = [(rng.choice(FUZZ_TERMS), rng.choice(pool)) for _ in range(rng.randint(1, 2))]
        a = And(proven_disjunction(pairs), rng.choice(pool))
        yield "S4", Imp(K(a), s4_conclusion(pairs, FUZZ_AGENTS))
