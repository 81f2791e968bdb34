"""Scripted single-constraint mutations of generated models.

Each mutation takes a valid model and either returns a variant that
should break exactly one named constraint or ``None`` when the model
offers no suitable site (too shallow, one agent, sparse evidence, ...).
``find_witness`` walks generator seeds until a mutation applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ..model import (
    CONSTRAINTS, ConstraintReport, FiniteJstitModel, reflexive_transitive_closure,
    validate,
)
from ..syntax import Atom, Check, ProofVar
from .generate import EvidenceMode, GenParams, gen_model

__all__ = ["MUTATIONS", "MutationResult", "find_witness", "mutation_suite"]

Mutation = Callable[[FiniteJstitModel], "FiniteJstitModel | None"]

_FRESH = ProofVar("z9")


def _everything(model: FiniteJstitModel) -> bool:
    return model.evidence.is_everything()


def _rebuild_order(model, moments, order, **kw) -> FiniteJstitModel:
    closure = reflexive_transitive_closure(moments, order)
    return model.replace(moments=moments, order=order,
                         r=reflexive_transitive_closure(moments, set(model.r) | closure),
                         r_e=reflexive_transitive_closure(moments, set(model.r_e) | closure), **kw)


def historical_connection(model):
    """Add a moment unrelated to every other one."""
    moments = model.moments + ("iso",)
    return _rebuild_order(model, moments, set(model.order))


def no_backward_branching(model):
    """Give a depth-2 moment a second, incomparable predecessor."""
    root = model.roots()[0]
    for m in model.moments:
        lower = [x for x in model.below[m] if x != m]
        if len(lower) >= 2:
            moments = model.moments + ("w",)
            return _rebuild_order(model, moments, set(model.order) | {(root, "w"), ("w", m)})
    return None


def no_choice_between_undivided(model):
    """Split an agent's block inside an undivided class; other agents
    become trivial at that moment so independence survives."""
    for m in model.moments:
        for cls in model.undivided_classes(m):
            if len(cls) < 2:
                continue
            j = model.agents[0]
            h = min(cls)
            blocks = [b for b in model.choice[(m, j)] if h not in b]
            rest = model.block(m, j, h) - {h}
            choice = {k: v for k, v in model.choice.items() if len(v) > 1}
            choice[(m, j)] = blocks + [frozenset({h}), rest]
            for other in model.agents[1:]:
                choice.pop((m, other), None)
            return model.replace(choice=choice)
    return None


def independence_of_agents(model):
    """Every agent chooses between the same undivided classes."""
    if len(model.agents) < 2:
        return None
    for m in model.moments:
        classes = model.undivided_classes(m)
        if len(classes) >= 2:
            choice = {k: v for k, v in model.choice.items() if len(v) > 1}
            for j in model.agents:
                choice[(m, j)] = classes
            return model.replace(choice=choice)
    return None


def monotonicity_of_evidence(model):
    """A fresh term evidences p at one moment but nothing at an Re-successor."""
    for a, b in sorted(model.r_e):
        if a != b:
            ev = model.evidence.replace({(a, _FRESH): frozenset({Atom("p")}), (b, _FRESH): frozenset()})
            return model.replace(evidence=ev)
    return None


def evidence_closure(model):
    """z9 evidences p everywhere but !z9 evidences nothing (Everything evidence only)."""
    if not _everything(model):
        return None
    ev = model.evidence.replace({(None, _FRESH): frozenset({Atom("p")}),
                                 (None, Check(_FRESH)): frozenset()})
    return model.replace(evidence=ev)


def expansion_of_presented_proofs(model):
    """Withdraw a presented-but-unsettled term at a child moment.

    The term must not be settled anywhere that sees the child through Re,
    or transparency would fail as well.
    """
    for m in model.moments:
        for c in model.successors(m):
            for h in model.H[c]:
                for t in sorted(model.act_at(m, h) - model.act_m[m], key=str):
                    if any(t in model.act_m[y] for y, x in model.r_e if x == c and y != c):
                        continue
                    act = dict(model.act)
                    for g in model.H[c]:
                        act[(c, g)] = act.get((c, g), frozenset()) - {t}
                    return model.replace(act=act)
    return None


def no_new_proofs_guaranteed(model):
    """Settle a never-presented term from the root upward."""
    root = model.roots()[0]
    act = dict(model.act)
    for m, h in model.pairs():
        if model.leq(root, m):
            act[(m, h)] = act.get((m, h), frozenset()) | {ProofVar("z7")}
    return model.replace(act=act)


def presenting_divides(model):
    """Give one of two undivided histories a new term (and keep it there
    along the history).  Needs Re to be the order, since moments that come
    to settle the term must not see moments that lack it."""
    if model.r_e != model.order:
        return None
    for m in model.moments:
        for cls in model.undivided_classes(m):
            if len(cls) < 2:
                continue
            h = min(cls)
            act = dict(model.act)
            for d in model.below[h]:
                if model.leq(m, d):
                    act[(d, h)] = act.get((d, h), frozenset()) | {ProofVar("z8")}
            return model.replace(act=act)
    return None


def future_always_matters(model):
    """Drop an immediate-successor pair from R."""
    for m in model.moments:
        for c in model.successors(m):
            if not any((m, x) in model.r and (x, c) in model.r for x in model.moments
                       if x not in (m, c)):
                return model.replace(r=model.r - {(m, c)})
    return None


def epistemic_transparency(model):
    """Let a moment with a settled term see one without it (Everything evidence only)."""
    if not _everything(model):
        return None
    for a in model.moments:
        for b in model.moments:
            if a != b and not model.act_m[a] <= model.act_m[b]:
                r_e = reflexive_transitive_closure(model.moments, set(model.r_e) | {(a, b)})
                return model.replace(r_e=r_e)
    return None


MUTATIONS: dict[str, Mutation] = {
    "historical-connection": historical_connection,
    "no-backward-branching": no_backward_branching,
    "no-choice-between-undivided-histories": no_choice_between_undivided,
    "independence-of-agents": independence_of_agents,
    "monotonicity-of-evidence": monotonicity_of_evidence,
    "evidence-closure": evidence_closure,
    "expansion-of-presented-proofs": expansion_of_presented_proofs,
    "no-new-proofs-guaranteed": no_new_proofs_guaranteed,
    "presenting-a-new-proof-makes-histories-divide": presenting_divides,
    "future-always-matters": future_always_matters,
    "presented-proofs-are-epistemically-transparent": epistemic_transparency,
}
assert tuple(MUTATIONS) == CONSTRAINTS


@dataclass
class MutationResult:
    constraint: str
    seed: int | None
    reported: set
    report: ConstraintReport | None

    @property
    def ok(self) -> bool:
        return self.reported == {self.constraint}

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        got = ", ".join(sorted(self.reported)) or "nothing"
        return f"{status} {self.constraint}: seed={self.seed} reported {got}"


def _params(seed: int) -> GenParams:
    mode = EvidenceMode.EVERYTHING if seed % 2 == 0 else EvidenceMode.SPARSE_CLOSED
    return GenParams(seed=seed, evidence_mode=mode, max_depth=3)


def find_witness(constraint: str, seeds: Iterable[int] = range(200)) -> MutationResult:
    """First generated model on which the mutation for ``constraint`` applies."""
    mutate = MUTATIONS[constraint]
    for seed in seeds:
        base = gen_model(_params(seed))
        mutated = mutate(base)
        if mutated is None:
            continue
        report = validate(mutated)
        return MutationResult(constraint, seed, report.constraints(), report)
    return MutationResult(constraint, None, set(), None)


def mutation_suite(seeds: Iterable[int] = range(200)) -> list[MutationResult]:
    seeds = list(seeds)
    return [find_witness(name, seeds) for name in CONSTRAINTS]
