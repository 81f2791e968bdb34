"""Random finite jstit models that satisfy every constraint by construction."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum

from ..model import EVERYTHING, EvidenceFunction, FiniteJstitModel, reflexive_transitive_closure
from ..syntax import (
    Atom, Box, Cstit, Formula, Imp, Just, K, Neg, ProofConst, ProofVar, Term,
    is_term_const,
)

__all__ = ["EvidenceMode", "GenParams", "gen_model", "default_formula_pool"]


class EvidenceMode(str, Enum):
    EVERYTHING = "everything"
    SPARSE_CLOSED = "sparse-closed"


def _term(name: str) -> Term:
    return ProofConst(name) if is_term_const(name) else ProofVar(name)


def default_formula_pool(atoms, terms, agents) -> tuple[Formula, ...]:
    ps = [Atom(a) for a in atoms]
    pool: list[Formula] = list(ps)
    pool += [Neg(p) for p in ps]
    pool += [Imp(p, q) for p in ps for q in ps if p != q]
    pool += [K(ps[0]), Box(ps[0]), Cstit(agents[0], ps[0])]
    pool += [Just(terms[0], ps[0])]
    return tuple(pool)


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    max_depth: int = 3
    max_branching: int = 2
    agents: tuple[str, ...] = ("j", "i")
    term_pool: tuple[Term, ...] = (ProofVar("x"), ProofVar("y"), ProofConst("c"))
    atom_pool: tuple[str, ...] = ("p", "q", "r")
    evidence_mode: EvidenceMode = EvidenceMode.EVERYTHING
    formula_pool: tuple[Formula, ...] | None = None
    cs: tuple[Formula, ...] = ()
    extra_re_pairs: int = 0
    present_prob: float = 0.5

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.max_branching < 1:
            raise ValueError("max_branching must be at least 1")
        if not self.agents or not self.term_pool or not self.atom_pool:
            raise ValueError("agents, term_pool and atom_pool must be non-empty")
        object.__setattr__(self, "evidence_mode", EvidenceMode(self.evidence_mode))
        object.__setattr__(self, "term_pool", tuple(
            _term(t) if isinstance(t, str) else t for t in self.term_pool))

    def formulas(self) -> tuple[Formula, ...]:
        if self.formula_pool is not None:
            return self.formula_pool
        return default_formula_pool(self.atom_pool, self.term_pool, self.agents)


def _tree(rng: random.Random, p: GenParams):
    moments = ["r"]
    covers = []
    depth = {"r": 1}
    frontier = ["r"]
    while frontier:
        m = frontier.pop(0)
        if depth[m] >= p.max_depth:
            continue
        # the root always branches when it can, so models are rarely trivial
        lo = 1 if m == "r" and p.max_depth > 1 else 0
        n = rng.randint(lo, p.max_branching)
        for k in range(n):
            c = f"{m}.{k}"
            moments.append(c)
            covers.append((m, c))
            depth[c] = depth[m] + 1
            frontier.append(c)
    return moments, covers


def _choices(rng: random.Random, agents, classes):
    """Per-agent partitions coarsening ``classes`` that jointly satisfy
    independence: every combination of choices is realised by some class."""
    n = len(classes)
    counts = [1] * len(agents)
    order = list(range(len(agents)))
    rng.shuffle(order)
    for a in order:
        while rng.random() < 0.6:
            prod = 1
            for c in counts:
                prod *= c
            if prod // counts[a] * (counts[a] + 1) > n:
                break
            counts[a] += 1
    profiles = list(itertools.product(*(range(c) for c in counts)))
    assign = list(profiles) + [rng.choice(profiles) for _ in range(n - len(profiles))]
    rng.shuffle(assign)
    result = {}
    for a_idx, agent in enumerate(agents):
        blocks: dict[int, set] = {}
        for cls, prof in zip(classes, assign):
            blocks.setdefault(prof[a_idx], set()).update(cls)
        result[agent] = [frozenset(b) for _, b in sorted(blocks.items())]
    return result


def gen_model(p: GenParams) -> FiniteJstitModel:
    """Generate a model deterministically from ``p.seed``.

    Construction: a random rooted tree; choices coarsen the undivided
    classes so that independence holds; act sets grow along histories
    with new terms only ever given to a proper subset of the classes at a
    moment; R and Re are the reflexive-transitive closure of the order
    (Re optionally enlarged where transparency permits); evidence is
    either everything or a monotone table closed under the term
    operations.
    """
    rng = random.Random(p.seed)
    moments, covers = _tree(rng, p)
    skeleton = FiniteJstitModel(moments=moments, order=covers, agents=p.agents)

    choice = {}
    act: dict[tuple[str, str], frozenset] = {}
    for m in moments:
        succ = skeleton.successors(m)
        classes = [frozenset(skeleton.H[c]) for c in succ] or [frozenset(skeleton.H[m])]
        for agent, blocks in _choices(rng, p.agents, classes).items():
            if len(blocks) > 1:
                choice[(m, agent)] = blocks
        inherited = {}
        parents = [x for x in skeleton.below[m] if x != m and m in skeleton.successors(x)]
        for h in skeleton.H[m]:
            inherited[h] = act.get((parents[0], h), frozenset()) if parents else frozenset()
        if len(classes) > 1:
            fresh = {}
            for t in p.term_pool:
                if rng.random() >= p.present_prob:
                    continue
                chosen = [c for c in classes if rng.random() < 0.5]
                if len(chosen) == len(classes):
                    chosen.pop(rng.randrange(len(chosen)))
                for c in chosen:
                    fresh.setdefault(c, set()).add(t)
            for c in classes:
                for h in c:
                    act[(m, h)] = inherited[h] | frozenset(fresh.get(c, ()))
        else:
            for h in skeleton.H[m]:
                act[(m, h)] = inherited[h]

    order = skeleton.order
    r = order
    r_e = order
    act_m = {m: frozenset.intersection(*(act[(m, h)] for h in skeleton.H[m])) for m in moments}
    for _ in range(p.extra_re_pairs):
        a, b = rng.choice(moments), rng.choice(moments)
        candidate = reflexive_transitive_closure(moments, r_e | {(a, b)})
        if all(act_m[x] <= act_m[y] for x, y in candidate):
            r_e = candidate

    if p.evidence_mode is EvidenceMode.EVERYTHING:
        evidence = EvidenceFunction({(None, None): EVERYTHING})
    else:
        pool = p.formulas()
        seeds = {}
        base_terms = [t for t in p.term_pool]
        for m in moments:
            for t in base_terms:
                picked = frozenset(f for f in pool if rng.random() < 0.3)
                if picked:
                    seeds[(m, t)] = picked
        cs_by_const: dict[Term, set] = {}
        for f in p.cs:
            cs_by_const.setdefault(f.term, set()).add(f.body)
        entries = {}
        preds = {m: [a for a in moments if (a, m) in r_e] for m in moments}
        for m in moments:
            for t in set(base_terms) | set(cs_by_const):
                value = set(cs_by_const.get(t, ()))
                for a in preds[m]:
                    value |= seeds.get((a, t), frozenset())
                if value:
                    entries[(m, t)] = frozenset(value)
        evidence = EvidenceFunction(entries, closure=True)

    pairs = skeleton.pairs()
    valuation = {a: {pr for pr in pairs if rng.random() < 0.5} for a in p.atom_pool}
    return FiniteJstitModel(moments=moments, order=covers, agents=p.agents, choice=choice,
                            act=act, r=r, r_e=r_e, evidence=evidence, valuation=valuation)
