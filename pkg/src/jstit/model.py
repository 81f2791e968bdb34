"""Finite jstit models: representation, derived structure and validation.

A history of a finite tree is identified by its leaf (its maximal moment);
every history-indexed component (choice blocks, act, valuation) is keyed
by leaves.
"""

from __future__ import annotations

import itertools
import re
import shlex
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .syntax import (
    App, Check, Formula, Imp, Just, ParseError, ProofConst, ProofVar, Sum, Term,
    parse_formula, parse_term, print_formula, print_term, subformulas, subterms,
)

__all__ = [
    "ModelError", "Everything", "EVERYTHING", "EvidenceFunction", "History",
    "FiniteJstitModel", "Violation", "ConstraintReport", "CONSTRAINTS",
    "load_model", "dump_model", "histories", "histories_through",
    "act_aggregates", "validate", "is_cs_normal", "reflexive_transitive_closure",
]

CONSTRAINTS = (
    "historical-connection",
    "no-backward-branching",
    "no-choice-between-undivided-histories",
    "independence-of-agents",
    "monotonicity-of-evidence",
    "evidence-closure",
    "expansion-of-presented-proofs",
    "no-new-proofs-guaranteed",
    "presenting-a-new-proof-makes-histories-divide",
    "future-always-matters",
    "presented-proofs-are-epistemically-transparent",
)

# structural laws that are not among the numbered constraints
STRUCTURAL = (
    "order-partial-order",
    "r-preorder",
    "re-preorder",
    "r-included-in-re",
)


class ModelError(ValueError):
    pass


class Everything:
    """Evidence value standing for the whole formula language."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EVERYTHING"

    def __contains__(self, item) -> bool:
        return True


EVERYTHING = Everything()


def _ev_subset(a, b) -> bool:
    if b is EVERYTHING:
        return True
    if a is EVERYTHING:
        return False
    return a <= b


class EvidenceFunction:
    """Evidence assignment given by a finite table.

    ``entries`` maps ``(moment, term)`` to ``EVERYTHING`` or a frozenset of
    formulas; either key component may be ``None`` as a wildcard.  Lookup
    picks the most specific entry, trying ``(m, t)``, ``(m, *)``,
    ``(*, t)`` and ``(*, *)`` in turn; no entry means the empty set.

    With ``closure=True`` each lookup is additionally closed under the
    application, sum and proof-checker conditions, computed recursively
    from the subterms.  Such an evidence function satisfies the closure
    conditions for every term, not only for those in the table.
    """

    def __init__(self, entries: Mapping | None = None, closure: bool = False):
        self.entries: dict = dict(entries or {})
        self.closure = closure
        self._cache: dict = {}

    def __eq__(self, other) -> bool:
        return (isinstance(other, EvidenceFunction)
                and self.entries == other.entries and self.closure == other.closure)

    def __hash__(self):
        return hash((frozenset(self.entries.items()), self.closure))

    def replace(self, updates: Mapping | None = None, closure: bool | None = None) -> "EvidenceFunction":
        entries = dict(self.entries)
        entries.update(updates or {})
        return EvidenceFunction(entries, self.closure if closure is None else closure)

    def explicit(self, moment: str, term: Term):
        for key in ((moment, term), (moment, None), (None, term), (None, None)):
            if key in self.entries:
                return self.entries[key]
        return frozenset()

    def __call__(self, moment: str, term: Term):
        key = (moment, term)
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = self.explicit(moment, term)
        if self.closure and value is not EVERYTHING:
            value = _union(value, self._derived(moment, term))
        self._cache[key] = value
        return value

    def _derived(self, moment: str, term: Term):
        if isinstance(term, Sum):
            return _union(self(moment, term.left), self(moment, term.right))
        if isinstance(term, App):
            left, right = self(moment, term.left), self(moment, term.right)
            if not right:
                return frozenset()
            if left is EVERYTHING:
                return EVERYTHING
            return frozenset(f.right for f in left if isinstance(f, Imp) and f.left in right)
        if isinstance(term, Check):
            inner = self(moment, term.inner)
            if inner is EVERYTHING:
                raise ModelError("closed evidence cannot check an Everything-valued term")
            return frozenset(Just(term.inner, f) for f in inner)
        return frozenset()

    def is_everything(self) -> bool:
        """True when every lookup is ``EVERYTHING``."""
        return (self.entries.get((None, None)) is EVERYTHING
                and all(v is EVERYTHING for v in self.entries.values()))

    def key_terms(self) -> set[Term]:
        return {t for (_, t) in self.entries if t is not None}

    def formulas(self) -> set[Formula]:
        out: set[Formula] = set()
        for v in self.entries.values():
            if v is not EVERYTHING:
                out.update(v)
        return out


def _union(a, b):
    if a is EVERYTHING or b is EVERYTHING:
        return EVERYTHING
    return a | b


def reflexive_transitive_closure(moments: Iterable[str], pairs: Iterable[tuple[str, str]]) -> frozenset:
    moments = list(moments)
    succ: dict[str, set[str]] = {m: {m} for m in moments}
    for a, b in pairs:
        succ.setdefault(a, {a}).add(b)
        succ.setdefault(b, {b})
    changed = True
    while changed:
        changed = False
        for a in succ:
            new = set().union(*(succ[b] for b in succ[a]))
            if not new <= succ[a]:
                succ[a] |= new
                changed = True
    return frozenset((a, b) for a, bs in succ.items() for b in bs)


@dataclass(frozen=True)
class History:
    leaf: str
    moments: frozenset

    def __contains__(self, moment) -> bool:
        return moment in self.moments


class FiniteJstitModel:
    """A finite jstit model.

    ``order`` is closed reflexively and transitively on construction.  The
    relations ``r`` and ``r_e`` are taken as given (the file loader closes
    them); the validator reports any failure of the preorder laws.
    Instances are treated as immutable; use :meth:`replace` to derive
    variants.
    """

    def __init__(self, *, moments: Sequence[str], order: Iterable[tuple[str, str]],
                 agents: Sequence[str], choice: Mapping | None = None,
                 act: Mapping | None = None, r: Iterable[tuple[str, str]] | None = None,
                 r_e: Iterable[tuple[str, str]] | None = None,
                 evidence: EvidenceFunction | None = None,
                 valuation: Mapping[str, Iterable[tuple[str, str]]] | None = None):
        self.moments = tuple(moments)
        if len(set(self.moments)) != len(self.moments):
            raise ModelError("duplicate moment identifier")
        if not self.moments:
            raise ModelError("a model needs at least one moment")
        self.agents = tuple(agents)
        if not self.agents or len(set(self.agents)) != len(self.agents):
            raise ModelError("agent set must be non-empty and without duplicates")
        known = set(self.moments)
        order = list(order)
        for a, b in order:
            for x in (a, b):
                if x not in known:
                    raise ModelError(f"dangling identifier {x!r} in order")
        self.order = reflexive_transitive_closure(self.moments, order)
        self.r = reflexive_transitive_closure(self.moments, ()) | self.order if r is None else frozenset(r)
        self.r_e = self.r if r_e is None else frozenset(r_e)
        for rel, name in ((self.r, "R"), (self.r_e, "Re")):
            for a, b in rel:
                if a not in known or b not in known:
                    raise ModelError(f"dangling identifier in {name}: {a!r}>{b!r}")
        self.evidence = evidence if evidence is not None else EvidenceFunction()

        self._index = {m: i for i, m in enumerate(self.moments)}
        self.above: dict[str, tuple[str, ...]] = {m: () for m in self.moments}
        self.below: dict[str, tuple[str, ...]] = {m: () for m in self.moments}
        up: dict[str, list[str]] = {m: [] for m in self.moments}
        down: dict[str, list[str]] = {m: [] for m in self.moments}
        for a, b in sorted(self.order, key=lambda p: (self._index[p[0]], self._index[p[1]])):
            up[a].append(b)
            down[b].append(a)
        self.above = {m: tuple(v) for m, v in up.items()}
        self.below = {m: tuple(v) for m, v in down.items()}
        self.leaves = tuple(m for m in self.moments if self.above[m] == (m,))
        leaf_set = set(self.leaves)
        self.H: dict[str, tuple[str, ...]] = {
            m: tuple(x for x in self.above[m] if x in leaf_set) for m in self.moments}
        self._hsets = {m: frozenset(v) for m, v in self.H.items()}

        # choice: fill defaults, check partitions
        self.choice: dict[tuple[str, str], tuple[frozenset, ...]] = {}
        given = dict(choice or {})
        for (m, j) in given:
            if m not in known:
                raise ModelError(f"dangling identifier {m!r} in choice")
            if j not in self.agents:
                raise ModelError(f"unknown agent {j!r} in choice")
        for m in self.moments:
            for j in self.agents:
                blocks = given.get((m, j))
                if not blocks:
                    self.choice[(m, j)] = (self._hsets[m],)
                    continue
                blocks = tuple(frozenset(b) for b in blocks)
                seen: set[str] = set()
                for b in blocks:
                    if not b or not b <= self._hsets[m]:
                        raise ModelError(
                            f"choice block {sorted(b)} at {m!r} for {j!r} is not a "
                            f"non-empty set of leaves above the moment")
                    if seen & b:
                        raise ModelError(f"choice blocks at {m!r} for {j!r} overlap")
                    seen |= b
                if seen != self._hsets[m]:
                    raise ModelError(f"choice blocks at {m!r} for {j!r} do not cover H_m")
                self.choice[(m, j)] = tuple(sorted(
                    blocks, key=lambda b: min(self._index[x] for x in b)))
        self._block = {}
        for (m, j), blocks in self.choice.items():
            for b in blocks:
                for h in b:
                    self._block[(m, j, h)] = b

        self.act: dict[tuple[str, str], frozenset] = {}
        for (m, h), terms in dict(act or {}).items():
            if m not in known or h not in known:
                raise ModelError(f"dangling identifier in act key {m}/{h}")
            if h not in self._hsets[m]:
                raise ModelError(f"act keyed on {m}/{h}, but {h!r} is not a leaf above {m!r}")
            if terms:
                self.act[(m, h)] = frozenset(terms)

        self.valuation: dict[str, frozenset] = {}
        for p, pairs in dict(valuation or {}).items():
            pairs = frozenset(pairs)
            for m, h in pairs:
                if m not in known or h not in self._hsets.get(m, ()):
                    raise ModelError(f"valuation of {p!r} mentions {m}/{h}, not a moment/history pair")
            self.valuation[p] = pairs

        self.act_m: dict[str, frozenset] = {}
        for m in self.moments:
            sets = [self.act_at(m, h) for h in self.H[m]]
            self.act_m[m] = frozenset.intersection(*sets) if sets else frozenset()
        self.r_succ = {m: [] for m in self.moments}
        for a, b in sorted(self.r, key=lambda p: (self._index[p[0]], self._index[p[1]])):
            self.r_succ[a].append(b)
        self.re_succ = {m: [] for m in self.moments}
        for a, b in sorted(self.r_e, key=lambda p: (self._index[p[0]], self._index[p[1]])):
            self.re_succ[a].append(b)

    # -- queries -----------------------------------------------------------

    def __repr__(self) -> str:
        return (f"FiniteJstitModel({len(self.moments)} moments, "
                f"{len(self.leaves)} histories, agents={list(self.agents)})")

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self.order

    def check_moment(self, m: str) -> None:
        if m not in self._index:
            raise ModelError(f"unknown moment {m!r}")

    def check_pair(self, m: str, h: str) -> None:
        self.check_moment(m)
        if h not in self._hsets[m]:
            raise ModelError(f"history {h!r} does not pass through moment {m!r}")

    def history(self, leaf: str) -> History:
        if leaf not in self.leaves:
            raise ModelError(f"{leaf!r} is not a leaf")
        return History(leaf, frozenset(self.below[leaf]))

    def act_at(self, m: str, h: str) -> frozenset:
        return self.act.get((m, h), frozenset())

    def block(self, m: str, j: str, h: str) -> frozenset:
        return self._block[(m, j, h)]

    def act_mhj(self, m: str, h: str, j: str) -> frozenset:
        return frozenset.intersection(*(self.act_at(m, g) for g in self.block(m, j, h)))

    def pairs(self) -> list[tuple[str, str]]:
        return [(m, h) for m in self.moments for h in self.H[m]]

    def undivided(self, m: str, h: str, g: str) -> bool:
        return any(x != m and h in self._hsets[x] and g in self._hsets[x] for x in self.above[m])

    def undivided_classes(self, m: str) -> list[frozenset]:
        """Classes of histories through ``m`` that share a later moment.

        In a tree these are exactly the sets of histories through each
        immediate successor of ``m``; a history ending at ``m`` forms a
        class of its own.
        """
        classes: list[set[str]] = []
        for h in self.H[m]:
            for c in classes:
                if any(self.undivided(m, h, g) for g in c):
                    c.add(h)
                    break
            else:
                classes.append({h})
        return [frozenset(c) for c in classes]

    def successors(self, m: str) -> list[str]:
        """Immediate successors of ``m`` in the order."""
        strict = [x for x in self.above[m] if x != m]
        return [x for x in strict if not any(y != x and self.lt(y, x) for y in strict)]

    def roots(self) -> list[str]:
        return [m for m in self.moments if self.below[m] == (m,)]

    def replace(self, **changes) -> "FiniteJstitModel":
        explicit = {k: v for k, v in self.choice.items() if len(v) > 1}
        kwargs = dict(moments=self.moments, order=self.order, agents=self.agents,
                      choice=explicit, act=self.act, r=self.r, r_e=self.r_e,
                      evidence=self.evidence, valuation=self.valuation)
        kwargs.update(changes)
        return FiniteJstitModel(**kwargs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteJstitModel):
            return NotImplemented
        return (self.moments == other.moments and self.order == other.order
                and self.agents == other.agents and self.choice == other.choice
                and self.act == other.act and self.r == other.r and self.r_e == other.r_e
                and self.evidence == other.evidence and self.valuation == other.valuation)

    __hash__ = None  # type: ignore[assignment]


def histories(model: FiniteJstitModel) -> list[History]:
    return [model.history(leaf) for leaf in model.leaves]


def histories_through(model: FiniteJstitModel, moment: str) -> list[History]:
    model.check_moment(moment)
    return [model.history(leaf) for leaf in model.H[moment]]


def act_aggregates(model: FiniteJstitModel, moment: str, history: str, agent: str):
    """Return ``(Act_m, Act_(m,h,j))`` for the given moment, history leaf and agent."""
    model.check_pair(moment, history)
    if agent not in model.agents:
        raise ModelError(f"unknown agent {agent!r}")
    return model.act_m[moment], model.act_mhj(moment, history, agent)


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    constraint: str
    moments: tuple = ()
    histories: tuple = ()
    agents: tuple = ()
    terms: tuple = ()
    explanation: str = ""

    def __str__(self) -> str:
        where = " ".join(self.moments)
        s = f"constraint violated: {self.constraint}"
        if where:
            s += f" @ {where}"
        if self.explanation:
            s += f" ({self.explanation})"
        return s


@dataclass
class ConstraintReport:
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def constraints(self) -> set[str]:
        return {v.constraint for v in self.violations}

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __str__(self) -> str:
        if not self.violations:
            return "model satisfies all constraints"
        return "\n".join(str(v) for v in self.violations)


_PROBE = ProofVar("z_probe")


def validate(model: FiniteJstitModel) -> ConstraintReport:
    """Check every structural law and the eleven model constraints.

    The two evidence constraints quantify over all terms and formulas; they
    are checked on the finite universe of terms mentioned by ``act`` and by
    the evidence table (with their subterms, plus one fresh probe term) and
    of formulas mentioned by the evidence table (with their subformulas).
    """
    rep = ConstraintReport()
    add = rep.violations.append
    M = model
    ms = M.moments

    # partial order
    for a, b in M.order:
        if a != b and (b, a) in M.order:
            if M._index[a] < M._index[b]:
                add(Violation("order-partial-order", (a, b), explanation="order is not antisymmetric"))

    for m in ms:
        for m1 in ms:
            if not any(M.leq(x, m) and M.leq(x, m1) for x in ms):
                if M._index[m] < M._index[m1]:
                    add(Violation("historical-connection", (m, m1),
                                  explanation="no common lower bound"))
    for m in ms:
        lows = M.below[m]
        for a, b in itertools.combinations(lows, 2):
            if not (M.leq(a, b) or M.leq(b, a)):
                add(Violation("no-backward-branching", (m, a, b),
                              explanation=f"{a} and {b} are incomparable predecessors of {m}"))
    if rep.violations:
        rep.notes.append("order is not a tree; history-based constraints were not checked")
        return rep

    for rel, name in ((M.r, "r-preorder"), (M.r_e, "re-preorder")):
        for m in ms:
            if (m, m) not in rel:
                add(Violation(name, (m,), explanation="not reflexive"))
        succ: dict[str, set] = {m: set() for m in ms}
        for a, b in rel:
            succ[a].add(b)
        for a in ms:
            for b in sorted(succ[a], key=M._index.get):
                for c in sorted(succ[b], key=M._index.get):
                    if c not in succ[a]:
                        add(Violation(name, (a, b, c), explanation="not transitive"))
    for a, b in sorted(M.r - M.r_e, key=lambda p: (M._index[p[0]], M._index[p[1]])):
        add(Violation("r-included-in-re", (a, b), explanation="R pair missing from Re"))

    # 3 no choice between undivided histories
    for m in ms:
        for j in M.agents:
            for h, g in itertools.combinations(M.H[m], 2):
                if M.block(m, j, h) != M.block(m, j, g) and M.undivided(m, h, g):
                    add(Violation("no-choice-between-undivided-histories", (m,), (h, g), (j,),
                                  explanation=f"{j} separates histories undivided at {m}"))

    # 4 independence of agents
    for m in ms:
        partitions = [M.choice[(m, j)] for j in M.agents]
        for selection in itertools.product(*partitions):
            if not frozenset.intersection(*selection):
                add(Violation("independence-of-agents", (m,), agents=M.agents,
                              explanation="some combination of choices is empty"))
                break

    # 5, 6 evidence
    ev = M.evidence
    terms: set[Term] = set()
    for ts in M.act.values():
        terms.update(ts)
    terms.update(ev.key_terms())
    universe = set()
    for t in terms:
        universe.update(subterms(t))
    formulas: set[Formula] = set()
    for f in ev.formulas():
        formulas.update(subformulas(f))
    ordered_terms = sorted(universe, key=print_term)
    for a, b in sorted(M.r_e, key=lambda p: (M._index[p[0]], M._index[p[1]])):
        if a == b:
            continue
        for t in ordered_terms + [_PROBE]:
            if not _ev_subset(ev(a, t), ev(b, t)):
                add(Violation("monotonicity-of-evidence", (a, b), terms=(t,),
                              explanation=f"E({a},{print_term(t)}) not included in E({b},{print_term(t)})"))
    fset = frozenset(formulas)
    for m in ms:
        for t in ordered_terms:
            target = ev(m, t)
            missing = None
            if isinstance(t, App):
                left, right = ev(m, t.left), ev(m, t.right)
                if left is EVERYTHING:
                    need = fset if right else frozenset()
                else:
                    need = frozenset(f.right for f in left
                                     if isinstance(f, Imp) and f.left in right)
                missing = not _ev_subset(need, target)
            elif isinstance(t, Sum):
                need = _union(ev(m, t.left), ev(m, t.right))
                missing = not _ev_subset(need, target)
            elif isinstance(t, Check):
                inner = ev(m, t.inner)
                pool = fset if inner is EVERYTHING else inner
                need = frozenset(Just(t.inner, f) for f in pool)
                missing = not _ev_subset(need, target)
            if missing:
                add(Violation("evidence-closure", (m,), terms=(t,),
                              explanation=f"E({m},{print_term(t)}) misses formulas forced by its subterms"))

    # 7 expansion of presented proofs
    for m in ms:
        for m1 in M.below[m]:
            if m1 == m:
                continue
            for h in M.H[m]:
                lost = M.act_at(m1, h) - M.act_at(m, h)
                if lost:
                    add(Violation("expansion-of-presented-proofs", (m1, m), (h,),
                                  terms=tuple(sorted(lost, key=print_term)),
                                  explanation=f"Act({m1},{h}) not included in Act({m},{h})"))

    # 8 no new proofs guaranteed
    for m in ms:
        earlier: set = set()
        for m1 in M.below[m]:
            if m1 != m:
                for h in M.H[m]:
                    earlier |= M.act_at(m1, h)
        new = M.act_m[m] - earlier
        if new:
            names = " ".join(sorted(print_term(t) for t in new))
            add(Violation("no-new-proofs-guaranteed", (m,), terms=tuple(sorted(new, key=print_term)),
                          explanation=f"settled at {m} but never presented before: {names}"))

    # 9 presenting a new proof makes histories divide
    for m in ms:
        for h, g in itertools.combinations(M.H[m], 2):
            if M.act_at(m, h) != M.act_at(m, g) and M.undivided(m, h, g):
                add(Violation("presenting-a-new-proof-makes-histories-divide", (m,), (h, g),
                              explanation=f"undivided histories {h}, {g} differ in Act at {m}"))

    # 10 future always matters
    for a, b in sorted(M.order - M.r, key=lambda p: (M._index[p[0]], M._index[p[1]])):
        add(Violation("future-always-matters", (a, b), explanation=f"{a} <= {b} but not R({a},{b})"))

    # 11 presented proofs are epistemically transparent
    for a, b in sorted(M.r_e, key=lambda p: (M._index[p[0]], M._index[p[1]])):
        lost = M.act_m[a] - M.act_m[b]
        if lost:
            add(Violation("presented-proofs-are-epistemically-transparent", (a, b),
                          terms=tuple(sorted(lost, key=print_term)),
                          explanation=f"Act_{a} not included in Act_{b}"))
    return rep


def is_cs_normal(model: FiniteJstitModel, cs: Iterable[Formula]) -> bool:
    needed: dict[Term, list[Formula]] = {}
    for f in cs:
        if not (isinstance(f, Just) and isinstance(f.term, ProofConst)):
            raise ValueError(f"not a constant specification member: {f}")
        needed.setdefault(f.term, []).append(f.body)
    for c, bodies in needed.items():
        for m in model.moments:
            ev = model.evidence(m, c)
            if ev is EVERYTHING:
                continue
            if any(b not in ev for b in bodies):
                return False
    return True


# -- file format -------------------------------------------------------------

_LINE_RE = re.compile(r"^\s*([A-Za-z][\w-]*)\s*:\s*(.*)$")


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out).rstrip()


def _parse_terms(text: str) -> list[Term]:
    parts = [p for p in (text.split(",") if "," in text else text.split()) if p.strip()]
    return [parse_term(p.strip()) for p in parts]


def load_model(text: str) -> FiniteJstitModel:
    """Read a model from the line-oriented text format.

    Relations ``R`` and ``Re`` are closed reflexively and transitively.
    When absent, ``R`` defaults to the order and ``Re`` to ``R``.
    """
    agents: list[str] | None = None
    moments: list[str] | None = None
    order: list[tuple[str, str]] = []
    choice: dict = {}
    act: dict = {}
    ev_entries: dict = {}
    closure = False
    r_spec: str | None = None
    re_spec: str | None = None
    valuation: dict = {}
    val_all: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ModelError(f"line {lineno}: expected 'key: value'")
        key, rest = m.group(1), m.group(2).strip()
        try:
            if key == "agents":
                agents = rest.split()
            elif key == "moments":
                moments = rest.split()
            elif key == "order":
                for item in rest.split():
                    chain = item.split("<")
                    if len(chain) < 2 or not all(chain):
                        raise ModelError(f"bad order item {item!r}")
                    order.extend(zip(chain, chain[1:]))
            elif key == "choice":
                head, _, blocks = rest.partition(":")
                parts = head.split()
                if len(parts) != 2 or not _:
                    raise ModelError("choice line must be 'MOMENT AGENT : {..} {..}'")
                found = re.findall(r"\{([^}]*)\}", blocks)
                if re.sub(r"\{[^}]*\}", "", blocks).strip():
                    raise ModelError("choice blocks must be written as {leaf leaf ...}")
                choice[(parts[0], parts[1])] = [set(b.split()) for b in found]
            elif key == "act":
                head, eq, terms = rest.partition("=")
                if not eq or "/" not in head:
                    raise ModelError("act line must be 'MOMENT/LEAF = terms'")
                mo, leaf = (x.strip() for x in head.split("/", 1))
                act[(mo, leaf)] = set(_parse_terms(terms))
            elif key == "evidence-closure":
                closure = rest.lower() in ("on", "yes", "true", "1")
            elif key == "evidence":
                head, eq, value = rest.partition("=")
                parts = head.split()
                if not eq or len(parts) != 2:
                    raise ModelError("evidence line must be 'MOMENT TERM = ALL | \"formula\" ...'")
                mo = None if parts[0] == "*" else parts[0]
                term = None if parts[1] == "*" else parse_term(parts[1])
                value = value.strip()
                if value == "ALL":
                    ev_entries[(mo, term)] = EVERYTHING
                elif value in ("", "NONE"):
                    ev_entries[(mo, term)] = frozenset()
                else:
                    ev_entries[(mo, term)] = frozenset(
                        parse_formula(s, agents) for s in shlex.split(value))
            elif key == "R":
                r_spec = rest
            elif key == "Re":
                re_spec = rest
            elif key == "val":
                atom, at, pairs = rest.partition("@")
                atom = atom.strip()
                if not at or not atom:
                    raise ModelError("val line must be 'ATOM @ moment/leaf ...'")
                if pairs.strip() == "ALL":
                    val_all.append(atom)
                    continue
                got = set()
                for item in pairs.split():
                    mo, slash, leaf = item.partition("/")
                    if not slash:
                        raise ModelError(f"bad moment/leaf pair {item!r}")
                    got.add((mo, leaf))
                valuation.setdefault(atom, set()).update(got)
            else:
                raise ModelError(f"unknown key {key!r}")
        except ParseError as e:
            raise ModelError(f"line {lineno}: {e}") from e
        except ModelError as e:
            raise ModelError(f"line {lineno}: {e}") from e

    if agents is None or moments is None:
        raise ModelError("model needs 'agents:' and 'moments:' lines")
    if order:
        for a, b in order:
            for x in (a, b):
                if x not in moments:
                    raise ModelError(f"dangling identifier {x!r} in order")
    closed_order = reflexive_transitive_closure(moments, order)

    def relation(spec: str | None, base: frozenset | None) -> frozenset:
        pairs: set = set()
        if spec is None:
            return closed_order if base is None else base
        for item in spec.split():
            if item == "+order":
                pairs |= closed_order
            elif item in ("=R", "+R"):
                if base is None:
                    raise ModelError("'=R' is only allowed for Re")
                pairs |= base
            elif ">" in item:
                a, b = item.split(">", 1)
                for x in (a, b):
                    if x not in moments:
                        raise ModelError(f"dangling identifier {x!r} in relation")
                pairs.add((a, b))
            else:
                raise ModelError(f"bad relation item {item!r}")
        return reflexive_transitive_closure(moments, pairs)

    r = relation(r_spec, None)
    r_e = relation(re_spec, r)

    provisional = FiniteJstitModel(moments=moments, order=order, agents=agents)
    for atom in val_all:
        valuation[atom] = set(provisional.pairs())
    return FiniteJstitModel(moments=moments, order=order, agents=agents, choice=choice,
                            act=act, r=r, r_e=r_e,
                            evidence=EvidenceFunction(ev_entries, closure), valuation=valuation)


def dump_model(model: FiniteJstitModel) -> str:
    M = model
    idx = M._index
    lines = [f"agents: {' '.join(M.agents)}", f"moments: {' '.join(M.moments)}"]
    covers = [(a, b) for a in M.moments for b in M.successors(a)]
    if covers:
        lines.append("order: " + " ".join(f"{a}<{b}" for a, b in covers))
    for m in M.moments:
        for j in M.agents:
            blocks = M.choice[(m, j)]
            if len(blocks) > 1:
                body = " ".join("{" + " ".join(sorted(b, key=idx.get)) + "}"
                                for b in sorted(blocks, key=lambda b: min(idx[x] for x in b)))
                lines.append(f"choice: {m} {j} : {body}")
    for (m, h) in sorted(M.act, key=lambda k: (idx[k[0]], idx[k[1]])):
        ts = sorted(print_term(t).replace(" ", "") for t in M.act[(m, h)])
        lines.append(f"act: {m}/{h} = {' '.join(ts)}")
    if M.evidence.closure:
        lines.append("evidence-closure: on")

    def ev_key(k):
        mo, t = k
        return (mo is None, idx.get(mo, -1), t is None, "" if t is None else print_term(t))

    for (mo, t) in sorted(M.evidence.entries, key=ev_key):
        value = M.evidence.entries[(mo, t)]
        left = f"{'*' if mo is None else mo} {'*' if t is None else print_term(t).replace(' ', '')}"
        if value is EVERYTHING:
            rhs = "ALL"
        elif not value:
            rhs = "NONE"
        else:
            rhs = " ".join('"' + print_formula(f) + '"' for f in sorted(value, key=print_formula))
        lines.append(f"evidence: {left} = {rhs}")

    def rel_line(rel: frozenset) -> str:
        extra = sorted(rel - M.order, key=lambda p: (idx[p[0]], idx[p[1]]))
        items = ["+order"] if M.order <= rel else [f"{a}>{b}" for a, b in sorted(
            rel & M.order, key=lambda p: (idx[p[0]], idx[p[1]])) if a != b]
        items += [f"{a}>{b}" for a, b in extra]
        return " ".join(items)

    lines.append("R: " + rel_line(M.r))
    lines.append("Re: =R" if M.r_e == M.r else "Re: " + rel_line(M.r_e))
    all_pairs = set(M.pairs())
    for p in sorted(M.valuation):
        pairs = M.valuation[p]
        if pairs == all_pairs and pairs:
            lines.append(f"val: {p} @ ALL")
        else:
            items = sorted(pairs, key=lambda k: (idx[k[0]], idx[k[1]]))
            lines.append(f"val: {p} @ " + " ".join(f"{m}/{h}" for m, h in items))
    return "\n".join(lines) + "\n"
