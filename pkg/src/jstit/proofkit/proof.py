"""Annotated Hilbert proofs, constant specifications, and the proof checker."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

from ..syntax import (
    Formula, Imp, Just, K, ParseError, ProofConst, Term, agents_of, normalize,
    parse_formula, parse_term, print_formula, print_term,
)
from .axioms import (
    CS_SCHEMES, PI_PRIME_ONLY, SCHEME_ORDER, is_instance,
    proven_disjunction, s4_conclusion,
)

__all__ = [
    "Mode", "Axiom", "FromCS", "MP", "Nec", "S4", "Justification", "Line", "Proof",
    "Verdict", "ConstantSpecification", "CSError", "check_proof", "parse_proof",
    "format_proof", "parse_cs", "format_cs", "ProofFormatError",
]


class Mode(str, Enum):
    PI = "pi"
    PI_PRIME = "pi-prime"


@dataclass(frozen=True)
class Axiom:
    scheme: str


@dataclass(frozen=True)
class FromCS:
    pass


@dataclass(frozen=True)
class MP:
    """Modus ponens from line ``minor`` (A) and line ``major`` (A -> B)."""
    minor: int
    major: int


@dataclass(frozen=True)
class Nec:
    premise: int


@dataclass(frozen=True)
class S4:
    premise: int
    pairs: tuple[tuple[Term, Formula], ...]


Justification = Union[Axiom, FromCS, MP, Nec, S4]


@dataclass(frozen=True)
class Line:
    formula: Formula
    why: Justification


@dataclass(frozen=True)
class Proof:
    """A finite sequence of justified lines over a fixed agent set.

    Line indices in justifications are 1-based, as in proof files.
    """
    lines: tuple[Line, ...]
    agents: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "agents", tuple(self.agents))

    @property
    def conclusion(self) -> Formula:
        if not self.lines:
            raise ValueError("empty proof has no conclusion")
        return self.lines[-1].formula

    def __len__(self) -> int:
        return len(self.lines)

    def s4_steps(self) -> int:
        return sum(isinstance(ln.why, S4) for ln in self.lines)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: int | None = None
    reason: str = ""
    conclusion: Formula | None = None

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return f"accepted: {self.conclusion}"
        where = f" at line {self.line}" if self.line is not None else ""
        return f"rejected{where}: {self.reason}"


class CSError(ValueError):
    pass


def _peel_constants(f: Formula) -> tuple[list[ProofConst], Formula]:
    consts = []
    while isinstance(f, Just) and isinstance(f.term, ProofConst):
        consts.append(f.term)
        f = f.body
    return consts, f


@dataclass(frozen=True)
class ConstantSpecification:
    """A finite, downward-closed set of formulas ``c_n:...:c_1:A``.

    Construction checks the shape of every member, that each innermost
    ``A`` is an axiom instance (A_S4 excluded), and downward closure.
    """
    formulas: tuple[Formula, ...] = ()
    agents: tuple[str, ...] = ()
    _keys: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))
        object.__setattr__(self, "agents", tuple(self.agents))
        keys = frozenset(normalize(f) for f in self.formulas)
        object.__setattr__(self, "_keys", keys)
        for f in self.formulas:
            consts, inner = _peel_constants(normalize(f))
            if not consts:
                raise CSError(f"not of the form c:A with c a proof constant: {f}")
            if not any(is_instance(inner, s, self.agents) for s in CS_SCHEMES):
                raise CSError(f"innermost formula is not an axiom instance: {inner}")
            g = normalize(f).body
            if isinstance(g, Just) and isinstance(g.term, ProofConst) and g not in keys:
                raise CSError(f"not downward closed: {f} is present but {g} is not")

    def __contains__(self, f: Formula) -> bool:
        return normalize(f) in self._keys

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)


EMPTY_CS = ConstantSpecification()


def _reject(n: int, reason: str) -> Verdict:
    return Verdict(False, n, reason)


def check_proof(proof: Proof, cs: ConstantSpecification | None = None,
                mode: Mode | str = Mode.PI) -> Verdict:
    """Check every line of ``proof`` in Pi(CS) or, with ``mode='pi-prime'``,
    in Pi'(CS), where the S4 rule is replaced by the A_S4 scheme.

    ``mp:i,j`` is accepted with its premises in either order.
    """
    mode = Mode(mode)
    cs = EMPTY_CS if cs is None else cs
    agents = proof.agents
    if not agents:
        return _reject(None, "proof has an empty agent set")
    if not proof.lines:
        return _reject(None, "empty proof")
    norm: list[Formula] = []
    for n, line in enumerate(proof.lines, start=1):
        f = normalize(line.formula)
        stray = agents_of(f) - set(agents)
        if stray:
            return _reject(n, f"agents outside the agent set: {sorted(stray)}")
        why = line.why

        def earlier(i: int) -> Formula | None:
            return norm[i - 1] if isinstance(i, int) and 1 <= i < n else None

        if isinstance(why, Axiom):
            if why.scheme not in SCHEME_ORDER:
                return _reject(n, f"unknown axiom scheme {why.scheme!r}")
            if why.scheme in PI_PRIME_ONLY and mode is Mode.PI:
                return _reject(n, f"mode violation: {why.scheme} is only an axiom of Pi'")
            if not is_instance(f, why.scheme, agents):
                return _reject(n, f"scheme mismatch: not an instance of {why.scheme}")
        elif isinstance(why, FromCS):
            if f not in cs:
                return _reject(n, "not a member of the constant specification")
        elif isinstance(why, MP):
            a, b = earlier(why.minor), earlier(why.major)
            if a is None or b is None:
                return _reject(n, f"malformed index in mp:{why.minor},{why.major}")
            if b != Imp(a, f) and a != Imp(b, f):
                return _reject(n, f"modus ponens does not apply to lines {why.minor} and {why.major}")
        elif isinstance(why, Nec):
            a = earlier(why.premise)
            if a is None:
                return _reject(n, f"malformed index in nec:{why.premise}")
            if f != K(a):
                return _reject(n, f"line is not K applied to line {why.premise}")
        elif isinstance(why, S4):
            if mode is Mode.PI_PRIME:
                return _reject(n, "mode violation: the S4 rule is not available in Pi'")
            a = earlier(why.premise)
            if a is None:
                return _reject(n, f"malformed index in s4:{why.premise}")
            if not why.pairs:
                return _reject(n, "S4 step lists no (t, B) pairs")
            if not (isinstance(a, Imp) and isinstance(a.left, K)):
                return _reject(n, f"S4 premise on line {why.premise} is not of the form KA -> D")
            pairs = [(t, normalize(b)) for t, b in why.pairs]
            if a.right != normalize(proven_disjunction(pairs)):
                return _reject(n, "S4 premise consequent does not match the annotated pairs")
            if f != Imp(a.left, normalize(s4_conclusion(pairs, agents))):
                return _reject(n, "S4 conclusion is not the canonical agent disjunction")
        else:
            return _reject(n, f"unknown justification {why!r}")
        norm.append(f)
    return Verdict(True, None, "", proof.conclusion)


# -- file formats ---------------------------------------------------------------

class ProofFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


_LINE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(\S.*?)\s*$")
_RULE = re.compile(r"^(?:ax:(?P<ax>[A-Za-z0-9-]+)|(?P<cs>cs)|mp:(?P<i>\d+)\s*,\s*(?P<j>\d+)"
                   r"|nec:(?P<nec>\d+)|s4:(?P<s4>\d+)\s*\[(?P<pairs>.*)\])$")


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0]


def _parse_pairs(text: str, agents, lineno: int):
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")) or "," not in chunk:
            raise ProofFormatError(f"bad S4 pair {chunk!r}; expected (t,B)", lineno)
        term_text, body_text = chunk[1:-1].split(",", 1)
        try:
            pairs.append((parse_term(term_text.strip()), parse_formula(body_text, agents)))
        except ParseError as e:
            raise ProofFormatError(f"in S4 pair: {e}", lineno) from e
    return tuple(pairs)


def parse_proof(text: str, agents: Sequence[str] | None = None) -> Proof:
    """Read the ``n. FORMULA ; RULE`` format.

    An optional ``agents: a b ...`` header fixes the agent set; otherwise
    ``agents`` must be supplied.  ``#`` starts a comment.
    """
    ag = tuple(agents) if agents else None
    lines: list[Line] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        if body.startswith("agents:"):
            if lines:
                raise ProofFormatError("agents header must precede the proof lines", lineno)
            ag = tuple(body[len("agents:"):].split())
            continue
        if ag is None:
            raise ProofFormatError("no agent set: add an 'agents:' header", lineno)
        m = _LINE.match(body)
        if not m:
            raise ProofFormatError("expected 'n. FORMULA ; RULE'", lineno)
        if int(m.group(1)) != len(lines) + 1:
            raise ProofFormatError(f"line number {m.group(1)} out of sequence", lineno)
        try:
            f = parse_formula(m.group(2), ag)
        except ParseError as e:
            raise ProofFormatError(str(e), lineno) from e
        r = _RULE.match(m.group(3))
        if not r:
            raise ProofFormatError(f"unknown rule {m.group(3)!r}", lineno)
        if r.group("ax"):
            why: Justification = Axiom(r.group("ax"))
        elif r.group("cs"):
            why = FromCS()
        elif r.group("i"):
            why = MP(int(r.group("i")), int(r.group("j")))
        elif r.group("nec"):
            why = Nec(int(r.group("nec")))
        else:
            why = S4(int(r.group("s4")), _parse_pairs(r.group("pairs"), ag, lineno))
        lines.append(Line(f, why))
    if ag is None:
        raise ProofFormatError("no agent set: add an 'agents:' header")
    return Proof(tuple(lines), ag)


def _format_rule(why: Justification) -> str:
    if isinstance(why, Axiom):
        return f"ax:{why.scheme}"
    if isinstance(why, FromCS):
        return "cs"
    if isinstance(why, MP):
        return f"mp:{why.minor},{why.major}"
    if isinstance(why, Nec):
        return f"nec:{why.premise}"
    pairs = ";".join(f"({print_term(t)},{print_formula(b)})" for t, b in why.pairs)
    return f"s4:{why.premise}[{pairs}]"


def format_proof(proof: Proof, header: bool = True) -> str:
    out = [f"agents: {' '.join(proof.agents)}"] if header else []
    width = len(str(len(proof.lines)))
    for n, line in enumerate(proof.lines, start=1):
        out.append(f"{n:>{width}}. {print_formula(line.formula)} ; {_format_rule(line.why)}")
    return "\n".join(out) + "\n"


def parse_cs(text: str, agents: Sequence[str]) -> ConstantSpecification:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    fs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        try:
            fs.append(parse_formula(body, agents))
        except ParseError as e:
            raise ProofFormatError(str(e), lineno) from e
    return ConstantSpecification(tuple(fs), tuple(agents))


def format_cs(cs: Iterable[Formula]) -> str:
    return "".join(f"{print_formula(f)}\n" for f in cs)
