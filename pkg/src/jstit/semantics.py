"""Truth of formulas at moment/history pairs of finite jstit models."""

from __future__ import annotations

from .model import ConstraintReport, FiniteJstitModel, ModelError, validate
from .syntax import (
    And, Atom, Box, Cstit, CstitDual, Diamond, Et, Falsum, Formula, Imp, Just, K,
    Neg, Or, Prove, Proven, agents_of,
)

__all__ = [
    "InvalidModelError", "Evaluator", "evaluate", "valid_in_model", "counterexample",
    "is_moment_determinate", "MOMENT_DETERMINATE",
]

# shapes whose truth value never depends on the history component
MOMENT_DETERMINATE = (Box, Diamond, K, Just, Proven, Falsum)


class InvalidModelError(ModelError):
    def __init__(self, report: ConstraintReport):
        super().__init__("model violates the jstit constraints:\n" + str(report))
        self.report = report


class Evaluator:
    """Memoising evaluator bound to one model.

    Results are cached per ``(formula, moment)`` for moment-determinate
    shapes and per ``(formula, moment, history)`` otherwise, and the cache
    is shared across calls, so one evaluator can check many formulas on a
    model cheaply.  The model is validated once unless ``waive_validation``
    is set.
    """

    def __init__(self, model: FiniteJstitModel, *, waive_validation: bool = False,
                 enable_et: bool = False):
        if not waive_validation:
            report = validate(model)
            if report:
                raise InvalidModelError(report)
        self.model = model
        self.enable_et = enable_et
        self._memo: dict = {}

    def _check(self, f: Formula) -> None:
        missing = agents_of(f) - set(self.model.agents)
        if missing:
            raise ModelError(f"formula mentions agents outside the model: {sorted(missing)}")

    def __call__(self, moment: str, history: str, f: Formula) -> bool:
        self.model.check_pair(moment, history)
        self._check(f)
        return self._eval(moment, history, f)

    def _eval(self, m: str, h: str, f: Formula) -> bool:
        det = isinstance(f, MOMENT_DETERMINATE)
        key = (f, m) if det else (f, m, h)
        try:
            return self._memo[key]
        except KeyError:
            pass
        value = self._clause(m, h, f)
        self._memo[key] = value
        return value

    def _clause(self, m: str, h: str, f: Formula) -> bool:
        M = self.model
        ev = self._eval
        if isinstance(f, Atom):
            return (m, h) in M.valuation.get(f.name, ())
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Neg):
            return not ev(m, h, f.body)
        if isinstance(f, And):
            return ev(m, h, f.left) and ev(m, h, f.right)
        if isinstance(f, Or):
            return ev(m, h, f.left) or ev(m, h, f.right)
        if isinstance(f, Imp):
            return not ev(m, h, f.left) or ev(m, h, f.right)
        if isinstance(f, Box):
            return all(ev(m, g, f.body) for g in M.H[m])
        if isinstance(f, Diamond):
            return any(ev(m, g, f.body) for g in M.H[m])
        if isinstance(f, Cstit):
            return all(ev(m, g, f.body) for g in M.block(m, f.agent, h))
        if isinstance(f, CstitDual):
            return any(ev(m, g, f.body) for g in M.block(m, f.agent, h))
        if isinstance(f, K):
            return all(ev(m2, g, f.body) for m2 in M.r_succ[m] for g in M.H[m2])
        if isinstance(f, Just):
            return self._just(m, f)
        if isinstance(f, Prove):
            t = f.term
            return (t in M.act_mhj(m, h, f.agent) and t not in M.act_m[m]
                    and self._eval(m, h, Just(t, f.body)))
        if isinstance(f, Proven):
            return f.term in M.act_m[m] and self._eval(m, h, Just(f.term, f.body))
        if isinstance(f, Et):
            if not self.enable_et:
                raise ModelError("the E modality is disabled; pass enable_et=True")
            return f.term in M.act_at(m, h)
        raise TypeError(f"not a formula: {f!r}")

    def _just(self, m: str, f: Just) -> bool:
        M = self.model
        if f.body not in M.evidence(m, f.term):
            return False
        return all(self._eval(m2, g, f.body) for m2 in M.re_succ[m] for g in M.H[m2])

    def counterexample(self, f: Formula) -> tuple[str, str] | None:
        self._check(f)
        for m, h in self.model.pairs():
            if not self._eval(m, h, f):
                return m, h
        return None

    def is_moment_determinate(self, moment: str, f: Formula) -> bool:
        self.model.check_moment(moment)
        self._check(f)
        values = {self._eval(moment, h, f) for h in self.model.H[moment]}
        return len(values) <= 1


def evaluate(model: FiniteJstitModel, moment: str, history: str, f: Formula, *,
             waive_validation: bool = False, enable_et: bool = False) -> bool:
    """Truth of ``f`` at ``(moment, history)``; ``history`` is a leaf id."""
    return Evaluator(model, waive_validation=waive_validation, enable_et=enable_et)(moment, history, f)


def counterexample(model: FiniteJstitModel, f: Formula, *, waive_validation: bool = False,
                   enable_et: bool = False) -> tuple[str, str] | None:
    """First moment/history pair falsifying ``f``, or ``None`` when ``f`` is valid."""
    ev = Evaluator(model, waive_validation=waive_validation, enable_et=enable_et)
    return ev.counterexample(f)


def valid_in_model(model: FiniteJstitModel, f: Formula, **kwargs) -> bool:
    return counterexample(model, f, **kwargs) is None


def is_moment_determinate(model: FiniteJstitModel, moment: str, f: Formula, **kwargs) -> bool:
    return Evaluator(model, **kwargs).is_moment_determinate(moment, f)
