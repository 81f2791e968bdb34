"""A deliberately naive second evaluator.

It recomputes histories as maximal chains of the order, rebuilds Act_m and
choice cells from the raw tables at every call, and caches nothing.  It
reads the model's fields but none of its derived indexes (H, block,
act_m, r_succ), so it can serve as an oracle for the real evaluator.
"""

from jstit.syntax import (
    And, Atom, Box, Cstit, CstitDual, Diamond, Et, Falsum, Imp, Just, K, Neg, Or, Prove,
    Proven,
)


def maximal_chains(moments, order):
    below = lambda a, b: (a, b) in order  # noqa: E731
    chains = []

    def extend(chain):
        top = chain[-1]
        nxt = [m for m in moments if m != top and below(top, m)
               and not any(x not in (top, m) and below(top, x) and below(x, m) for x in moments)]
        if not nxt:
            chains.append(frozenset(chain))
        for m in nxt:
            extend(chain + [m])

    for root in moments:
        if not any(x != root and below(x, root) for x in moments):
            extend([root])
    return chains


class NaiveEvaluator:
    def __init__(self, model, enable_et=False):
        self.m = model
        self.enable_et = enable_et
        self.chains = maximal_chains(model.moments, model.order)

    def leaf(self, chain):
        return max(chain, key=lambda x: sum((y, x) in self.m.order for y in chain))

    def histories_at(self, moment):
        return [self.leaf(c) for c in self.chains if moment in c]

    def cell(self, moment, agent, h):
        for block in self.m.choice[(moment, agent)]:
            if h in block:
                return block
        raise AssertionError("choice is not a partition")

    def act(self, moment, h):
        return self.m.act.get((moment, h), frozenset())

    def settled(self, moment):
        hs = self.histories_at(moment)
        return {t for t in self.act(moment, hs[0]) if all(t in self.act(moment, g) for g in hs)}

    def __call__(self, moment, h, f):
        M, ev = self.m, self
        if isinstance(f, Atom):
            return (moment, h) in M.valuation.get(f.name, ())
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Neg):
            return not ev(moment, h, f.body)
        if isinstance(f, And):
            return ev(moment, h, f.left) and ev(moment, h, f.right)
        if isinstance(f, Or):
            return ev(moment, h, f.left) or ev(moment, h, f.right)
        if isinstance(f, Imp):
            return (not ev(moment, h, f.left)) or ev(moment, h, f.right)
        if isinstance(f, Box):
            return all(ev(moment, g, f.body) for g in self.histories_at(moment))
        if isinstance(f, Diamond):
            return not ev(moment, h, Box(Neg(f.body)))
        if isinstance(f, Cstit):
            return all(ev(moment, g, f.body) for g in self.cell(moment, f.agent, h))
        if isinstance(f, CstitDual):
            return not ev(moment, h, Cstit(f.agent, Neg(f.body)))
        if isinstance(f, K):
            return all(ev(x, g, f.body) for x in M.moments if (moment, x) in M.r
                       for g in self.histories_at(x))
        if isinstance(f, Just):
            return f.body in M.evidence(moment, f.term) and all(
                ev(x, g, f.body) for x in M.moments if (moment, x) in M.r_e
                for g in self.histories_at(x))
        if isinstance(f, Prove):
            cell = self.cell(moment, f.agent, h)
            in_cell = all(f.term in self.act(moment, g) for g in cell)
            return in_cell and f.term not in self.settled(moment) and ev(moment, h, Just(f.term, f.body))
        if isinstance(f, Proven):
            return f.term in self.settled(moment) and ev(moment, h, Just(f.term, f.body))
        if isinstance(f, Et):
            assert self.enable_et
            return f.term in self.act(moment, h)
        raise TypeError(f)

    def pairs(self):
        return [(x, g) for x in self.m.moments for g in self.histories_at(x)]
