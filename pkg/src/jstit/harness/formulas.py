"""Random terms, formulas and axiom instances."""

from __future__ import annotations

import random
from typing import Sequence

from ..proofkit.axioms import SCHEME_ORDER, a3_instance, as4_instance, b13_instance, instantiate
from ..syntax import (
    FALSUM, And, App, Atom, Box, Check, Cstit, CstitDual, Diamond, Et, Formula, Imp, Just, K,
    Neg, Or, Prove, Proven, Sum, Term,
)

__all__ = ["random_formula", "random_term", "random_instance"]

_SHAPES = ("atom", "neg", "and", "or", "imp", "box", "dia", "stit", "sdual", "K",
           "just", "prove", "proven")


def random_term(rng: random.Random, pool: Sequence[Term], compound: float = 0.0) -> Term:
    """A pool term, wrapped in ``!``, ``+`` or ``*`` while a coin with
    bias ``compound`` keeps landing heads."""
    t = rng.choice(pool)
    while rng.random() < compound:
        op = rng.randrange(3)
        if op == 0:
            t = Check(t)
        elif op == 1:
            t = Sum(t, rng.choice(pool))
        else:
            t = App(t, rng.choice(pool))
    return t


def random_formula(rng: random.Random, depth: int, atoms: Sequence[str], terms: Sequence[Term],
                   agents: Sequence[str], *, allow_et: bool = False) -> Formula:
    """A random formula of nesting depth at most ``depth``."""
    if depth <= 0:
        return FALSUM if rng.random() < 0.05 else Atom(rng.choice(atoms))
    shapes = _SHAPES + (("et",) if allow_et else ())
    shape = rng.choice(shapes)

    def sub():
        return random_formula(rng, depth - 1, atoms, terms, agents, allow_et=allow_et)

    if shape == "atom":
        return Atom(rng.choice(atoms))
    if shape == "neg":
        return Neg(sub())
    if shape in ("and", "or", "imp"):
        return {"and": And, "or": Or, "imp": Imp}[shape](sub(), sub())
    if shape == "box":
        return Box(sub())
    if shape == "dia":
        return Diamond(sub())
    if shape == "stit":
        return Cstit(rng.choice(agents), sub())
    if shape == "sdual":
        return CstitDual(rng.choice(agents), sub())
    if shape == "K":
        return K(sub())
    if shape == "just":
        return Just(rng.choice(terms), sub())
    if shape == "prove":
        return Prove(rng.choice(agents), rng.choice(terms), sub())
    if shape == "proven":
        return Proven(rng.choice(terms), sub())
    return Et(rng.choice(terms))


def random_instance(rng: random.Random, scheme: str, agents: Sequence[str],
                    formulas: Sequence[Formula], terms: Sequence[Term]) -> Formula:
    """A random instance of ``scheme`` with metavariables drawn from the pools."""
    pick = lambda: rng.choice(formulas)  # noqa: E731
    if scheme == "A3":
        chosen = rng.sample(list(agents), rng.randint(1, len(agents)))
        return a3_instance([(j, pick()) for j in chosen])
    if scheme == "B13":
        return b13_instance(rng.choice(agents), rng.choice(terms), pick(), agents)
    if scheme == "AS4":
        n = rng.randint(1, 2)
        return as4_instance([(rng.choice(terms), pick()) for _ in range(n)], agents)
    if scheme not in SCHEME_ORDER:
        raise KeyError(scheme)
    modality = None
    if scheme.startswith("A1-") and rng.random() < 0.5:
        modality = rng.choice(agents)
    return instantiate(scheme, A=pick(), B=pick(), C=pick(), s=rng.choice(terms),
                       t=rng.choice(terms), agent=rng.choice(agents), modality=modality)
