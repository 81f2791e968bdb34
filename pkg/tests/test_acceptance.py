"""The eight acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured
numbers.  Run directly (``python3 tests/test_acceptance.py``) for just
those lines, or under pytest with the rest of the suite.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from jstit.harness import mutation_suite, prop1_demo, prop1_quotient, soundness_fuzz  # noqa: E402
from jstit.harness.demos import FMP_FORMULA, PROP1_FORMULA, fmp_models  # noqa: E402
from jstit.harness.formulas import random_formula  # noqa: E402
from jstit.model import validate  # noqa: E402
from jstit.proofkit import Mode, check_proof, corpus, eliminate_s4  # noqa: E402
from jstit.semantics import Evaluator  # noqa: E402
from jstit.syntax import (  # noqa: E402
    And, Box, Cstit, Diamond, Et, Just, K, Neg, ProofConst, ProofVar, Prove, Proven,
    parse_formula,
)

from oracle import NaiveEvaluator  # noqa: E402

TERMS = (ProofVar("x"), ProofVar("y"), ProofConst("c"))


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def hundred():
    return [model for _, model in fmp_models(100, 0)]


def test_1_soundness_fuzz(report):
    start = time.perf_counter()
    rep = soundness_fuzz(200, 20, seed=0)
    elapsed = time.perf_counter() - start
    ok = rep.ok and elapsed < 60
    assert report(1, "soundness fuzz", ok,
                  f"{rep.n_models} models, {rep.checked} formulas, "
                  f"{len(rep.findings)} counterexamples, {elapsed:.1f}s"), rep.text()


def test_2_dense_time_countermodel(report):
    model, a = prop1_quotient()
    ev = Evaluator(model, waive_validation=True)
    h2 = "mid"
    witness = parse_formula("Prove(j,x,p) & y:q & ~Prove(j,y,q) & ~Proven(y,q)")
    violations = validate(model).violations
    demo = prop1_demo()
    outcomes = {
        "A false": not ev("0", h2, a),
        "antecedent true": ev("0", h2, a.left),
        "witness true": ev("0", h2, witness),
        "one violation at mid": [(v.constraint, v.moments) for v in violations]
        == [("no-new-proofs-guaranteed", ("mid",))],
        "demo output": demo.ok and "A falsified at (0,h2)" in demo.lines,
    }
    ok = all(outcomes.values())
    assert report(2, "dense-time countermodel", ok,
                  ", ".join(f"{k}={v}" for k, v in outcomes.items())), outcomes


def test_3_discrete_time_validity(hundred, report):
    failures, pairs, antecedent = 0, 0, 0
    for model in hundred:
        ev = Evaluator(model)
        for m, h in model.pairs():
            pairs += 1
            failures += not ev(m, h, PROP1_FORMULA)
            antecedent += ev(m, h, PROP1_FORMULA.left)
    ok = failures == 0 and len(hundred) == 100
    assert report(3, "discrete-time formula valid on finite models", ok,
                  f"{len(hundred)} models, {pairs} pairs, {failures} exceptions "
                  f"(antecedent true at {antecedent} pairs)")


def test_4_fmp_failure(hundred, report):
    satisfied, pairs = 0, 0
    for model in hundred:
        ev = Evaluator(model)
        for m, h in model.pairs():
            pairs += 1
            satisfied += ev(m, h, FMP_FORMULA)
    ok = satisfied == 0 and len(hundred) == 100
    assert report(4, f"{FMP_FORMULA} unsatisfiable on finite models", ok,
                  f"{len(hundred)} models, {pairs} pairs, satisfied at {satisfied}")


def test_5_proof_corpus(report):
    entries = corpus()
    required = ["T0", "T1", "T2", "T3", "T4", "T5-n1", "T5-n2"]
    rejected = [n for n, e in entries.items() if not check_proof(e.proof)]
    models = [model for _, model in fmp_models(50, 1000)]
    invalid = []
    for name, entry in entries.items():
        if entry.proof.conclusion != entry.formula:
            rejected.append(name)
        for model in models:
            if Evaluator(model).counterexample(entry.formula) is not None:
                invalid.append(name)
                break
    ok = all(n in entries for n in required) and not rejected and not invalid
    assert report(5, "proof corpus", ok,
                  f"{len(entries)} proofs accepted with empty CS "
                  f"({sum(len(e.proof) for e in entries.values())} lines), "
                  f"rejected={rejected}, not valid on {len(models)} models={invalid}")


def test_6_s4_elimination(report):
    results = {}
    for name, entry in corpus().items():
        if not entry.proof.s4_steps():
            continue
        out = eliminate_s4(entry.proof)
        results[name] = (bool(check_proof(out, mode=Mode.PI_PRIME))
                         and out.conclusion == entry.proof.conclusion
                         and out.s4_steps() == 0, len(entry.proof), len(out))
    ok = {"AS4-n1", "AS4-n2", "S4-two"} <= set(results) and all(r[0] for r in results.values())
    detail = ", ".join(f"{n}: {a}->{b} lines {'ok' if good else 'REJECTED'}"
                       for n, (good, a, b) in results.items())
    assert report(6, "S4 elimination into Pi'", ok, detail)


def test_7_semantics_invariants(hundred, report):
    rng = random.Random(0)
    mismatches = determinacy = definability = evaluated = 0
    for model in hundred:
        ev = Evaluator(model, enable_et=True)
        naive = NaiveEvaluator(model, enable_et=True)
        pairs = model.pairs()
        for _ in range(100):
            f = random_formula(rng, 3, ("p", "q", "r"), TERMS, model.agents)
            for m, h in pairs:
                evaluated += 1
                mismatches += ev(m, h, f) != naive(m, h, f)
        for _ in range(10):
            a = random_formula(rng, 2, ("p", "q", "r"), TERMS, model.agents)
            t = rng.choice(TERMS)
            for g in (Box(a), K(a), Just(t, a), Proven(t, a)):
                determinacy += sum(not ev.is_moment_determinate(m, g) for m in model.moments)
            e = Et(t)
            for m, h in pairs:
                definability += ev(m, h, Proven(t, a)) != ev(m, h, And(Box(e), Just(t, a)))
                for j in model.agents:
                    rhs = And(And(Cstit(j, e), Diamond(Neg(e))), Just(t, a))
                    definability += ev(m, h, Prove(j, t, a)) != ev(m, h, rhs)
    ok = mismatches == definability == determinacy == 0
    assert report(7, "semantics invariants", ok,
                  f"{evaluated} oracle comparisons, {mismatches} mismatches; "
                  f"{determinacy} determinacy failures; {definability} definability failures")


def test_8_mutation_suite(report):
    results = mutation_suite()
    ok = len(results) == 11 and all(r.ok for r in results)
    failed = [r.line() for r in results if not r.ok]
    assert report(8, "validator mutation suite", ok,
                  f"{sum(r.ok for r in results)}/{len(results)} constraints isolated"
                  + (f"; {failed}" if failed else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
