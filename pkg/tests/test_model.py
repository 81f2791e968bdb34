import itertools

import pytest

from jstit.harness import gen_model, prop1_quotient
from jstit.model import (
    CONSTRAINTS, EVERYTHING, EvidenceFunction, ModelError, act_aggregates, dump_model,
    histories, histories_through, is_cs_normal, load_model, validate,
)
from jstit.syntax import Atom, ProofConst, ProofVar, parse_formula

from conftest import params
from oracle import maximal_chains

SINGLE = """
agents: j
moments: m
"""

CHAIN = """
agents: j
moments: m1 m2 m3
order: m1<m2 m2<m3
"""

x, y = ProofVar("x"), ProofVar("y")


def test_single_moment():
    model = load_model(SINGLE)
    assert [h.leaf for h in histories(model)] == ["m"]
    assert not validate(model)


def test_fork(fork):
    assert [h.leaf for h in histories(fork)] == ["l1", "l2"]
    assert {h.leaf for h in histories_through(fork, "m")} == {"l1", "l2"}
    assert [h.leaf for h in histories_through(fork, "l1")] == ["l1"]
    assert not validate(fork)


def test_chain_has_one_history():
    (h,) = histories(load_model(CHAIN))
    assert h.moments == {"m1", "m2", "m3"}


def test_quotient_histories():
    model, _ = prop1_quotient()
    assert {h.moments for h in histories(model)} == {
        frozenset({"-1", "0", "a"}), frozenset({"-1", "0", "mid"})}


def test_act_aggregates():
    model, _ = prop1_quotient()
    assert act_aggregates(model, "0", "mid", "j") == (frozenset(), {x})
    assert act_aggregates(model, "mid", "mid", "j")[0] == {x, y}
    fork = load_model("agents: j\nmoments: m l1 l2\norder: m<l1 m<l2\nact: m/l1 = x")
    assert act_aggregates(fork, "m", "l1", "j") == (frozenset(), frozenset())
    with pytest.raises(ModelError):
        act_aggregates(fork, "l1", "l2", "j")


def test_quotient_violates_only_constraint_8():
    model, _ = prop1_quotient()
    report = validate(model)
    assert [(v.constraint, v.moments) for v in report.violations] == [
        ("no-new-proofs-guaranteed", ("mid",))]


def test_r_missing_order_pair(fork):
    report = validate(fork.replace(r=fork.r - {("m", "l1")}))
    assert "future-always-matters" in report.constraints()


def test_removed_act_element_is_detected():
    model = load_model("""
agents: j
moments: m l1 l2
order: m<l1 m<l2
act: m/l1 = x
act: l1/l1 = x
""")
    assert not validate(model)
    act = dict(model.act)
    act[("l1", "l1")] = frozenset()
    assert validate(model.replace(act=act)).constraints() == {"expansion-of-presented-proofs"}


@pytest.mark.parametrize("text, message", [
    ("agents: j\nmoments: m\norder: m<n", "dangling"),
    ("agents: j\nmoments: m l1 l2\norder: m<l1 m<l2\nchoice: m j : {l1}", "cover"),
    ("agents: j\nmoments: m l1 l2\norder: m<l1 m<l2\nchoice: m j : {m} {l1 l2}", "leaves"),
    ("agents: j\nmoments: m l1\norder: m<l1\nact: m/m = x", "not a leaf"),
    ("agents: j\nmoments: m\nbogus: 1", "bogus"),
])
def test_load_errors(text, message):
    with pytest.raises(ModelError, match=message):
        load_model(text)


def test_cs_normal(fork):
    member = parse_formula("c:(p -> (q -> p))")
    assert is_cs_normal(fork, [])
    c = ProofConst("c")
    empty = fork.replace(evidence=EvidenceFunction({(None, c): frozenset()}))
    assert not is_cs_normal(empty, [member])
    full = fork.replace(evidence=EvidenceFunction({(None, None): EVERYTHING}))
    assert is_cs_normal(full, [member])


def test_dump_load_round_trip(generated):
    for model in generated:
        again = load_model(dump_model(model))
        assert again == model
        assert dump_model(again) == dump_model(model)


def test_generated_models_validate(generated):
    for model in generated:
        assert not validate(model), str(validate(model))


def test_histories_are_maximal_chains(generated):
    for model in generated:
        chains = maximal_chains(model.moments, model.order)
        assert sorted(chains, key=sorted) == sorted((h.moments for h in histories(model)), key=sorted)


def test_history_laws(generated):
    for model in generated:
        for m in model.moments:
            through = histories_through(model, m)
            assert through
            for h in through:
                assert all(a in h for a in model.moments if model.leq(a, m))
            for m2 in model.moments:
                if model.leq(m, m2):
                    assert set(model.H[m2]) <= set(model.H[m])


def test_partition_law(generated):
    for model in generated:
        for m in model.moments:
            classes = model.undivided_classes(m)
            for j in model.agents:
                blocks = model.choice[(m, j)]
                assert all(blocks)
                assert sum(len(b) for b in blocks) == len(model.H[m])
                assert frozenset().union(*blocks) == set(model.H[m])
                for b in blocks:
                    assert all(c <= b or not (c & b) for c in classes)
                if len(classes) == 1:
                    assert blocks == (frozenset(model.H[m]),)


def test_independence_brute_force(generated):
    for model in generated:
        for m in model.moments:
            per_agent = [model.choice[(m, j)] for j in model.agents]
            for selection in itertools.product(*per_agent):
                assert frozenset.intersection(*selection)


def test_every_constraint_name_is_known():
    assert len(CONSTRAINTS) == 11
    assert len(set(CONSTRAINTS)) == 11


def test_generator_degenerate_depth():
    model = gen_model(params(1, max_depth=1))
    assert model.moments == ("r",)
    assert not validate(model)


def test_valuation_atom(fork):
    assert fork.valuation["p"] == {("m", "l1"), ("l1", "l1")}
    assert "q" not in fork.valuation or not fork.valuation["q"]
    assert Atom("p").name == "p"
