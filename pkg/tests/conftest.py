import pytest

from jstit.harness import EvidenceMode, GenParams, gen_model
from jstit.model import load_model

FORK = """
agents: j
moments: m l1 l2
order: m<l1 m<l2
choice: m j : {l1} {l2}
val: p @ m/l1 l1/l1
"""


def params(seed, **kw):
    kw.setdefault("evidence_mode", EvidenceMode.EVERYTHING if seed % 2 == 0 else EvidenceMode.SPARSE_CLOSED)
    kw.setdefault("extra_re_pairs", seed % 3)
    return GenParams(seed=seed, **kw)


@pytest.fixture
def fork():
    return load_model(FORK)


@pytest.fixture(scope="session")
def generated():
    """Forty generated models covering both evidence modes and extra Re pairs."""
    return [gen_model(params(s)) for s in range(40)]
