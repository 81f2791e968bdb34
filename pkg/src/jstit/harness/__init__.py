from .demos import fmp_demo, prop1_demo, prop1_quotient
from .fuzz import soundness_fuzz
from .generate import EvidenceMode, GenParams, gen_model
from .mutations import MUTATIONS, mutation_suite

__all__ = [
    "EvidenceMode", "GenParams", "gen_model", "soundness_fuzz", "prop1_quotient", "prop1_demo",
    "fmp_demo", "MUTATIONS", "mutation_suite",
]
