from .axioms import SCHEME_ORDER, is_instance, match_axiom
from .builder import ProofBuilder
from .corpus import corpus
from .proof import (
    Axiom, ConstantSpecification, FromCS, Line, MP, Mode, Nec, Proof, S4, Verdict,
    check_proof, format_proof, parse_cs, parse_proof,
)
from .s4elim import eliminate_s4

__all__ = [
    "SCHEME_ORDER", "match_axiom", "is_instance", "ProofBuilder", "corpus", "Axiom", "FromCS",
    "MP", "Nec", "S4", "Line", "Proof", "Mode", "Verdict", "ConstantSpecification",
    "check_proof", "format_proof", "parse_proof", "parse_cs", "eliminate_s4",
]
