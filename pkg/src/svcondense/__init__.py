"""Exact analysis toolkit for semi-random bit sources.

Core pieces: exact distributions over bit strings (bitdist), SV and strong
SV source models (sv_models), Hamming-syndrome machinery (hamming), the
block condenser and its streaming form (condenser), the greedy
no-condenser attack (attacks), very-strong-extractor transformations
(extractors), the closed-form bound catalog (bounds), and brute-force
verification suites (verify).
"""

__version__ = "0.1.0"

from .bitdist import (
    BitString,
    JointDistribution,
    condition_on_prefix,
    conditional_bit_given_rest,
    l1_distance,
    min_entropy,
    pushforward,
    shannon_entropy,
)
from .sv_models import (
    PrefixAdversary,
    SVParams,
    iid_biased,
    is_strong_sv,
    is_sv,
    materialize,
    random_potential_strong_sv,
)
from .hamming import HammingCode
from .condenser import (
    CondenserMap,
    analyze_condenser,
    condense,
    condense_stream,
    imbalance_ratio,
    theoretical_rate,
)
from .attacks import attack_condenser, greedy_sv_for_set, verify_lemma_e1
from .extractors import (
    SeededMap,
    claim_bound_cond_extr,
    claim_bound_extr_cond,
    entropy_condenser_from_vse,
    pinsker_sandwich,
    strong_error,
    very_strong_error,
    vse_from_condenser,
)
from .bounds import EntropyReport, build_report

__all__ = [
    "BitString",
    "JointDistribution",
    "condition_on_prefix",
    "conditional_bit_given_rest",
    "l1_distance",
    "min_entropy",
    "pushforward",
    "shannon_entropy",
    "PrefixAdversary",
    "SVParams",
    "iid_biased",
    "is_strong_sv",
    "is_sv",
    "materialize",
    "random_potential_strong_sv",
    "HammingCode",
    "CondenserMap",
    "analyze_condenser",
    "condense",
    "condense_stream",
    "imbalance_ratio",
    "theoretical_rate",
    "attack_condenser",
    "greedy_sv_for_set",
    "verify_lemma_e1",
    "SeededMap",
    "claim_bound_cond_extr",
    "claim_bound_extr_cond",
    "entropy_condenser_from_vse",
    "pinsker_sandwich",
    "strong_error",
    "very_strong_error",
    "vse_from_condenser",
    "EntropyReport",
    "build_report",
]
