"""Exact discrete causal models over pDAGs and their split graphs."""

from .reconstruct import MissingPatternError, reconstruct_binary, reconstruct_marginal, reconstruct_value
from .simulate import (
    FullConditional,
    Mechanism,
    ModelError,
    Params,
    Pattern,
    ProbeDataset,
    Table,
    dataset_from_patterns,
    do_pattern_shadow,
    forward,
    full_conditional,
    generate_all_patterns,
    observational_shadow,
    random_cards,
    random_params,
    uniform_cards,
)
from .witness import (
    FEASIBLE,
    INFEASIBLE_COMMON_ANCESTOR,
    INFEASIBLE_DCONNECTION,
    UNDECIDED,
    DominanceCertificate,
    Verdict,
    Witness,
    certify_infeasible,
    chain_construction,
    conditional_contrast,
    copy_construction,
    dominance_witness,
    verify_realization,
    visible_mediaries,
)

__all__ = [
    "FEASIBLE",
    "INFEASIBLE_COMMON_ANCESTOR",
    "INFEASIBLE_DCONNECTION",
    "UNDECIDED",
    "DominanceCertificate",
    "FullConditional",
    "Mechanism",
    "MissingPatternError",
    "ModelError",
    "Params",
    "Pattern",
    "ProbeDataset",
    "Table",
    "Verdict",
    "Witness",
    "certify_infeasible",
    "chain_construction",
    "conditional_contrast",
    "copy_construction",
    "dataset_from_patterns",
    "do_pattern_shadow",
    "dominance_witness",
    "forward",
    "full_conditional",
    "generate_all_patterns",
    "observational_shadow",
    "random_cards",
    "random_params",
    "reconstruct_binary",
    "reconstruct_marginal",
    "reconstruct_value",
    "uniform_cards",
    "verify_realization",
    "visible_mediaries",
]
