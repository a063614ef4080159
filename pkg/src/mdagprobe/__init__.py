"""pDAG/mDAG calculus: reduction, node splitting, structural dominance and probing-scheme shadows."""

from .dsep import DsepQuery, ci_holds, d_separated, latent_free_witness
from .graph import (
    INPUT,
    LATENT,
    VISIBLE,
    GraphError,
    Mdag,
    Pdag,
    SimplicialComplex,
    ThreeMdag,
    ThreePdag,
    ValidationReport,
    closure,
    is_temporally_consistent,
    validate,
)
from .order import (
    HasseDiagram,
    MdagCatalog,
    dominance_matrix,
    enumerate_complexes,
    enumerate_directed,
    enumerate_mdags,
    hasse,
    structurally_dominates,
    to_dot,
)
from .reduction import (
    ReductionTrace,
    canonical_pdag,
    exog_all,
    exogenize,
    lnodes_to_faces,
    re_reduce,
    remove_redundant,
    replay,
)
from .swig import check_commutation, convert_i_to_v, flat, sharp, split, split_subset

__version__ = "0.1.0"

__all__ = [
    "INPUT",
    "LATENT",
    "VISIBLE",
    "DsepQuery",
    "GraphError",
    "HasseDiagram",
    "Mdag",
    "MdagCatalog",
    "Pdag",
    "ReductionTrace",
    "SimplicialComplex",
    "ThreeMdag",
    "ThreePdag",
    "ValidationReport",
    "canonical_pdag",
    "check_commutation",
    "ci_holds",
    "closure",
    "convert_i_to_v",
    "d_separated",
    "dominance_matrix",
    "enumerate_complexes",
    "enumerate_directed",
    "enumerate_mdags",
    "exog_all",
    "exogenize",
    "flat",
    "hasse",
    "is_temporally_consistent",
    "latent_free_witness",
    "lnodes_to_faces",
    "re_reduce",
    "remove_redundant",
    "replay",
    "sharp",
    "split",
    "split_subset",
    "structurally_dominates",
    "to_dot",
    "validate",
]
