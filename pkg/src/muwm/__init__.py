"""Exact construction, search and verification of mutually unbiased weighing matrices."""
from .bounds import line_set_bound, muw_upper_bound, table1_report, weight_specific_bound
from .codes import (SignMatrixFamily, check_linearity, decode_hex_family, identity_extension_check,
                    verify_flat_biangular_family, weight_distribution)
from .constructions import (canonical, direct_sum, direct_sum_sets, load_dataset, prime_muhm,
                            weight3_tight_family)
from .cyclotomic import CycInt
from .errors import (InvalidArgument, MuwmError, ParseError, StructureMismatch, Unsupported, Verdict,
                     VerificationFailed)
from .search import SearchConfig, SearchResult, candidate_rows, search_max_muw
from .structure import block_structure, blockwise_unbiased, decompose
from .wmatrix import (MUWSet, UnitWeighingMatrix, dephase, gram, verify_mutually_unbiased,
                      verify_unbiased, verify_weighing)

__version__ = "0.1.0"

__all__ = [
    "CycInt",
    "InvalidArgument",
    "MUWSet",
    "MuwmError",
    "ParseError",
    "SearchConfig",
    "SearchResult",
    "SignMatrixFamily",
    "StructureMismatch",
    "UnitWeighingMatrix",
    "Unsupported",
    "Verdict",
    "VerificationFailed",
    "block_structure",
    "blockwise_unbiased",
    "candidate_rows",
    "canonical",
    "check_linearity",
    "decode_hex_family",
    "decompose",
    "dephase",
    "direct_sum",
    "direct_sum_sets",
    "gram",
    "identity_extension_check",
    "line_set_bound",
    "load_dataset",
    "muw_upper_bound",
    "prime_muhm",
    "search_max_muw",
    "table1_report",
    "verify_flat_biangular_family",
    "verify_mutually_unbiased",
    "verify_unbiased",
    "verify_weighing",
    "weight3_tight_family",
    "weight_distribution",
    "weight_specific_bound",
]
