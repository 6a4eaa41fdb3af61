"""Exact simulation of programmable quantum gate arrays."""
from .bell import BellOutcome, ZeroProbabilityBranch, bell_state, branch_bell, measure_bell
from .core import (
    TOL_ALG,
    TOL_NORM,
    KrausChannel,
    apply,
    apply_channel,
    equal_up_to_global_phase,
    inner_product,
    is_unitary,
    partial_trace,
    random_haar_unitary,
    tensor_product,
)
from .gates import GateName, controlled_select, gate, swap_via_cnots
from .progarray import (
    RunRecord,
    assemble_input,
    deterministic_array,
    encode_program,
    encode_program_channel,
    postselect,
    residual_correction,
    run_channel_postselect,
    run_once,
)
from .verify import (
    TOL_CERT,
    check_program_independence,
    extract_implemented_unitary,
    inner_product_identity,
    orthogonality_theorem_check,
    program_overlap,
    success_statistics,
)

__version__ = "0.1.0"
