"""Bipartite qudit gate synthesis over the generalized controlled-X gate set.

Compiles controlled gates on a (2 x N) register and locally-diagonal gates on
an (M x N) register into GCX gates plus single-partite y/z rotations, verifies
the emitted circuits by matrix evaluation, and computes or bounds the operator
Schmidt rank via realignment SVD and explicit product-operator expansions.
"""

from .circuit import (
    Circuit,
    CountReport,
    Gate,
    control_phase_gate,
    count_gates,
    evaluate,
    gcx_gate,
    global_phase_gate,
    local_gate,
    optimize,
    parse,
    serialize,
    y_gate,
    z_gate,
)
from .controlled import (
    CanonicalCore2N,
    ControlledGateSpec,
    compile_core_2n,
    decompose_controlled_2n,
    synthesize_controlled_2n,
)
from .diagonal import (
    CanonicalCoreMN,
    DiagonalGateSpec,
    compile_core_mn,
    fit_core_mn,
    synthesize_diagonal_mn,
)
from .generators import (
    Generator,
    cnot,
    controlled_z_rotation_matrix,
    gcx_matrix,
    generator_matrix,
    rotation_matrix,
    x_generator,
    x_swap,
    y_generator,
    y_rotation_matrix,
    z_generator,
    z_rotation_matrix,
)
from .kak import KakFactorization, decompose_u3_form, extract_y_angles, kak_decompose
from .linalg import (
    NotUnitaryError,
    dist_up_to_global_phase,
    eig_unitary,
    is_unitary,
    kron,
    random_unitary,
    svd,
)
from .schmidt import (
    DiagonalExpansion,
    SchmidtReport,
    expand_core_2n,
    expand_core_2x2,
    expand_core_3x3,
    expand_core_mn_numeric,
    expansion_from_diagonal,
    realignment,
    schmidt_rank,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalCore2N",
    "CanonicalCoreMN",
    "Circuit",
    "ControlledGateSpec",
    "CountReport",
    "DiagonalExpansion",
    "DiagonalGateSpec",
    "Gate",
    "Generator",
    "KakFactorization",
    "NotUnitaryError",
    "SchmidtReport",
    "cnot",
    "compile_core_2n",
    "compile_core_mn",
    "control_phase_gate",
    "controlled_z_rotation_matrix",
    "count_gates",
    "decompose_controlled_2n",
    "decompose_u3_form",
    "dist_up_to_global_phase",
    "eig_unitary",
    "evaluate",
    "expand_core_2n",
    "expand_core_2x2",
    "expand_core_3x3",
    "expand_core_mn_numeric",
    "expansion_from_diagonal",
    "extract_y_angles",
    "fit_core_mn",
    "gcx_gate",
    "gcx_matrix",
    "generator_matrix",
    "global_phase_gate",
    "is_unitary",
    "kak_decompose",
    "kron",
    "local_gate",
    "optimize",
    "parse",
    "random_unitary",
    "realignment",
    "rotation_matrix",
    "schmidt_rank",
    "serialize",
    "svd",
    "synthesize_controlled_2n",
    "synthesize_diagonal_mn",
    "x_generator",
    "x_swap",
    "y_gate",
    "y_generator",
    "y_rotation_matrix",
    "z_gate",
    "z_generator",
    "z_rotation_matrix",
]
