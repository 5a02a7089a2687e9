"""Holevo capacity, entanglement of formation and log-negativity for finite channels."""

from .quantum import (
    DensityMatrix,
    KrausChannel,
    PureEnsemble,
    PureState,
    StinespringDilation,
    SubspaceBasis,
    apply_channel,
    channel_from_subspace,
    choi_matrix,
    haar_random_pure,
    maximally_entangled,
    random_density,
    stinespring_from_kraus,
)
from .measures import (
    holevo_information,
    log_negativity,
    min_output_entropy,
    pure_entanglement,
    shannon_entropy,
    von_neumann_entropy,
)
from .eof import EofResult, eof_convex_roof, eof_symmetric, eof_wootters, min_subspace_entanglement
from .capacity import (
    CapacityResult,
    CostConstraint,
    DilationCheck,
    InfeasibleError,
    capacity_via_dilation,
    constrained_capacity,
    covariant_capacity,
    holevo_capacity,
)
from .families import (
    DepolarizingParams,
    PauliParams,
    antisym_mixed_state,
    antisym_subspace,
    depolarizing_channel,
    depolarizing_smin,
    identity_channel,
    pauli_channel,
    pauli_ec_closed_form,
    pauli_states,
    random_admissible_pauli,
    tensor_channel,
    vdc_family,
    vdc_subspace,
    weyl_basis,
)
from .gap import (
    GapRecord,
    gap_condition,
    gap_consistency_check,
    gap_polynomial,
    gap_region_scan,
    gap_trace_norm,
    superadditivity_search,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
