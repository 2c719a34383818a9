"""Gaussian simulator for dual-rail cluster states on an optical spatial mode comb."""

from .blochmessiah import Decomposition, decompose, recompose
from .cluster import (
    DualRailSpec,
    GraphSpec,
    NotAGraphStateError,
    bipartite_graph,
    build_dual_rail,
    condition_on_homodyne,
    extract_graph,
    ideal_wire_graph,
    nullifier_residual,
    wire_witnesses,
    witness_pair,
)
from .comb import (
    LocalOscillator,
    ModeLabel,
    OverlapSpec,
    SpatialComb,
    amplify_comb,
    build_comb,
    lo_overlap,
    overlap_spec_from_alignment,
    pair_witnesses,
    synthesize_lo,
)
from .detection import (
    NoiseReport,
    ideal_epr_noise,
    measure_witness,
    misaligned_noise,
    squeezing_db,
)
from .elements import (
    AmplifierSpec,
    balanced_beamsplitter,
    beamsplitter,
    gain_to_squeezing,
    loss_channel,
    phase_shift,
    squeezing_to_gain,
    two_mode_squeezer,
)
from .gaussian import (
    GaussianState,
    SymplecticTransform,
    Witness,
    apply_symplectic,
    check_physicality,
    purity,
    symplectic_form,
    vacuum_state,
    witness_variance,
)

__version__ = "0.1.0"

__all__ = [
    "AmplifierSpec",
    "Decomposition",
    "DualRailSpec",
    "GaussianState",
    "GraphSpec",
    "LocalOscillator",
    "ModeLabel",
    "NoiseReport",
    "NotAGraphStateError",
    "OverlapSpec",
    "SpatialComb",
    "SymplecticTransform",
    "Witness",
    "amplify_comb",
    "apply_symplectic",
    "balanced_beamsplitter",
    "beamsplitter",
    "bipartite_graph",
    "build_comb",
    "build_dual_rail",
    "check_physicality",
    "condition_on_homodyne",
    "decompose",
    "extract_graph",
    "gain_to_squeezing",
    "ideal_epr_noise",
    "ideal_wire_graph",
    "lo_overlap",
    "loss_channel",
    "measure_witness",
    "misaligned_noise",
    "nullifier_residual",
    "overlap_spec_from_alignment",
    "pair_witnesses",
    "phase_shift",
    "purity",
    "recompose",
    "squeezing_db",
    "squeezing_to_gain",
    "symplectic_form",
    "synthesize_lo",
    "two_mode_squeezer",
    "vacuum_state",
    "wire_witnesses",
    "witness_pair",
    "witness_variance",
]
