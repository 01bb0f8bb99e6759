"""Pauli channel simulation, stabilizer-cover tomography, and lower-bound
instance verification.

See README.md for the index convention (idx = x + d*z) that every vector,
label, and file format in this package shares.
"""

from .pauli import (
    DensityMatrix,
    PauliOperator,
    basis_state,
    conjugate_density,
    density_matrix,
    maximally_mixed,
    pauli_multiply,
    pauli_to_matrix,
    random_density_matrix,
    random_unit_vector,
    symplectic_product,
)
from .gf2 import FieldSpec, GF2Matrix, field_spec, gf2_det, gf2_matrix, gf2_rank, gf2n_mul, structure_matrices
from .cover import (
    StabilizerGroup,
    StabilizerMeasurement,
    build_cover,
    build_measurement,
    coset_representatives,
    group_elements,
    group_from_generators,
)
from .channel import (
    ChannelSequence,
    EigenvalueVector,
    PauliChannel,
    UnitaryIntertwiner,
    apply_channel,
    apply_sequence,
    diamond_distance,
    eigenvalues,
    identity_channel,
    inverse_transform,
    load_channel,
    make_channel,
    random_channel,
    save_channel,
    symplectic_transform,
    tv_distance,
    uniform_channel,
)
from .measurement import (
    OutcomeDistribution,
    SampleBatch,
    born_distribution,
    induced_group_distribution,
    sample_outcomes,
)
from .tomography import (
    LearnerState,
    TomographyConfig,
    estimate_group_eigenvalues,
    learn_pauli_channel,
    project_to_simplex,
    reconstruct_distribution,
    required_samples,
)
from .hard_instances import (
    HardInstanceSpec,
    LemmaViolationError,
    SeparationReport,
    bias_value,
    channel_from_spec,
    exact_second_moment,
    fano_bound,
    make_matching,
    multiuse_second_moment_mc,
    povm_second_moment_check,
    random_unital_intertwiner,
    sample_hard_channel,
    separation_statistics,
)
from .rng import derive_stream, make_generator

__version__ = "0.1.0"
