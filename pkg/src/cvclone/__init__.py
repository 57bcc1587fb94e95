"""Continuous-variable Gaussian cloning machines, their limits, and a
squeezed-state QKD simulation with a cloning eavesdropper."""

from .cloners import (
    CloneReport,
    ClonerBuild,
    asymmetric_clone_channels,
    build_amplifier_cloner,
    build_circuit_cloner,
    build_ntom,
    canonical_cloner_transform,
    clone_output_state,
    concatenation_gap,
    fidelity_bound,
    run_cloner,
    squeezed_family_cloner,
    variance_bound,
)
from .components import (
    amplifier,
    beam_splitter,
    beam_splitter_5050,
    cv_cnot,
    dft_network,
    displacement,
    identity_transform,
    phase_rotation,
    squeezer,
)
from .errors import (
    CVCloneError,
    DimensionError,
    GridTooSmall,
    InvalidChannel,
    InvalidGain,
    InvalidNoise,
    InvalidShape,
    InvalidState,
    InvalidVariance,
    NoSqueezing,
)
from .grid import (
    DensityGrid,
    GridParams,
    WaveFunctionGrid,
    check_fourier_self_dual,
    clone_wave_function,
    coherent_wavefunction,
    grid_coherent_fidelity,
    momentum_moments,
    position_moments,
    reduced_density,
    squeezed_wavefunction,
)
from .measurement import (
    SampleBatch,
    estimate_mean_var,
    homodyne_sample,
    joint_measure_sample,
)
from .qkd import (
    InfoReport,
    ProtocolParams,
    RoundRecord,
    estimate_excess_noise,
    exclusion_check,
    info_ab,
    info_ae,
    max_key_rate,
    shannon_info,
    simulate_protocol,
)
from .states import (
    GaussianChannel,
    GaussianState,
    SymplecticTransform,
    apply_channel,
    apply_symplectic,
    coherent_fidelity,
    coherent_state,
    reduce_to_modes,
    squeezed_state,
    state_overlap,
    symplectic_form,
    tensor,
    vacuum_state,
    validate_uncertainty,
)
from .verify import run_verification

__version__ = "0.1.0"
