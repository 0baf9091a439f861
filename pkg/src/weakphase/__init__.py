"""Exponential-filter phase retrieval and optical weak measurement, cross-checked numerically."""

__version__ = "0.1.0"

from .wavefield import (
    Grid,
    SampledField,
    Spectrum,
    analytic_extension,
    centroid,
    dft,
    direct_dft,
    idft,
    momentum_spread,
    position_spread,
    translate,
)
from .zeros import ZeroSet, find_real_zeros, hadamard_eval, sine_model_final_state, zero_shift_factor
from .expfilter import (
    FilterSpec,
    HermitianObjectWarning,
    PhaseResult,
    apply_exp_filter,
    extended_modulus,
    log_ratio_D,
    reconstruct_object,
    retrieve,
    simulate_intensities,
    solve_phase,
)
from .polarization import JonesState, PauliOp, PolarizedSpectrum, pauli_expectation, rotate_polarization, weak_value
from .birefringence_sim import CrystalScenario, DisplacementReport, crystal_evolve, measure_displacement, post_select
from .direct_measure_sim import SliverScenario, operational_ratios, pinhole_weak_value, pointer_signals, scan_reconstruct
from .weakvalue_bridge import BridgeReport, bridge_residual, filter_ratio, position_weak_value
from .fieldio import load_field, save_field
from .presets import make_preset
