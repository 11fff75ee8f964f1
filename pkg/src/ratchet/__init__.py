"""Quantum-resonance ratchets on a free-falling momentum ladder.

The package simulates periodically kicked atoms whose quasimomentum is
conserved, so each atom lives on a discrete ladder p = n + beta. It covers
the resonant directed-current regime, its spatial-asymmetry diagnostics,
Bragg-pulse preparation of the initial superpositions, and the
one-parameter scaling law that holds slightly off resonance.
"""

from .classical import (
    ClassicalEnsemble,
    ClassicalParams,
    ScalingPoint,
    ratchet_ensemble,
    ratchet_initial_state,
    scaled_momentum_classical,
    scaled_momentum_quantum,
    scaled_momentum_quantum_scan,
    scaling_function,
    scaling_function_grid,
    scaling_function_map,
)
from .evolve import (
    AliasingError,
    KickSchedule,
    apply_kick,
    apply_kick_bessel,
    apply_kick_grid,
    free_evolve,
    kick_kernel,
    run_schedule,
)
from .harness import SCENARIOS, ConfigError, ExperimentConfig, run_scenario
from .observe import (
    RatchetTrace,
    dispersion_trace,
    effective_force,
    effective_force_missing_state,
    effective_force_signed,
    mean_momentum,
    mean_momentum_squared,
    momentum_variance,
)
from .prep import BraggPlan, BraggPulse, apply_bragg, plan_equal_superposition, plan_superposition
from .state import (
    LadderState,
    NoPeakError,
    SpatialProfile,
    block_bounds,
    consecutive_state,
    fwhm,
    make_superposition,
    plane_wave,
    ratchet_state,
    spatial_profile,
)
from .units import LabUnits

__all__ = [
    "AliasingError",
    "BraggPlan",
    "BraggPulse",
    "ClassicalEnsemble",
    "ClassicalParams",
    "ConfigError",
    "ExperimentConfig",
    "KickSchedule",
    "LabUnits",
    "LadderState",
    "NoPeakError",
    "RatchetTrace",
    "SCENARIOS",
    "ScalingPoint",
    "SpatialProfile",
    "apply_bragg",
    "apply_kick",
    "apply_kick_bessel",
    "apply_kick_grid",
    "block_bounds",
    "consecutive_state",
    "dispersion_trace",
    "effective_force",
    "effective_force_missing_state",
    "effective_force_signed",
    "free_evolve",
    "fwhm",
    "kick_kernel",
    "make_superposition",
    "mean_momentum",
    "mean_momentum_squared",
    "momentum_variance",
    "plan_equal_superposition",
    "plan_superposition",
    "plane_wave",
    "ratchet_ensemble",
    "ratchet_initial_state",
    "ratchet_state",
    "run_schedule",
    "run_scenario",
    "scaled_momentum_classical",
    "scaled_momentum_quantum",
    "scaled_momentum_quantum_scan",
    "scaling_function",
    "scaling_function_grid",
    "scaling_function_map",
    "spatial_profile",
]
