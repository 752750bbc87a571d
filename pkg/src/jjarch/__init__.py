"""Josephson-junction qubits, their couplings and a resonator-based quantum memory.

Submodules
----------
spectral   dense eigensolver, phase grids, unitary evolution
qubits     phase, charge and flux qubit Hamiltonians and spin forms
coupling   capacitive, inductive, SQUID and transformer couplings
resonator  junction-resonator dynamics (exact, RWA, dressed-state PT)
memory     store/retrieve protocol, fidelity and schedule optimization
cli        command-line interface
"""

from .errors import (
    BoundsInfeasible,
    CutoffTooSmall,
    GridTooCoarse,
    GroundLevelCrossing,
    JJArchError,
    LevelsUnbound,
    LinearRangeWarning,
    NonHermitian,
    NoWell,
    OutOfLinearRange,
    RegimeViolation,
    SingleWell,
    SmallDenominator,
)
from .memory import PulseSchedule, Segment, optimize_schedule, run_memory, rwa_schedule, sweep_fidelity
from .qubits import JunctionParams, build_charge_qubit, build_flux_qubit, build_phase_qubit
from .resonator import ResonatorSystem, amplitudes, dressed_propagator, dressed_states
from .spectral import Spectrum, diagonalize, evolve

__version__ = "0.1.0"
