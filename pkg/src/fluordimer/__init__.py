"""Resonance fluorescence of two dipole-dipole coupled J=1/2 <-> J=1/2 atoms."""

from .atomic import DriveField, Geometry, dipole_moment, rabi_frequency, transition_operator
from .coupling import (
    CouplingTable,
    GroupMask,
    build_coupling_table,
    chi_tensor,
    classify_group,
    spvc_constant,
    tpvc_constants,
)
from .liouvillian import (
    DegenerateSteadyStateError,
    build_hamiltonian,
    build_liouvillian,
    eigenvalues,
    partial_trace,
    steady_state,
    time_evolve,
)
from .spectrum import (
    SpectrumTermFlags,
    SpectrumTrace,
    coherent_intensity,
    correlation_transform,
    decompose_spectrum,
    incoherent_pi_spectrum,
)

__version__ = "0.1.0"
