"""Kitaev chain with imbalanced p-wave pairing.

Library for the non-Hermitian Kitaev chain in which pair creation and
annihilation carry unequal strengths: complex quasiparticle spectra, the
exact phase diagram, the biorthogonal extended Zak phase, exceptional
points, and Majorana zero modes of the open chain.
"""

from .biortho import (
    Angles,
    Band,
    BiorthoEigensystem,
    PhaseDomainError,
    ZakResult,
    angles,
    berry_connection,
    connection_loop_integral,
    eigensystem,
    transport_frame,
    wilson_loop_total,
    zak_phase,
)
from .bogoliubov import (
    BogoliubovCoefficients,
    GroundStateEnergy,
    LevelKind,
    coefficients,
    ground_state_energy,
    symmetry_indicator,
)
from .model import (
    Dispersion,
    DVector3,
    ModelParams,
    build_bloch,
    d_vector,
    dispersion,
    hermitian_counterpart_bloch,
    radicand,
    similarity_transform,
)
from .numerics import (
    DenseHermitian,
    EigenDecomposition,
    NonConvergenceError,
    eig2_complex,
    eigh,
    principal_sqrt,
    singular_values_2x2,
)
from .phases import (
    CriticalMomenta,
    EpKind,
    MinGapResult,
    PhaseKind,
    PhaseLabel,
    SurfaceSample,
    boundary_surfaces,
    broken_symmetry_test,
    classify,
    critical_momenta,
    ep_character,
    min_gap,
)
from .realspace import (
    AnalyticCaseError,
    EdgeProfile,
    OpenChainSystem,
    ZeroModeKind,
    ZeroModeVector,
    build_system,
    canonical_bracket,
    canonical_zero_modes,
    edge_states,
    isospectral_check,
    kernel_overlap,
    majorana_bracket,
    omega_constants,
    open_spectrum,
    similarity_scaling,
    zero_mode_f,
)

__all__ = [name for name in dir() if not name.startswith("_")]
