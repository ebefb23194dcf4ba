"""Bound states, Stark shifts, ionization rates and polarizabilities of a
one-dimensional delta-function atom next to an impenetrable wall."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BOHR_NM,
    HARTREE_EV,
    ISOLATED,
    AtomConfig,
    BoundState,
    ConfinedAtomError,
    FieldConfig,
    NoBoundStateError,
    QuadratureError,
    RootNotFoundError,
    find_root_bracketed,
    integrate_adaptive,
)
from .bound_state import solve_bound_state, supports_bound_state, wavefunction  # noqa: E402
from .dalgarno_lewis import (  # noqa: E402
    Psi1,
    dipole_coefficient,
    solve_psi1,
    stark_shift_exact,
    static_polarizability,
)
from .fowler import DynamicResponse, channel_wavevector, dynamic_polarizability, solve_channel  # noqa: E402
from .resonance import (  # noqa: E402
    ResonanceResult,
    asymptotic_ionization_rate,
    asymptotic_stark_shift,
    determinant,
    scaled_variable,
    solve_resonance,
)
from .spectral_oracle import (  # noqa: E402
    SpectralModel,
    build_hamiltonian,
    dynamic_alpha_oracle,
    spectral_model,
    static_alpha_oracle,
)
