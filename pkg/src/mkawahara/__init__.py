"""Periodic traveling waves of the modified Kawahara equation.

Construction of the explicit dnoidal wave family, spectral verification of
the linearized operator's hypothesis, the stability index, and direct
pseudospectral evolution for orbital-stability experiments.
"""

from .elliptic import (
    EllipticValues,
    complete_elliptic_E,
    complete_elliptic_K,
    csch,
    elliptic_derivatives,
    elliptic_values,
    jacobi_dn,
    jacobi_sn,
)
from .evolution import (
    BlowUpError,
    Etdrk4,
    EvolutionState,
    StabilityReport,
    TimeSeries,
    evolve,
    h2_norm,
    orbit_distance_rho,
    optimal_shift,
    stability_experiment,
    step,
)
from .spectrum import (
    OperatorMatrix,
    PropositionReport,
    SpectrumReport,
    apply_operator,
    assemble_operator,
    log_concavity_d2,
    low_spectrum,
    verify_proposition_criterion,
    zero_mode_residual,
)
from .stability import (
    IndexReport,
    q_functional,
    q_gradient,
    q_weights,
    scan_index,
    stability_index,
)
from .waves import (
    FunctionalValues,
    WaveParams,
    WaveProfile,
    build_wave_params,
    closed_form_F,
    closed_form_M,
    constant_limit_profile,
    dphi_dk,
    fourier_coefficients,
    functional_F,
    functional_G,
    functional_M,
    functional_P,
    ode_residual,
    param_derivatives,
    sample_profile,
)

__version__ = "0.1.0"
