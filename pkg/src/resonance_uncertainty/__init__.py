"""Resonance states of finite-range potentials and their uncertainty products.

Units: hbar = 2m = 1, so ``E = k**2``.
"""

from .expectation import (
    OPERATORS,
    PRESCRIPTIONS,
    ExpectationValue,
    UnsupportedOperator,
    UnsupportedOrder,
    correction_factors,
    expectation,
    expval_berggren,
    expval_surface,
    interaction_integral,
    interior_moment,
    regularization_tail,
    tail,
)
from .poles import (
    ANTIBOUND,
    BOUND,
    RESONANCE_IMPROPER,
    RESONANCE_PROPER,
    ComplexPole,
    ContinuityBreak,
    DerivativeVanished,
    DivergedToInfinity,
    NoConvergence,
    PoleError,
    SeedOutOfQuadrant,
    Trajectory,
    asymptotic_seed_delta,
    char_fn_delta,
    char_fn_rect,
    characteristic_residual,
    classify,
    find_poles,
    mirror_poles,
    newton_refine,
    track_poles,
    write_trajectory_csv,
)
from .potentials import DeltaShellPotential, Geometry, RectangularBarrier, evaluate_potential, make_model
from .states import (
    ExpansionCoefficients,
    GridTooCoarse,
    InvalidPole,
    ModelMismatch,
    QuadratureGrid,
    ResonanceState,
    build_state,
    build_states,
    closure_residual,
    continuity_residuals,
    decay_width_residual,
    eval_state,
    expand,
    normalization_residual,
    overlap,
    overlap_matrix,
    quadrature_grid,
    reconstruct,
    time_factor,
)
from .uncertainty import (
    UncertaintyReport,
    ValidityFlags,
    classify_validity,
    hamiltonian_dispersion,
    infinite_wall_reference,
    uncertainty_product,
)

__version__ = "0.1.0"
