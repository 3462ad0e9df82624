"""Reduced rotation-group dynamics for rotating and meandering waves on a sphere.

The package integrates ``Adot = A hat(X^G(t, lambda))`` on SO(3) through the
algebra-valued Z-equation with closed-form BCH chaining, extracts primary and
lifted frequency vectors after a Hopf bifurcation, classifies the resulting
motion (rigid rotation, meander, resonant drift), locates orthogonal-drift
parameter branches, and generates tip trajectories with circle verification.
"""
from .bch import BchBranch, BchBreakdown, bch, bch_breakdown, bch_fold
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    FitError,
    GimbalLockError,
    IntegrationError,
    InternalInconsistency,
    IoError,
    RotwaveError,
    SingularityError,
)
from .flow import (
    EulerTrajectory,
    ForcingSignal,
    GroupTrajectory,
    IntegratorConfig,
    QTrajectory,
    SkewProductSystem,
    integrate_euler,
    integrate_group,
    integrate_skew_product,
    integrate_z_segment,
    stuart_landau,
)
from .hopf import (
    FrequencyReport,
    MotionClass,
    PeriodicPart,
    ResonanceClass,
    ResonanceKind,
    classify,
    classify_resonance,
    find_orthogonal_branch,
    lifted_frequency,
    periodic_part,
    primary_frequency,
)
from .scenarios import Frame, Scenario, available, build, verify_against_closed_form
from .so3 import (
    AngleAxis,
    BallClass,
    as_rotation,
    dexp_op,
    dexpinv_op,
    exp_rot,
    hat,
    hemisphere_sign,
    log_rot,
    q_map,
    rot_x,
    rot_y,
    rot_z,
    vee,
)
from .tip import CircleFit, TipTrack, fit_circle, tip_trajectory

__version__ = "0.1.0"

__all__ = [
    "AngleAxis",
    "BallClass",
    "BchBranch",
    "BchBreakdown",
    "BracketError",
    "CircleFit",
    "ConfigError",
    "DomainError",
    "EulerTrajectory",
    "FitError",
    "ForcingSignal",
    "Frame",
    "FrequencyReport",
    "GimbalLockError",
    "GroupTrajectory",
    "IntegrationError",
    "IntegratorConfig",
    "InternalInconsistency",
    "IoError",
    "MotionClass",
    "PeriodicPart",
    "QTrajectory",
    "ResonanceClass",
    "ResonanceKind",
    "RotwaveError",
    "Scenario",
    "SingularityError",
    "SkewProductSystem",
    "TipTrack",
    "as_rotation",
    "available",
    "bch",
    "bch_breakdown",
    "bch_fold",
    "build",
    "classify",
    "classify_resonance",
    "dexp_op",
    "dexpinv_op",
    "exp_rot",
    "find_orthogonal_branch",
    "fit_circle",
    "hat",
    "hemisphere_sign",
    "integrate_euler",
    "integrate_group",
    "integrate_skew_product",
    "integrate_z_segment",
    "lifted_frequency",
    "log_rot",
    "periodic_part",
    "primary_frequency",
    "q_map",
    "rot_x",
    "rot_y",
    "rot_z",
    "stuart_landau",
    "tip_trajectory",
    "vee",
    "verify_against_closed_form",
]
