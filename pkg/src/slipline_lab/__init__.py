"""Closed-form plane perfect-plasticity fields, slip-line geometry, symmetry
algebra checks, and independent residual verification."""

from .core import (
    CARTESIAN,
    DEFAULT_K,
    POLAR,
    DomainError,
    FullStress,
    FunctionParam,
    Point2,
    SliplineError,
    StressState,
    YieldViolation,
    cart,
    components_to_levy,
    levy_to_components,
    polar,
    theta_cart_from_polar,
    theta_polar_from_cart,
)
from .catalog import (
    CharCoords,
    StressField,
    SubalgebraTag,
    acceptance_fields,
    build_field,
    nadai_cavity_field,
    nadai_channel_field,
    nadai_channel_singular_field,
    nadai_two_circles_field,
    nadai_vortex_field,
    prandtl_field,
    revuzhenko_field,
    simple_wave_field,
    spiral_field,
    spiral_simple_wave_field,
)

__version__ = "0.1.0"
