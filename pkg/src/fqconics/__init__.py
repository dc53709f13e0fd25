"""Conical Kakeya and Nikodym sets over odd-characteristic finite fields."""

from .conics import Conic, classify_conic2d, ellipse_parametrization
from .constructions import (
    WitnessedSet,
    build_degree2_kakeya,
    build_ellipse_pseudo_kakeya,
    build_parabolic_kakeya,
    lower_bounds,
    verify_conical_kakeya,
    verify_conical_nikodym,
    verify_elliptic_coverage,
)
from .field import field_for_order, make_field, quadratic_extension
from .poly import MultiPoly, UniPoly, evaluate, hasse_derivative, homogeneous_part, multiplicity_at
from .proofs import direction_coefficient, recover_missing_value, restrict_ellipse, restrict_hyperbola, restrict_parabola, run_trace
from .vanishing import vanishing_polynomial, vanishing_polynomial_with_multiplicity

__version__ = "0.1.0"
