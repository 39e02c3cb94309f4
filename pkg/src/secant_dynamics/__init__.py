"""Dynamics of the secant root-finding method viewed as a plane map."""

from .cycle import CycleReport, chain_product, eig2
from .dynamics import (
    GOLDEN_QUADRUPLE,
    OrbitOutcome,
    construct_period4,
    iterate_orbit,
    refine_cycle,
    search_periodic,
    verify_period4,
)
from .errors import SecantError
from .focal import FocalPoint, CurveGerm, focal_points, image_tangent_of_germ, kappa_coefficient, point_to_slope, singular_slopes, slope_to_point, transversality
from .poly import Polynomial, RootList, hermite_interpolate, hermite_newton, q_eval, q_partials, real_roots
from .render import BasinGrid, RenderConfig, classify_pixel, read_ppm, render, write_ppm
from .secant import SingularClass, classify_singular, jacobian, newton_step, secant_step
from .torus import TorusPoint, chart_decode, chart_encode, critical_three_cycle, extended_jacobian, extended_step

__version__ = "0.1.0"
