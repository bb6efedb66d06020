"""Chebyshev root-finding iteration: maps, fixed points, symmetry and basins."""
from .basins import (NONCONV, BasinRaster, ConnectivityReport, GridSpec, compute_basins,
                     connectivity, default_grid, imaginary_axis_analysis, immediate_basins,
                     julia_band, real_landmarks, real_line_analysis, unbounded_components)
from .estimator import ChebyshevBasins
from .fixpoints import (FixedPointRecord, attractors, critical_points, fixed_points,
                        multiplier, multiplier_at_infinity, postcritical_classify)
from .method import MethodBundle, MethodKind, build_method, chebyshev_map, newton_map
from .poly import (INF, FactoredPolynomial, Polynomial, PolynomialError, RationalMap,
                   RootFindingError, UnreducedMapError, reduce, roots)
from .render import Palette, default_palette, read_ppm, render_ppm
from .scaling import AffineMap, centroid, conjugacy_residual, normalize, two_roots_to_pm1
from .symmetry import (SymmetryGroup, SymmetryReport, julia_symmetry_detect, line_test,
                       poly_symmetry_group, symmetry_transport, translation_test)

__all__ = [
    "NONCONV", "BasinRaster", "ConnectivityReport", "GridSpec", "compute_basins",
    "connectivity", "default_grid", "imaginary_axis_analysis", "immediate_basins",
    "julia_band", "real_landmarks", "real_line_analysis", "unbounded_components",
    "ChebyshevBasins",
    "FixedPointRecord", "attractors", "critical_points", "fixed_points", "multiplier",
    "multiplier_at_infinity", "postcritical_classify",
    "MethodBundle", "MethodKind", "build_method", "chebyshev_map", "newton_map",
    "INF", "FactoredPolynomial", "Polynomial", "PolynomialError", "RationalMap",
    "RootFindingError", "UnreducedMapError", "reduce", "roots",
    "Palette", "default_palette", "read_ppm", "render_ppm",
    "AffineMap", "centroid", "conjugacy_residual", "normalize", "two_roots_to_pm1",
    "SymmetryGroup", "SymmetryReport", "julia_symmetry_detect", "line_test",
    "poly_symmetry_group", "symmetry_transport", "translation_test",
]
