"""Selberg-type integrals: combinatorics, exponent functionals, quadrature,
meromorphic continuation and identity checks."""
from .combinatorics import (RegionShape, bdf_value, catalan, enumerate_a_faces, enumerate_k_faces,
                            enumerate_sigma_tamari, enumerate_tamari)
from .continuation import (beta_continued, continue_1d, continue_s2, gamma_factorization,
                           i2_closed, regularized_s2, residue_series, s2_closed, s2_closed_poly,
                           selberg_closed)
from .errors import SelbergError
from .functionals import GenericParams, LaurentPoly, SymmetricParams, in_domain, star_functionals
from .quadrature import KERNEL, QuadSettings, contour_i2, df_quad, selberg_quad

__version__ = "0.1.0"

__all__ = [
    "RegionShape", "bdf_value", "catalan", "enumerate_a_faces", "enumerate_k_faces",
    "enumerate_sigma_tamari", "enumerate_tamari", "beta_continued", "continue_1d", "continue_s2",
    "gamma_factorization", "i2_closed", "regularized_s2", "residue_series", "s2_closed",
    "s2_closed_poly", "selberg_closed", "SelbergError", "GenericParams", "LaurentPoly",
    "SymmetricParams", "in_domain", "star_functionals", "KERNEL", "QuadSettings", "contour_i2",
    "df_quad", "selberg_quad",
]
