"""Haar frames, dyadic Besov norms and Chui-Wang wavelets."""
from ._kernels import BACKEND
from .coeffs import CoeffArray
from .dyadic import (DyadicInterval, DyadicRational, ExactPiecewise, JumpList, indicator, inner_product,
                     lp_norm, step_function, total_variation)
from .families import (BumpProfile, SignVector, chirp_family, coherent_sum, geometric_staircase,
                       make_function, odd_extension, rademacher_family, staircase)
from .grid import GridFunction
from .haar import (HaarIndex, analyze, analyze_shifted, frame_coeffs, haar_atom, shifted_haar_atom,
                   synthesize)
from .norms import (BootstrapParams, NormReport, SmoothnessParams, b_norm, bootstrap_constant,
                    bootstrap_verify, bv_norm, dyadic_besov_norm, f_norm, frame_besov_norm,
                    frame_sobolev_norm, frame_tl_norm, ref_besov_norm, w1p_norm,
                    wavelet_besov_norm, wavelet_tl_norm)
from .splines import bspline, chui_wang_mother, cw_analyze, hat, refine_hat

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CoeffArray", "DyadicInterval", "DyadicRational", "ExactPiecewise", "JumpList",
    "indicator", "inner_product", "lp_norm", "step_function", "total_variation", "BumpProfile",
    "SignVector", "chirp_family", "coherent_sum", "geometric_staircase", "make_function",
    "odd_extension", "rademacher_family", "staircase", "GridFunction", "HaarIndex", "analyze",
    "analyze_shifted", "frame_coeffs", "haar_atom", "shifted_haar_atom", "synthesize",
    "BootstrapParams", "NormReport", "SmoothnessParams", "b_norm", "bootstrap_constant",
    "bootstrap_verify", "bv_norm", "dyadic_besov_norm", "f_norm", "frame_besov_norm",
    "frame_sobolev_norm", "frame_tl_norm", "ref_besov_norm", "w1p_norm", "wavelet_besov_norm",
    "wavelet_tl_norm", "bspline", "chui_wang_mother", "cw_analyze", "hat", "refine_hat",
]
