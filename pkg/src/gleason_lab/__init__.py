"""Numerical and symbolic tools for measures on lattices of subspaces."""

__version__ = "0.1.0"

from .config import DEFAULT_TOL, Tolerances, get_tol, set_tol
from .extmeasures import (
    ExtMeasure,
    decide_sigma_additive,
    eval_ext,
    not_sub_gea_demo,
    oplus,
    parse_ext_measure,
)
from .forms import FrameFunction, MatrixForm, frame_weight, polarize_recover
from .gea import FiniteGEAModel, check_axioms, derived_order, is_sub_gea
from .hilbert import HermitianOp, Subspace
from .measures import GleasonMeasure, check_additivity, check_regularity, eval_measure
from .reports import CheckRecord
from .sequences import classify_frame_type, classify_summability, parse_seq, rearrange_to_target
from .sobolev import Grid, boundary_blowup, build_forms, chain_report, nikodym_demo

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "Tolerances",
    "get_tol",
    "set_tol",
    "ExtMeasure",
    "decide_sigma_additive",
    "eval_ext",
    "not_sub_gea_demo",
    "oplus",
    "parse_ext_measure",
    "FrameFunction",
    "MatrixForm",
    "frame_weight",
    "polarize_recover",
    "FiniteGEAModel",
    "check_axioms",
    "derived_order",
    "is_sub_gea",
    "HermitianOp",
    "Subspace",
    "GleasonMeasure",
    "check_additivity",
    "check_regularity",
    "eval_measure",
    "CheckRecord",
    "classify_frame_type",
    "classify_summability",
    "parse_seq",
    "rearrange_to_target",
    "Grid",
    "boundary_blowup",
    "build_forms",
    "chain_report",
    "nikodym_demo",
]
