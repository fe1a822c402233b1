"""Exact modular arithmetic for polynomial solution certificates.

Construct polynomial solutions mod p^s of differential and difference
systems and verify every congruence as an exact polynomial identity.
"""

from .certificate import ResidualReport, SolutionCertificate
from .hyper import (
    HyperParams,
    construct_solution,
    independence_check,
    lambda_zero_sum,
    vanishing_check,
    verify_dynamical,
    verify_kz,
)
from .mpoly import MultiPoly
from .padic import NotAUnit, ParameterError, RamifiedElem, ResidueInt, RingParams
from .qkz import QkzParams, construct_qkz_solution, verify_qkz
from .sl2 import Sl2Params, TensorVector, construct_solution_sl2, verify_sl2
from .truncexp import degree_bound, exp_coefficients, trunc_exp_poly

__version__ = "0.1.0"

__all__ = [
    "HyperParams",
    "MultiPoly",
    "NotAUnit",
    "ParameterError",
    "QkzParams",
    "RamifiedElem",
    "ResidueInt",
    "ResidualReport",
    "RingParams",
    "Sl2Params",
    "SolutionCertificate",
    "TensorVector",
    "construct_qkz_solution",
    "construct_solution",
    "construct_solution_sl2",
    "degree_bound",
    "exp_coefficients",
    "independence_check",
    "lambda_zero_sum",
    "trunc_exp_poly",
    "vanishing_check",
    "verify_dynamical",
    "verify_kz",
    "verify_qkz",
    "verify_sl2",
]
