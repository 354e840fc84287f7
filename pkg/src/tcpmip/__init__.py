"""Tensor complementarity problems solved through their mixed-integer reformulation."""

from .instances import gen_random, paper_examples, parse_instance, read_instance, write_instance
from .mip import (
    CertVariant,
    FeasCertificate,
    MipModel,
    MipPoint,
    alpha_upper_bound,
    build_mip,
    certificate_from_solution,
    check_certificate,
    check_mip_feasible,
    recover_solution,
)
from .model import (
    DiagonalStatus,
    DiagonalVerdict,
    Residuals,
    TcpInstance,
    diagonal_solve,
    residuals,
    scale_instance,
    scale_solution,
    trivial_check,
    verify,
)
from .solver import (
    Pattern,
    SolveOutcome,
    SolverConfig,
    SolveStatus,
    face_system,
    mip_point_of,
    solve,
    solve_pattern,
)
from .spectral import grid_oracle, lambda_max, lambda_min, solution_norm_bound, zeig_check
from .tensor import Tensor, apply_m1, form, inf_norm, is_diagonal, is_symmetric

__version__ = "0.1.0"

__all__ = [
    "CertVariant",
    "DiagonalStatus",
    "DiagonalVerdict",
    "FeasCertificate",
    "MipModel",
    "MipPoint",
    "Pattern",
    "Residuals",
    "SolveOutcome",
    "SolveStatus",
    "SolverConfig",
    "TcpInstance",
    "Tensor",
    "alpha_upper_bound",
    "apply_m1",
    "build_mip",
    "certificate_from_solution",
    "check_certificate",
    "check_mip_feasible",
    "diagonal_solve",
    "face_system",
    "form",
    "gen_random",
    "grid_oracle",
    "inf_norm",
    "is_diagonal",
    "is_symmetric",
    "lambda_max",
    "lambda_min",
    "mip_point_of",
    "paper_examples",
    "parse_instance",
    "read_instance",
    "recover_solution",
    "residuals",
    "scale_instance",
    "scale_solution",
    "solution_norm_bound",
    "solve",
    "solve_pattern",
    "trivial_check",
    "verify",
    "write_instance",
    "zeig_check",
]
