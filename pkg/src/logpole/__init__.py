"""Quasi-modes for a Schroedinger operator with a ``|log r|^2 / r^2`` pole.

The package builds the frequency ladder, the singular radial potential and
the concentrating quasi-modes, then checks their estimates numerically.
"""

from .errors import ConfigurationError, DomainError, LogpoleError, NumericalError
from .jets import Jet
from .kernel import BumpSpec, eval_b, eval_chi, eval_scaled_b, eval_scaled_y, eval_y, ode_residual
from .ladder import (
    FrequencyProfile,
    Ladder,
    build_ladder,
    check_equiv_q,
    choose_M,
    choose_n0,
    lambda_of_level,
    log_lambda_of_level,
    q_of_lambda,
)
from .potential import LevelWindow, PotentialModel, sandwich_report
from .quadrature import NormRequest, graph_norm_P, holder_volume_check, integrate, lp_norm
from .quasimode import QuasiMode

__version__ = "0.1.0"

__all__ = [
    "BumpSpec",
    "ConfigurationError",
    "DomainError",
    "FrequencyProfile",
    "Jet",
    "Ladder",
    "LevelWindow",
    "LogpoleError",
    "NormRequest",
    "NumericalError",
    "PotentialModel",
    "QuasiMode",
    "build_ladder",
    "check_equiv_q",
    "choose_M",
    "choose_n0",
    "eval_b",
    "eval_chi",
    "eval_scaled_b",
    "eval_scaled_y",
    "eval_y",
    "graph_norm_P",
    "holder_volume_check",
    "integrate",
    "lambda_of_level",
    "log_lambda_of_level",
    "lp_norm",
    "ode_residual",
    "q_of_lambda",
    "sandwich_report",
]
