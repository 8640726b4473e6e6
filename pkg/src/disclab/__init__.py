"""Combinatorial and vector discrepancy: exact enumeration, SDP upper bounds,
dual certificates, and the majorization argument that caps vector
discrepancy at 1 for matrices with unit-bounded columns."""

__version__ = "0.1.0"

from .brute import SignColoring, disc_brute, disc_value
from .dual import (
    DualCertificate,
    ProofTrace,
    Witness,
    extract_witness,
    search_certificate,
    theorem_trace,
    verify_certificate,
)
from .instances import gen_arithmetic_progressions, gen_beck_fiala, gen_gaussian_unit, gen_tight
from .rounding import round_hyperplane
from .sdp import PrimalSolution, SolverConfig, solve_vecdisc

__all__ = [
    "DualCertificate",
    "PrimalSolution",
    "ProofTrace",
    "SignColoring",
    "SolverConfig",
    "Witness",
    "disc_brute",
    "disc_value",
    "extract_witness",
    "gen_arithmetic_progressions",
    "gen_beck_fiala",
    "gen_gaussian_unit",
    "gen_tight",
    "round_hyperplane",
    "search_certificate",
    "solve_vecdisc",
    "theorem_trace",
    "verify_certificate",
]
