"""Exact linear real arithmetic: FMplex search and elimination, Fourier-Motzkin and simplex."""

from .core import (
    LinearConstraint,
    PartialUnsat,
    Relation,
    Sat,
    SearchStats,
    TrackedSystem,
    Unknown,
    Unsat,
    check_farkas_certificate,
)
from .fm import fm_check, fm_step
from .fmplex import fmplex_elim, fmplex_qe, restricted_projection
from .oracle import enumerate_basic_solutions
from .parser import parse_file, parse_plain, parse_smtlib
from .preprocess import preprocess
from .search import fmplex_sat
from .simplex import simplex_check
from .solver import solve_constraints

__all__ = [
    "LinearConstraint",
    "PartialUnsat",
    "Relation",
    "Sat",
    "SearchStats",
    "TrackedSystem",
    "Unknown",
    "Unsat",
    "check_farkas_certificate",
    "enumerate_basic_solutions",
    "fm_check",
    "fm_step",
    "fmplex_elim",
    "fmplex_qe",
    "fmplex_sat",
    "parse_file",
    "parse_plain",
    "parse_smtlib",
    "preprocess",
    "restricted_projection",
    "simplex_check",
    "solve_constraints",
]
