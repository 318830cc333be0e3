"""Trace census of the monoid generated by [[1,0],[1,1]] and [[1,1],[0,1]],
with its asymptotics and the reduced quadratic irrationals it encodes."""

from .asymptotics import Constants, constants
from .census import CensusReport, census, psi_brute, psi_ev_formula, psi_odd_floorsum, psi_odd_formula
from .monoid import A, B, J, DecodeError, Mat2, matrix_to_word, word_to_matrix
from .quadratics import QuadIrr, build_quad_irr, enumerate_reduced, pi0, sandwich_check

__all__ = [
    "A", "B", "J", "Mat2", "DecodeError", "word_to_matrix", "matrix_to_word",
    "CensusReport", "census", "psi_brute", "psi_ev_formula", "psi_odd_formula", "psi_odd_floorsum",
    "Constants", "constants",
    "QuadIrr", "build_quad_irr", "enumerate_reduced", "pi0", "sandwich_check",
]
