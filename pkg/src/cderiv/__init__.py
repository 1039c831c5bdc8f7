"""Exact workbench for conformal (sigma, tau)- and (alpha, beta, gamma)-derivations
of finite Lie conformal superalgebras."""

from ._backend import BACKEND
from .cend import ConfMap, GroupSpec, Morphism, compose, gc_bracket, invert
from .gmod import Basis, Element, Parity, PolyMatrix
from .lcsa import Algebra, AlgebraError, builtin
from .poly import MPoly, Var
from .solver import DegreeBound, EquationKind, InteriorKind, Kind, SolutionSpace, saturation_scan, solve, solve_interior

__all__ = [
    "BACKEND",
    "DegreeBound",
    "EquationKind",
    "InteriorKind",
    "Kind",
    "SolutionSpace",
    "Algebra",
    "AlgebraError",
    "Basis",
    "ConfMap",
    "Element",
    "GroupSpec",
    "MPoly",
    "Morphism",
    "Parity",
    "PolyMatrix",
    "Var",
    "builtin",
    "compose",
    "gc_bracket",
    "invert",
    "saturation_scan",
    "solve",
    "solve_interior",
]
