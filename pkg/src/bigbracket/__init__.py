"""Exact big-bracket calculus for quasi-Lie bialgebroids and twisted Poisson structures."""
from pathlib import Path

from .supercore import (
    Bidegree,
    BigBracketError,
    DegreeError,
    Family,
    Generator,
    GeneratorSpace,
    Monomial,
    PreconditionError,
    StructuralError,
    SuperPoly,
    mul,
    normalize_monomial,
    partial_derivative,
    project_bidegree,
    right_derivative,
)
from .symplectic import HamiltonianFlow, NonNilpotentError, exp_flow, legendre, poisson_bracket

__version__ = "0.1.0"

FIXTURES = Path(__file__).with_name("fixtures")

__all__ = [
    "Bidegree",
    "BigBracketError",
    "DegreeError",
    "Family",
    "Generator",
    "GeneratorSpace",
    "Monomial",
    "PreconditionError",
    "StructuralError",
    "SuperPoly",
    "mul",
    "normalize_monomial",
    "partial_derivative",
    "project_bidegree",
    "right_derivative",
    "HamiltonianFlow",
    "NonNilpotentError",
    "exp_flow",
    "legendre",
    "poisson_bracket",
    "FIXTURES",
]
