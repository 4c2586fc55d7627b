"""Hasse unit index of Q(sqrt(d), sqrt(-1)), 4-ranks of Cl+(8d), and the
moment combinatorics behind their distribution."""

__version__ = "0.1.0"

from .arith import FactoredInteger, chi_minus1, factor, is_prime, is_squarefree, jacobi, squarefree_range
from .families import FamilyTag, census, in_D2, in_DM2, in_SD
from .fourrank import FourRankReport, fourrank_fk, fourrank_fk_special, fourrank_oracle
from .forms import bqf_class_group
from .pell import TorsionExceptionError, cf_sqrt, hasse_unit_index, solve_norm_equation

__all__ = [
    "FactoredInteger",
    "FamilyTag",
    "FourRankReport",
    "TorsionExceptionError",
    "bqf_class_group",
    "census",
    "cf_sqrt",
    "chi_minus1",
    "factor",
    "fourrank_fk",
    "fourrank_fk_special",
    "fourrank_oracle",
    "hasse_unit_index",
    "in_D2",
    "in_DM2",
    "in_SD",
    "is_prime",
    "is_squarefree",
    "jacobi",
    "solve_norm_equation",
    "squarefree_range",
]
