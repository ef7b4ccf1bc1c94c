"""Coronal codes, angle sums and tight realizations for compact disc packings."""

from .codes import AngleSum, AngleSymbol, CoronalCode, angle_sum, canonicalize, downgrade, parse_code
from .realize import Realizer, eval_angle, eval_angle_sum, grad_angle_sum, partial_angle
from .sets import (
    CodeSet,
    EssentialWitness,
    bootstrap_ratio_check,
    check_essential_witness,
    extract_fundamental,
    is_fundamental,
    length_bound,
    search_essential_witness,
    shrink_essential,
)
from .solver import SolverConfig, SolveReport, TightSystem, residual, solve_center0_binary, solve_tight

__version__ = "0.1.0"
