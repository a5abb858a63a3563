"""Generalized permutations, suspension data and Rauzy-Veech induction for
quadratic and abelian differentials, with certified boundary witnesses."""

from .errors import BudgetExceeded, RauzyError, Reducible, VerificationFailure
from .genperm import GenPerm, Move, apply_move, format_perm, parse, reduce, regular_symbols
from .suspension import SuspensionDatum, Vec, check_suspension, in_D, is_irreducible, witness_suspension
from .dynamics import G, H, Rot180, act, half_turn, induct
from .surface import StratumSignature, parse_stratum, stratum
from .classes import ClassGraph, census, rauzy_class
from .boundary import connectivity_report, d_path, rauzy_connect, s_connect

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "RauzyError", "Reducible", "VerificationFailure",
    "GenPerm", "Move", "apply_move", "format_perm", "parse", "reduce", "regular_symbols",
    "SuspensionDatum", "Vec", "check_suspension", "in_D", "is_irreducible", "witness_suspension",
    "G", "H", "Rot180", "act", "half_turn", "induct",
    "StratumSignature", "parse_stratum", "stratum",
    "ClassGraph", "census", "rauzy_class",
    "connectivity_report", "d_path", "rauzy_connect", "s_connect",
]
