"""Unit-equality superposition prover with a persistent equational library."""

from .term import App, Var, const, fn, to_str, unify, match
from .ordering import Comparison, Orientation, Precedence, make_ordering
from .clause import UnitClause, ClauseBag
from .saturation import ProverState, SaturationParams, Proof, Saturated, ResourceOut
from .library import KnowledgeBase, SmartMatchQuery, SmartMatchResult

__version__ = "0.1.0"

__all__ = [
    "App", "Var", "const", "fn", "to_str", "unify", "match",
    "Comparison", "Orientation", "Precedence", "make_ordering",
    "UnitClause", "ClauseBag",
    "ProverState", "SaturationParams", "Proof", "Saturated", "ResourceOut",
    "KnowledgeBase", "SmartMatchQuery", "SmartMatchResult",
]
