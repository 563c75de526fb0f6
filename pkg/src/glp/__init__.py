"""Polymodal provability logic GLP and its Kripke-complete companion J."""
from .engine import (
    EngineConfig, Invalid, NoCountermodelWithinCap, decide, decide_gl, decide_glp, decide_glps,
    decide_j, deduces,
)
from .semantics import KripkeModel, find_root, is_j_frame, satisfies
from .syntax import Formula, LogicId, Substitution, parse, parse_subst, to_str

__all__ = [
    "EngineConfig", "Invalid", "NoCountermodelWithinCap", "decide", "decide_gl", "decide_glp",
    "decide_glps", "decide_j", "deduces", "KripkeModel", "find_root", "is_j_frame", "satisfies",
    "Formula", "LogicId", "Substitution", "parse", "parse_subst", "to_str",
]
