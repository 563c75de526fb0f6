"""Arithmetical unifiability and admissibility, reduced to modal derivability."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import EngineConfig, Verdict, decide_glp, decide_glps
from .syntax import TOP, Box, Dia, Formula, Implies, Not, conj, max_modality
from .unify import language_size


class CriterionMismatch(AssertionError):
    """The two equivalent characterisations of unifiability disagreed."""


@dataclass(frozen=True)
class InferenceRule:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def max_modality(self) -> int | None:
        ms = [m for f in (*self.premises, self.conclusion) if (m := max_modality(f)) is not None]
        return max(ms, default=None)

    def __str__(self) -> str:
        from .syntax import to_str
        return "; ".join(map(to_str, self.premises)) + " / " + to_str(self.conclusion)


@dataclass(frozen=True)
class ArithAnswer:
    yes: bool
    basis: Verdict  # countermodel for a yes, cap note for a no
    cap_bounded: bool

    def __bool__(self) -> bool:
        return self.yes


def unifiability_query(f: Formula, n: int | None = None) -> Formula:
    """<n>T -> ~[0]f, where ``n`` defaults to the language size of ``f``."""
    if n is None:
        n = language_size(f)
    return Implies(Dia(n, TOP), Not(Box(0, f)))


def arith_unifiable(f: Formula, cfg: EngineConfig = EngineConfig(), cross_check: bool = False,
                    n: int | None = None) -> ArithAnswer:
    """Does some arithmetical realization make ``f`` provable?

    Yes iff GLP does not prove <n>T -> ~[0]f. With ``cross_check`` the
    equivalent GLPS test (GLPS does not prove ~[0]f) is run as well and
    must agree.
    """
    q = unifiability_query(f, n)
    v = decide_glp(q, cfg.widened(max_modality(q) or 0))
    ans = ArithAnswer(v.is_invalid, v, not v.is_invalid)
    if cross_check:
        other = decide_glps(Not(Box(0, f)), cfg)
        if other.is_invalid != ans.yes:
            raise CriterionMismatch(f"GLP and GLPS tests disagree on {f}")
    return ans


def arith_unifiable_glps(f: Formula, cfg: EngineConfig = EngineConfig()) -> ArithAnswer:
    """Unifiability via GLPS: yes iff GLPS does not prove ~[0]f."""
    v = decide_glps(Not(Box(0, f)), cfg)
    return ArithAnswer(v.is_invalid, v, not v.is_invalid)


def admissibility_query(rule: InferenceRule) -> Formula:
    return Implies(conj(Box(0, p) for p in rule.premises), Box(0, rule.conclusion))


def is_arith_admissible(rule: InferenceRule, cfg: EngineConfig = EngineConfig()) -> ArithAnswer:
    """Yes iff GLPS proves the conjunction of [0]premise -> [0]conclusion."""
    v = decide_glps(admissibility_query(rule), cfg)
    return ArithAnswer(not v.is_invalid, v, not v.is_invalid)


def rule_derivable(premises: Sequence[Formula], conclusion: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    """GLP |- conjunction of premises -> conclusion."""
    return decide_glp(Implies(conj(premises), conclusion), cfg)
