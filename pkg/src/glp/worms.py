"""Worms and closed-fragment helpers."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .engine import EngineConfig, Verdict, decide_glp
from .syntax import (
    BINARY, BOT, TOP, Box, Dia, Formula, Iff, Implies, Not, Top, is_closed, max_modality,
)


@dataclass(frozen=True)
class Worm:
    """<a1><a2>...<ak>T; the empty word is T."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if any(a < 0 for a in self.letters):
            raise ValueError("worm letters are modality indices")

    def formula(self) -> Formula:
        f: Formula = TOP
        for a in reversed(self.letters):
            f = Dia(a, f)
        return f

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(f"<{a}>" for a in self.letters) + "T"


def is_worm(f: Formula) -> Worm | None:
    letters = []
    while isinstance(f, Dia):
        letters.append(f.k)
        f = f.sub
    return Worm(tuple(letters)) if isinstance(f, Top) else None


def worm_implies(a: Worm, b: Worm, cfg: EngineConfig = EngineConfig()) -> Verdict:
    return decide_glp(Implies(a.formula(), b.formula()), cfg)


def worms(max_len: int, letters: Sequence[int]) -> Iterator[Worm]:
    """All worms up to ``max_len`` by length, then lexicographically."""
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            yield Worm(w)


@dataclass(frozen=True)
class NormalForm:
    """Result of <0>-normalisation: ``worm`` is None for the bottom case."""

    worm: Worm | None
    verdict: Verdict

    @property
    def is_bottom(self) -> bool:
        return self.worm is None


@dataclass(frozen=True)
class NormalFormUnknown:
    bound: int


def normalize_dia0(f: Formula, length_bound: int = 6,
                   cfg: EngineConfig = EngineConfig()) -> NormalForm | NormalFormUnknown:
    """Find ``<0>f`` as ``F`` or as a worm starting with <0>.

    Tries ``F`` first, then worms <0>w by length up to ``length_bound``,
    each confirmed by the engine.
    """
    if not is_closed(f):
        raise ValueError("normalisation applies to variable-free formulas")
    d = Dia(0, f)
    top = max_modality(d) or 0
    cfg = cfg.widened(top)
    v = decide_glp(Not(d), cfg)
    if not v.is_invalid:
        return NormalForm(None, v)
    letters = range(top + 1)
    for tail in worms(length_bound - 1, letters):
        w = Worm((0, *tail.letters))
        v = decide_glp(Iff(d, w.formula()), cfg)
        if not v.is_invalid:
            return NormalForm(w, v)
    return NormalFormUnknown(length_bound)


def bar_projection(f: Formula, level: int) -> Formula:
    """Replace [level]B by T and <level>B by F, outermost first."""
    if not is_closed(f):
        raise ValueError("projection applies to variable-free formulas")

    def go(g: Formula) -> Formula:
        if isinstance(g, (Box, Dia)):
            if g.k == level:
                return TOP if isinstance(g, Box) else BOT
            return type(g)(g.k, go(g.sub))
        if isinstance(g, Not):
            return Not(go(g.sub))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        return g

    return go(f)
