"""Seeded generators for formula and axiom-instance corpora."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .proofs import AXIOMS, ALLOWED, axiom_instance
from .syntax import BOT, TOP, And, Box, Dia, Formula, Iff, Implies, Not, Or, Var


@dataclass(frozen=True)
class CorpusConfig:
    size: int = 50
    depth: int = 3
    n_modalities: int = 2
    n_vars: int = 2
    seed: int = 0
    leaf_prob: float = 0.25


def random_formula(rng: random.Random, depth: int, n_modalities: int = 2, n_vars: int = 2,
                   leaf_prob: float = 0.25) -> Formula:
    """A formula of modal/boolean depth at most ``depth``."""
    if depth == 0 or rng.random() < leaf_prob:
        r = rng.randrange(n_vars + 2)
        return TOP if r == n_vars else BOT if r == n_vars + 1 else Var(r)
    sub = lambda: random_formula(rng, depth - 1, n_modalities, n_vars, leaf_prob)  # noqa: E731
    c = rng.randrange(7)
    if c == 0:
        return Not(sub())
    if c < 5:
        return (And, Or, Implies, Iff)[c - 1](sub(), sub())
    k = rng.randrange(n_modalities)
    return (Box if c == 5 else Dia)(k, sub())


def formula_corpus(cfg: CorpusConfig = CorpusConfig()) -> list[Formula]:
    """``cfg.size`` distinct formulas, reproducible from ``cfg.seed``."""
    rng = random.Random(cfg.seed)
    seen: dict[Formula, None] = {}
    while len(seen) < cfg.size:
        f = random_formula(rng, cfg.depth, cfg.n_modalities, cfg.n_vars, cfg.leaf_prob)
        seen.setdefault(f, None)
    return list(seen)


def j_axiom_instances(count: int = 50, n_modalities: int = 2, seed: int = 0,
                      arg_depth: int = 1) -> list[tuple[str, Formula]]:
    """Instances of the J schemata (not tautologies) with small random arguments."""
    rng = random.Random(seed)
    schemata = sorted(ALLOWED["J"] - {"taut"})
    out = []
    while len(out) < count:
        rule = schemata[len(out) % len(schemata)]
        args = [random_formula(rng, arg_depth, n_modalities) for _ in range(AXIOMS[rule])]
        n = rng.randrange(n_modalities)
        m = None
        if rule in ("neg-intro", "j6", "j7"):
            if n_modalities < 2:
                continue
            n = rng.randrange(1, n_modalities)
            m = rng.randrange(n)
        out.append((rule, axiom_instance(rule, m, n, args)))
    return out
