"""Unifiers of [1]p and friends: Q-families, unifier and generality checks,
reflection ranks, and ground-unifier search."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from .engine import (
    EngineConfig, Verdict, decide, decide_glp,
)
from .proofs import q_k
from .syntax import (
    BOT, TOP, And, Bottom, Box, Dia, Formula, Iff, Implies, LogicId, Not, Or, Substitution, Top,
    Var, apply_subst, compose_subst, conj, max_modality, variables,
)


class UnifyError(RuntimeError):
    pass


# ------------------------------------------------------------------ families

QKINDS = ("q", "qbig", "qstar")


def q_big(n: int, p: Formula = Var(0)) -> Formula:
    """Q^n(p): conjunction of [0]Q_i -> Q_i for i = 1..n."""
    if n < 1:
        raise ValueError("index must be at least 1")
    return conj(Implies(Box(0, q_k(i, p)), q_k(i, p)) for i in range(1, n + 1))


def q_star(k: int, p: Formula = Var(0)) -> Formula:
    """Q*_1 = p, Q*_{i+1} = p & <0>Q*_i."""
    if k < 1:
        raise ValueError("index must be at least 1")
    f = p
    for _ in range(k - 1):
        f = And(p, Dia(0, f))
    return f


@dataclass(frozen=True)
class QFamily:
    kind: str  # "q" | "qbig" | "qstar"
    index: int
    variable: int = 0

    def __post_init__(self):
        if self.kind not in QKINDS:
            raise ValueError(f"unknown Q-family {self.kind!r}")
        if self.index < 1:
            raise ValueError("index must be at least 1")

    def formula(self, p: Formula | None = None) -> Formula:
        p = Var(self.variable) if p is None else p
        return {"q": q_k, "qbig": q_big, "qstar": q_star}[self.kind](self.index, p)

    def substitution(self) -> Substitution:
        return Substitution({self.variable: self.formula()})


def q_formula(fam: QFamily) -> Formula:
    return fam.formula()


# --------------------------------------------------------------- unifiers


def is_unifier(sigma: Substitution, f: Formula, logic: LogicId | str = "GLP",
               cfg: EngineConfig = EngineConfig()) -> Verdict:
    """Refute ``sigma(f)`` in ``logic``; no countermodel means a (cap-bounded) unifier."""
    return decide(logic, apply_subst(sigma, f), cfg)


@dataclass(frozen=True)
class GeneralityReport:
    """Outcome of checking tau = theta . sigma variable by variable."""

    verdicts: tuple[tuple[int, Verdict], ...]

    @property
    def ok(self) -> bool:
        return all(not v.is_invalid for _, v in self.verdicts)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[int]:
        return [i for i, v in self.verdicts if v.is_invalid]


def check_generality(tau: Substitution, sigma: Substitution, theta: Substitution,
                     vars: Iterable[int] | None = None,
                     cfg: EngineConfig = EngineConfig()) -> GeneralityReport:
    """Decide GLP |- tau(p) <-> theta(sigma(p)) for each ``p`` in ``vars``."""
    if vars is None:
        vars = set(tau) | set(sigma)
    composed = compose_subst(theta, sigma)
    out = []
    for i in sorted(vars):
        out.append((i, decide_glp(Iff(tau.image(i), composed.image(i)), cfg)))
    return GeneralityReport(tuple(out))


def q_chain_witness(i: int, j: int, cfg: EngineConfig = EngineConfig()) -> tuple[Substitution, Verdict]:
    """Witness ``theta = {p -> Q^i(p)}`` for Q^i <= Q^j, with its engine check."""
    if not 1 <= i <= j:
        raise ValueError("need 1 <= i <= j")
    qi = q_big(i)
    theta = Substitution({0: qi})
    verdict = decide_glp(Iff(qi, q_big(j, qi)), cfg)
    if verdict.is_invalid:
        raise UnifyError(f"Q^{i} <= Q^{j} refuted by a countermodel; this contradicts the theory")
    return theta, verdict


# --------------------------------------------------------- reflection ranks


def reflection_extension_proves(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    """GLP{[0]q -> q} |- f, decided as GLP |- [1]f."""
    return decide_glp(Box(1, f), cfg.widened(1))


def least_reflection_rank(f: Formula, k_max: int, cfg: EngineConfig = EngineConfig()) -> int | None:
    """Least ``k <= k_max`` with GLP |- Q_k(f)."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    for k in range(1, k_max + 1):
        if not decide_glp(q_k(k, f), cfg).is_invalid:
            return k
    return None


def reduction_rank(f: Formula, g: Formula, k_max: int, cfg: EngineConfig = EngineConfig()) -> int | None:
    """Least ``k <= k_max`` with GLP |- Q*_k(f) -> <0>g, given GLP |- <1>f -> <0>g."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    cfg = cfg.widened(1)
    hyp = decide_glp(Implies(Dia(1, f), Dia(0, g)), cfg)
    if hyp.is_invalid:
        raise UnifyError("hypothesis <1>f -> <0>g is refuted by a countermodel")
    for k in range(1, k_max + 1):
        if not decide_glp(Implies(q_star(k, f), Dia(0, g)), cfg).is_invalid:
            return k
    return None


# ------------------------------------------------------- ground enumeration


def language_size(f: Formula) -> int:
    """Least ``n`` with ``f`` in the language of modalities [0] .. [n-1]."""
    top = max_modality(f)
    return 0 if top is None else top + 1


def _constructors(n: int):
    yield "not"
    for op in ("and", "or", "imp", "iff"):
        yield op
    for k in range(n):
        yield ("box", k)
    for k in range(n):
        yield ("dia", k)


def _make(op, *args: Formula) -> Formula:
    if op == "not":
        return Not(*args)
    if isinstance(op, tuple):
        return (Box if op[0] == "box" else Dia)(op[1], *args)
    return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op](*args)


def _iter_size(size: int, n: int) -> Iterator[Formula]:
    """Closed formulas with exactly ``size`` nodes, in canonical order."""
    if size == 1:
        yield BOT
        yield TOP
        return
    for op in _constructors(n):
        if op in ("and", "or", "imp", "iff"):
            for ls in range(1, size - 1):
                for a in _closed_of_size(ls, n):
                    for b in _closed_of_size(size - 1 - ls, n):
                        yield _make(op, a, b)
        else:
            for a in _closed_of_size(size - 1, n):
                yield _make(op, a)


@lru_cache(maxsize=None)
def _closed_of_size(size: int, n: int) -> tuple[Formula, ...]:
    return tuple(_iter_size(size, n))


def closed_formulas(max_size: int, n: int) -> Iterator[Formula]:
    """Variable-free formulas over [0]..[n-1] by size, then constructor order.

    The largest size is generated lazily.
    """
    for s in range(1, max_size):
        yield from _closed_of_size(s, n)
    if max_size >= 1:
        yield from _iter_size(max_size, n)


def _chain_value(f: Formula, length: int, env: dict[int, int] | None = None) -> int:
    """Truth of ``f`` on the strict chain of ``length`` points.

    Point ``i`` sees the points below it through R_0 and nothing through
    higher relations; bit ``i`` of the result is the value at point ``i``
    and ``env`` gives variables the same way. This is a GLP-frame, so
    every GLP theorem is true at every point.
    """
    full = (1 << length) - 1
    env = env or {}
    memo: dict[Formula, int] = {}

    def go(g: Formula) -> int:
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Top):
            r = full
        elif isinstance(g, Bottom):
            r = 0
        elif isinstance(g, Var):
            if g.index not in env:
                raise ValueError(f"p{g.index} has no value on the chain")
            r = env[g.index]
        elif isinstance(g, Not):
            r = full ^ go(g.sub)
        elif isinstance(g, And):
            r = go(g.left) & go(g.right)
        elif isinstance(g, Or):
            r = go(g.left) | go(g.right)
        elif isinstance(g, Implies):
            r = (full ^ go(g.left)) | go(g.right)
        elif isinstance(g, Iff):
            r = full ^ (go(g.left) ^ go(g.right))
        elif isinstance(g, (Box, Dia)):
            s = go(g.sub)
            if g.k == 0:
                r = _box0(s, full) if isinstance(g, Box) else _dia0(s, full)
            else:
                r = full if isinstance(g, Box) else 0
        else:
            raise TypeError(g)
        memo[g] = r
        return r

    return go(f)


def _box0(s: int, full: int) -> int:
    """[0]s on a chain: true at i iff s holds at every point below i."""
    if s == full:
        return full
    lowest_false = (s + 1) & ~s
    return (lowest_false << 1) - 1


def _dia0(s: int, full: int) -> int:
    """<0>s on a chain: true at i iff s holds at some point below i."""
    if s == 0:
        return 0
    lowest = s & -s
    return full & ~((lowest << 1) - 1)


@dataclass(frozen=True)
class Unifiable:
    witness: Substitution
    verdict: Verdict


@dataclass(frozen=True)
class NotUnifiable:
    reason: str
    verdict: Verdict | None = None


@dataclass(frozen=True)
class Unknown:
    bounds_exhausted: str


UnifiabilityAnswer = Unifiable | NotUnifiable | Unknown


def negative_unifiability_test(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    """Decide GLP |- <n>T -> ~[0]f for ``n`` the language size of ``f``.

    No countermodel means ``f`` has no ground unifier in GLP: the formula
    then also holds in the logic of variable-free substitutions.
    """
    n = language_size(f)
    return decide_glp(Implies(Dia(n, TOP), Not(Box(0, f))), cfg.widened(n))


def chain_assignments(f: Formula, length: int = 8, limit: int = 1 << 16) -> list[tuple[int, ...]] | None:
    """Chain valuations (one bitmask per variable, sorted) making ``f`` true everywhere.

    ``None`` when there are more than ``limit`` valuations to try. Every
    subset of a finite chain is definable by a closed formula, so an empty
    list proves ``f`` has no ground unifier.
    """
    vs = sorted(variables(f))
    if (1 << length) ** len(vs) > limit:
        return None
    full = (1 << length) - 1
    return [combo for combo in product(range(1 << length), repeat=len(vs))
            if _chain_value(f, length, dict(zip(vs, combo))) == full]


def search_ground_unifier(f: Formula, size_bound: int = 7, cfg: EngineConfig = EngineConfig(),
                          chain_length: int = 8) -> UnifiabilityAnswer:
    """Look for a variable-free unifier of ``f`` in GLP, smallest first.

    Candidates are closed formulas over the modalities of ``f``, tried in
    order of the largest candidate index. A tuple reaches the engine only if
    its chain signatures make ``f`` true on the whole chain.
    """
    vs = sorted(variables(f))
    if not vs:
        verdict = decide_glp(f, cfg)
        if not verdict.is_invalid:
            return Unifiable(Substitution(), verdict)
        return NotUnifiable("closed formula refuted", verdict)
    allowed = chain_assignments(f, chain_length)
    if allowed is not None and not allowed:
        return NotUnifiable(f"false somewhere on the {chain_length}-point chain under every valuation")
    n = language_size(f)
    full = (1 << chain_length) - 1
    if allowed is not None:
        ok = set(allowed)
        passes = ok.__contains__
    else:
        def passes(combo):
            return _chain_value(f, chain_length, dict(zip(vs, combo))) == full
    pool: list[Formula] = []
    by_sig: dict[int, list[int]] = {}
    for t, cand in enumerate(closed_formulas(size_bound, n)):
        sig = _chain_value(cand, chain_length)
        pool.append(cand)
        by_sig.setdefault(sig, []).append(t)
        for idxs in _tuples_with_max(t, sig, len(vs), by_sig, passes):
            sigma = Substitution({v: pool[i] for v, i in zip(vs, idxs)})
            verdict = decide_glp(apply_subst(sigma, f), cfg)
            if not verdict.is_invalid:
                return Unifiable(sigma, verdict)
    neg = negative_unifiability_test(f, cfg)
    if not neg.is_invalid:
        return NotUnifiable(f"GLP proves <{n}>T -> ~[0]f", neg)
    return Unknown(f"no ground unifier of size <= {size_bound}, and the negative test was refuted")


def _tuples_with_max(t: int, sig: int, arity: int, by_sig: dict[int, list[int]],
                     passes) -> Iterator[tuple[int, ...]]:
    """Index tuples whose largest entry is ``t``, lexicographically, whose
    signature combination passes the chain filter."""
    found = []
    sigs = list(by_sig)
    for j in range(arity):
        # t first occurs at position j: earlier entries < t, later ones <= t
        for others in product(sigs, repeat=arity - 1):
            combo = (*others[:j], sig, *others[j:])
            if not passes(combo):
                continue
            parts = [[i for i in by_sig[s] if i < t] for s in others[:j]] + [[t]]
            parts += [by_sig[s] for s in others[j:]]
            found.extend(product(*parts))
    yield from sorted(set(found))
