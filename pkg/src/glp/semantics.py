"""Finite Kripke models, J-frame conditions, truth, roots."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .syntax import (
    And, Bottom, Box, Dia, Formula, Iff, Implies, Not, Or, Top, Var,
)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[str, ...]
    relations: Mapping[int, frozenset[tuple[str, str]]]
    valuation: Mapping[int, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        ws = tuple(self.worlds)
        if len(set(ws)) != len(ws):
            raise ModelError("duplicate world names")
        if not ws:
            raise ModelError("a model needs at least one world")
        known = set(ws)
        rels = {}
        for k, pairs in self.relations.items():
            k = int(k)
            if k < 0:
                raise ModelError(f"negative modality index {k}")
            pairs = frozenset((a, b) for a, b in pairs)
            for a, b in pairs:
                if a not in known or b not in known:
                    raise ModelError(f"relation {k} mentions unknown world in ({a}, {b})")
            if pairs:
                rels[k] = pairs
        val = {}
        for i, ws_true in self.valuation.items():
            ws_true = frozenset(ws_true)
            if not ws_true <= known:
                raise ModelError(f"valuation of p{i} mentions unknown worlds")
            val[int(i)] = ws_true
        object.__setattr__(self, "worlds", ws)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "valuation", val)

    @property
    def modalities(self) -> list[int]:
        return sorted(self.relations)

    def rel(self, k: int) -> frozenset[tuple[str, str]]:
        return self.relations.get(k, frozenset())

    def successors(self, k: int, x: str) -> set[str]:
        return {b for a, b in self.rel(k) if a == x}

    def check_modality_count(self, n: int) -> None:
        for k in self.relations:
            if k >= n:
                raise ModelError(f"relation R_{k} exceeds modality count {n}")

    # ------------------------------------------------------------ serialization

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "relations": {str(k): sorted([a, b] for a, b in self.relations[k]) for k in self.modalities},
            "valuation": {f"p{i}": sorted(self.valuation[i]) for i in sorted(self.valuation)},
        }

    @classmethod
    def from_json(cls, data: dict) -> KripkeModel:
        try:
            worlds = tuple(data["worlds"])
            rels = {int(k): [tuple(pr) for pr in pairs] for k, pairs in data.get("relations", {}).items()}
            val = {}
            for name, ws in data.get("valuation", {}).items():
                if not (name.startswith("p") and name[1:].isdigit()):
                    raise ModelError(f"bad variable name {name!r}")
                val[int(name[1:])] = ws
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ModelError):
                raise
            raise ModelError(f"malformed model JSON: {e}") from None
        return cls(worlds, rels, val)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text: str) -> KripkeModel:
        return cls.from_json(json.loads(text))

    def to_dot(self, highlight: str | None = None) -> str:
        styles = ["solid", "dashed", "dotted", "bold"]
        colors = ["black", "blue", "red", "darkgreen", "purple", "orange"]
        lines = ["digraph J {", "  rankdir=BT;"]
        for w in self.worlds:
            true_vars = ",".join(f"p{i}" for i in sorted(self.valuation) if w in self.valuation[i])
            shape = "doublecircle" if w == highlight else "circle"
            lines.append(f'  "{w}" [shape={shape}, label="{w}\\n{true_vars}"];')
        for k in self.modalities:
            style = styles[k % len(styles)]
            color = colors[k % len(colors)]
            for a, b in sorted(self.relations[k]):
                lines.append(f'  "{a}" -> "{b}" [label="{k}", style={style}, color={color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ J-frames


@dataclass(frozen=True)
class JFrameReport:
    violations: tuple[tuple[int, tuple[str, ...]], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def conditions(self) -> set[int]:
        return {c for c, _ in self.violations}

    def __bool__(self) -> bool:
        return self.ok


def is_j_frame(model: KripkeModel) -> JFrameReport:
    """Check the three J-frame conditions; one witness per violated condition.

    1. every R_k transitive and irreflexive
    2. x R_n y implies x, y have the same R_m-successors (m < n)
    3. x R_m y and y R_n z imply x R_m z (m < n)
    """
    found: dict[int, tuple[str, ...]] = {}
    ks = model.modalities
    succ = {k: {w: model.successors(k, w) for w in model.worlds} for k in ks}

    for k in ks:
        for x in model.worlds:
            if x in succ[k][x]:
                found.setdefault(1, (x,))
                break
            for y in succ[k][x]:
                missing = succ[k][y] - succ[k][x]
                if missing:
                    found.setdefault(1, (x, y, min(missing)))
                    break
        if 1 in found:
            break

    for n in ks:
        for m in ks:
            if m >= n:
                continue
            for x in model.worlds:
                for y in sorted(succ[n][x]):
                    diff = succ[m][x] ^ succ[m][y]
                    if diff and 2 not in found:
                        found[2] = (x, y, min(diff))
                for y in sorted(succ[m][x]):
                    missing = succ[n][y] - succ[m][x]
                    if missing and 3 not in found:
                        found[3] = (x, y, min(missing))
    return JFrameReport(tuple(sorted(found.items())))


def find_root(model: KripkeModel) -> str | None:
    """A world from which every other world is one step away along some R_k."""
    reach: dict[str, set[str]] = {w: set() for w in model.worlds}
    for pairs in model.relations.values():
        for a, b in pairs:
            reach[a].add(b)
    for r in model.worlds:
        if all(x == r or x in reach[r] for x in model.worlds):
            return r
    return None


# -------------------------------------------------------------------- truth


def satisfies(model: KripkeModel, x: str, f: Formula) -> bool:
    if x not in model.worlds:
        raise ModelError(f"unknown world {x!r}")
    return x in truth_set(model, f)


def truth_set(model: KripkeModel, f: Formula) -> frozenset[str]:
    """All worlds where ``f`` holds."""
    memo: dict[Formula, frozenset[str]] = {}
    every = frozenset(model.worlds)
    succ = {k: {w: frozenset(model.successors(k, w)) for w in model.worlds} for k in model.relations}
    empty: dict[str, frozenset[str]] = {}

    def box(k: int, s: frozenset[str]) -> frozenset[str]:
        rk = succ.get(k, empty)
        return frozenset(w for w in model.worlds if rk.get(w, frozenset()) <= s)

    def go(g: Formula) -> frozenset[str]:
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Var):
            r = model.valuation.get(g.index, frozenset())
        elif isinstance(g, Top):
            r = every
        elif isinstance(g, Bottom):
            r = frozenset()
        elif isinstance(g, Not):
            r = every - go(g.sub)
        elif isinstance(g, And):
            r = go(g.left) & go(g.right)
        elif isinstance(g, Or):
            r = go(g.left) | go(g.right)
        elif isinstance(g, Implies):
            r = (every - go(g.left)) | go(g.right)
        elif isinstance(g, Iff):
            r = every - (go(g.left) ^ go(g.right))
        elif isinstance(g, Box):
            r = box(g.k, go(g.sub))
        elif isinstance(g, Dia):
            r = every - box(g.k, every - go(g.sub))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return go(f)


def valid_in_model(model: KripkeModel, f: Formula) -> bool:
    return truth_set(model, f) == frozenset(model.worlds)


# ------------------------------------------------------------ J-closure


def j_closure(edges: Iterable[tuple[int, int, int]], skip: frozenset[int] = frozenset()) -> set[tuple[int, int, int]]:
    """Least superset of ``(x, k, y)`` edges closed under J-frame conditions 1-3.

    Conditions listed in ``skip`` are not enforced. Irreflexivity is never
    enforced; callers check for ``(x, k, x)``.
    """
    trans, cond2, cond3 = 1 not in skip, 2 not in skip, 3 not in skip
    out = set()
    todo = list(edges)
    while todo:
        e = todo.pop()
        if e in out:
            continue
        out.add(e)
        x, k, y = e
        for a, j, b in list(out):
            if j == k and trans:
                if a == y:
                    todo.append((x, k, b))
                if b == x:
                    todo.append((a, k, y))
            if j < k:
                # x R_k y, y R_j b  =>  x R_j b
                if a == y and cond2:
                    todo.append((x, j, b))
                # x R_k y, x R_j b  =>  y R_j b
                if a == x and cond2:
                    todo.append((y, j, b))
                # a R_j x, x R_k y  =>  a R_j y
                if b == x and cond3:
                    todo.append((a, j, y))
            elif j > k:
                # a R_j x, x R_k y  =>  a R_k y
                if b == x and cond2:
                    todo.append((a, k, y))
                # x R_j a, x R_k y  =>  a R_k y
                if a == x and cond2:
                    todo.append((b, k, y))
                # x R_k y, y R_j b  =>  x R_k b
                if a == y and cond3:
                    todo.append((x, k, b))
    return out


def model_from_edges(
    size: int,
    edges: Iterable[tuple[int, int, int]],
    valuation: Mapping[int, Iterable[int]] | None = None,
    prefix: str = "w",
) -> KripkeModel:
    names = [f"{prefix}{i}" for i in range(size)]
    rels: dict[int, set[tuple[str, str]]] = {}
    for x, k, y in edges:
        rels.setdefault(k, set()).add((names[x], names[y]))
    val = {i: [names[w] for w in ws] for i, ws in (valuation or {}).items()}
    return KripkeModel(tuple(names), rels, val)


# ---------------------------------------------------------- random J-models


def random_j_model(
    rng: random.Random,
    max_worlds: int = 6,
    n_modalities: int = 2,
    n_vars: int = 2,
    extra_edge_prob: float = 0.2,
) -> KripkeModel:
    """A random rooted J-model.

    Worlds hang off a random earlier world by an edge of a random modality;
    occasionally an extra forward edge is added. The edge set is then
    J-closed, and discarded if closing made some relation reflexive.
    """
    while True:
        size = rng.randint(1, max_worlds)
        edges = [(rng.randrange(i), rng.randrange(n_modalities), i) for i in range(1, size)]
        for a in range(size):
            for b in range(a + 1, size):
                if rng.random() < extra_edge_prob / max(1, size):
                    edges.append((a, rng.randrange(n_modalities), b))
        closed = j_closure(edges)
        if any(x == y for x, _, y in closed):
            continue
        val = {i: [w for w in range(size) if rng.random() < 0.5] for i in range(n_vars)}
        model = model_from_edges(size, closed, val)
        assert is_j_frame(model).ok, model
        return model


def inject_violation(model: KripkeModel, condition: int, rng: random.Random, tries: int = 200) -> KripkeModel | None:
    """Perturb ``model`` so that exactly J-frame ``condition`` fails.

    A random edge is added, possibly to a fresh world (or a loop, for
    condition 1), then the edge set is closed under the other two
    conditions only.
    """
    names = list(model.worlds)
    index = {w: i for i, w in enumerate(names)}
    base = [(index[a], k, index[b]) for k in model.modalities for a, b in model.rel(k)]
    ks = sorted(set(model.modalities) | {0, 1})
    fresh = "v" + str(len(names))
    while fresh in index:
        fresh += "'"
    for _ in range(tries):
        size = len(names)
        a = rng.randrange(size)
        b = size if rng.random() < 0.5 else rng.randrange(size)
        if a == b and not (condition == 1 and rng.random() < 0.3):
            continue
        closed = j_closure(base + [(a, rng.choice(ks), b)], skip=frozenset({condition}))
        if condition != 1 and any(x == y for x, _, y in closed):
            continue
        worlds = names + [fresh] if b == size else names
        rels: dict[int, set[tuple[str, str]]] = {}
        for x, k, y in closed:
            rels.setdefault(k, set()).add((worlds[x], worlds[y]))
        candidate = KripkeModel(tuple(worlds), rels, model.valuation)
        if is_j_frame(candidate).conditions == {condition}:
            return candidate
    return None
