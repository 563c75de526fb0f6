"""Derivability in J, GLP, GL and GLPS by bounded rooted-countermodel search.

The search builds a finite J-model world by world. Each world carries a
partial truth assignment (two bitmasks) over the closure of the query
formula, relations are kept J-closed, and every assignment is propagated
across edges before anything is guessed. Branching happens on

* unjustified boolean formulas (``A | B`` true with both sides open, ...),
* unwitnessed ``[k]A``-false demands: the witness is either an existing
  world or a new world where ``A`` is false and ``[k]A`` is true.

If some rooted J-model with at most ``cap`` worlds refutes the query, the
search finds one; the world bound is raised one step at a time so the
returned model is as small as possible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .semantics import KripkeModel, find_root, is_j_frame, model_from_edges, satisfies
from .syntax import (
    And, Bottom, Box, Formula, Iff, Implies, LogicId, Not, Or, Top, Var,
    box_normal, check_modalities, conj, max_modality, walk,
)


class EngineError(RuntimeError):
    pass


class ResourceLimitExceeded(EngineError):
    pass


class CertificateError(EngineError):
    """A countermodel failed re-validation; this is a bug, never a verdict."""


@dataclass(frozen=True)
class EngineConfig:
    max_worlds: int = 8
    max_modality: int = 4  # number of modalities [0] .. [max_modality - 1]
    deterministic: bool = True
    budget: int = 2_000_000  # search nodes per query

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if self.max_modality < 1:
            raise ValueError("max_modality must be at least 1")

    def widened(self, n: int) -> EngineConfig:
        """Same config admitting modality index ``n``."""
        if n < self.max_modality:
            return self
        return EngineConfig(self.max_worlds, n + 1, self.deterministic, self.budget)


@dataclass(frozen=True)
class Invalid:
    countermodel: KripkeModel
    refuted_at: str
    query: Formula
    nodes: int = 0

    is_invalid = True

    def __bool__(self) -> bool:  # truthy = "no countermodel"
        return False


@dataclass(frozen=True)
class NoCountermodelWithinCap:
    cap: int
    query: Formula
    nodes: int = 0
    # False when the search closed without ever being cut off by the world
    # bound, i.e. a larger cap would not have explored anything new
    cap_reached: bool = True

    is_invalid = False

    def __bool__(self) -> bool:
        return True


Verdict = Invalid | NoCountermodelWithinCap


# ------------------------------------------------------- reduction formulas


def _preorder_unique(f: Formula) -> list[Formula]:
    seen = set()
    out = []
    for g in walk(f):
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def _top_modality(f: Formula) -> int:
    n = max_modality(f)
    return 0 if n is None else n


def m_formula(f: Formula) -> Formula:
    """Conjunction of ``[i]B -> [j]B`` over boxed subformulas ``[i]B``, ``i < j <= n``."""
    g = box_normal(f)
    n = _top_modality(g)
    parts = []
    for s in _preorder_unique(g):
        if isinstance(s, Box):
            parts.extend(Implies(s, Box(j, s.sub)) for j in range(s.k + 1, n + 1))
    return conj(parts)


def m_plus(f: Formula) -> Formula:
    m = m_formula(f)
    n = _top_modality(box_normal(f))
    return conj([m] + [Box(i, m) for i in range(n + 1)])


def h_formula(f: Formula) -> Formula:
    """Conjunction of ``[k]B -> B`` over boxed subformulas."""
    g = box_normal(f)
    return conj(Implies(s, s.sub) for s in _preorder_unique(g) if isinstance(s, Box))


def r_formula(f: Formula) -> Formula:
    """Conjunction of ``[0]B -> B`` over all subformulas ``B``."""
    g = box_normal(f)
    return conj(Implies(Box(0, s), s) for s in _preorder_unique(g))


# ------------------------------------------------------------------ closure

VAR, TOPK, BOTK, NOT, AND, OR, IMP, IFF, BOX = range(9)
_KIND = {Var: VAR, Top: TOPK, Bottom: BOTK, Not: NOT, And: AND, Or: OR, Implies: IMP, Iff: IFF, Box: BOX}


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class Closure:
    """Subformulas of a box-normal formula, numbered bottom-up."""

    def __init__(self, f: Formula, n_modalities: int):
        self.formula = box_normal(f)
        self.n = n_modalities
        self.nodes: list[Formula] = []
        self.index: dict[Formula, int] = {}
        self.kind: list[int] = []
        self.a: list[int] = []
        self.b: list[int] = []
        self.mod: list[int] = []
        self.root = self._intern(self.formula)
        size = len(self.nodes)
        self.parents: list[list[int]] = [[] for _ in range(size)]
        self.box_parents: list[list[int]] = [[] for _ in range(size)]
        for i in range(size):
            kd = self.kind[i]
            if kd in (NOT, BOX):
                self.parents[self.a[i]].append(i)
                if kd == BOX:
                    self.box_parents[self.a[i]].append(i)
            elif kd in (AND, OR, IMP, IFF):
                self.parents[self.a[i]].append(i)
                if self.b[i] != self.a[i]:
                    self.parents[self.b[i]].append(i)
        self.boxes_by_k: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in range(n_modalities)]
        self.higher: list[tuple[int, ...]] = [() for _ in range(size)]
        for i in range(size):
            if self.kind[i] == BOX:
                k, c = self.mod[i], self.a[i]
                hi = tuple(
                    self.index[Box(m, self.nodes[c])]
                    for m in range(k + 1, n_modalities)
                    if Box(m, self.nodes[c]) in self.index
                )
                self.higher[i] = hi
                self.boxes_by_k[k].append((i, c, hi))
        mask = lambda kd: sum(1 << i for i in range(size) if self.kind[i] == kd)
        self.and_mask, self.or_mask, self.imp_mask = mask(AND), mask(OR), mask(IMP)
        self.iff_mask, self.box_mask = mask(IFF), mask(BOX)
        self.top_mask, self.bot_mask = mask(TOPK), mask(BOTK)
        self.var_nodes = [(i, self.nodes[i].index) for i in range(size) if self.kind[i] == VAR]

    def _intern(self, g: Formula) -> int:
        i = self.index.get(g)
        if i is not None:
            return i
        kd = _KIND[type(g)]
        a = b = m = -1
        if kd in (NOT, BOX):
            a = self._intern(g.sub)
            if kd == BOX:
                m = g.k
                if m >= self.n:
                    raise EngineError(f"modality [{m}] exceeds configured count {self.n}")
        elif kd in (AND, OR, IMP, IFF):
            a = self._intern(g.left)
            b = self._intern(g.right)
        i = len(self.nodes)
        self.nodes.append(g)
        self.index[g] = i
        self.kind.append(kd)
        self.a.append(a)
        self.b.append(b)
        self.mod.append(m)
        return i

    def __len__(self) -> int:
        return len(self.nodes)


# -------------------------------------------------------------------- state


class _Conflict(Exception):
    pass


class _State:
    __slots__ = ("nw", "tv", "fv", "succ", "pred")

    def __init__(self, nw, tv, fv, succ, pred):
        self.nw = nw
        self.tv = tv
        self.fv = fv
        self.succ = succ
        self.pred = pred

    def copy(self) -> _State:
        return _State(
            self.nw,
            self.tv[:],
            self.fv[:],
            [row[:] for row in self.succ],
            [row[:] for row in self.pred],
        )


class _Search:
    def __init__(self, cl: Closure, budget: int):
        self.cl = cl
        self.budget = budget
        self.nodes = 0
        self.cap = 0
        self.cap_reached = False

    # ----------------------------------------------------------- propagation

    def _run(self, st: _State, queue: list) -> None:
        """Assign everything in ``queue`` and propagate to a fixpoint."""
        cl = self.cl
        kind, A, B, mod = cl.kind, cl.a, cl.b, cl.mod
        parents, box_parents, higher = cl.parents, cl.box_parents, cl.higher
        n = cl.n
        tv, fv, succ, pred = st.tv, st.fv, st.succ, st.pred
        todo = []

        def put(w, f, val):
            bit = 1 << f
            if val:
                if fv[w] & bit:
                    raise _Conflict
                if not tv[w] & bit:
                    tv[w] |= bit
                    todo.append((w, f, True))
            else:
                if tv[w] & bit:
                    raise _Conflict
                if not fv[w] & bit:
                    fv[w] |= bit
                    todo.append((w, f, False))

        def val(w, f):
            bit = 1 << f
            if tv[w] & bit:
                return 1
            if fv[w] & bit:
                return 0
            return None

        def local(w, f):
            kd = kind[f]
            if kd <= BOTK or kd == BOX:
                return
            v = val(w, f)
            a = A[f]
            va = val(w, a)
            if kd == NOT:
                if v is not None:
                    put(w, a, not v)
                elif va is not None:
                    put(w, f, not va)
                return
            b = B[f]
            vb = val(w, b)
            if kd == AND:
                if v == 1:
                    put(w, a, True)
                    put(w, b, True)
                elif v == 0:
                    if va == 1:
                        put(w, b, False)
                    elif vb == 1:
                        put(w, a, False)
                if va == 0 or vb == 0:
                    put(w, f, False)
                elif va == 1 and vb == 1:
                    put(w, f, True)
            elif kd == OR:
                if v == 0:
                    put(w, a, False)
                    put(w, b, False)
                elif v == 1:
                    if va == 0:
                        put(w, b, True)
                    elif vb == 0:
                        put(w, a, True)
                if va == 1 or vb == 1:
                    put(w, f, True)
                elif va == 0 and vb == 0:
                    put(w, f, False)
            elif kd == IMP:
                if v == 0:
                    put(w, a, True)
                    put(w, b, False)
                elif v == 1:
                    if va == 1:
                        put(w, b, True)
                    elif vb == 0:
                        put(w, a, False)
                if va == 0 or vb == 1:
                    put(w, f, True)
                elif va == 1 and vb == 0:
                    put(w, f, False)
            else:  # IFF
                if v is not None:
                    if va is not None:
                        put(w, b, va == v)
                    elif vb is not None:
                        put(w, a, vb == v)
                if va is not None and vb is not None:
                    put(w, f, va == vb)

        for w, f, v in queue:
            put(w, f, v)
        while todo:
            w, f, v = todo.pop()
            local(w, f)
            for par in parents[f]:
                local(w, par)
            if kind[f] == BOX:
                k, c = mod[f], A[f]
                if v:
                    for y in _bits(succ[k][w]):
                        put(y, c, True)
                        put(y, f, True)
                        for h in higher[f]:
                            put(y, h, True)
                else:
                    for x in _bits(pred[k][w]):
                        put(x, f, False)
                # an R_m step (m > k) preserves the set of R_k-successors
                for m in range(k + 1, n):
                    for y in _bits(succ[m][w] | pred[m][w]):
                        put(y, f, v)
            if not v:
                for bx in box_parents[f]:
                    for x in _bits(pred[mod[bx]][w]):
                        put(x, bx, False)

    def _add_edges(self, st: _State, edges: Iterable[tuple[int, int, int]]) -> list:
        """J-close after adding ``edges``; return the assignments the new edges force."""
        succ, pred = st.succ, st.pred
        n = self.cl.n
        todo = list(edges)
        new = []
        while todo:
            x, k, y = todo.pop()
            if succ[k][x] >> y & 1:
                continue
            if x == y:
                raise _Conflict
            succ[k][x] |= 1 << y
            pred[k][y] |= 1 << x
            new.append((x, k, y))
            for c in _bits(succ[k][y]):
                todo.append((x, k, c))
            for a in _bits(pred[k][x]):
                todo.append((a, k, y))
            for m in range(k):
                for c in _bits(succ[m][y]):
                    todo.append((x, m, c))
                for c in _bits(succ[m][x]):
                    todo.append((y, m, c))
                for a in _bits(pred[m][x]):
                    todo.append((a, m, y))
            for j in range(k + 1, n):
                for a in _bits(pred[j][x]):
                    todo.append((a, k, y))
                for b in _bits(succ[j][x]):
                    todo.append((b, k, y))
                for c in _bits(succ[j][y]):
                    todo.append((x, k, c))
        tv, fv = st.tv, st.fv
        boxes_by_k = self.cl.boxes_by_k
        forced = []
        for x, k, y in new:
            tx, fy = tv[x], fv[y]
            for bx, c, hi in boxes_by_k[k]:
                if tx >> bx & 1:
                    forced.append((y, c, True))
                    forced.append((y, bx, True))
                    for h in hi:
                        forced.append((y, h, True))
                if (fy >> bx | fy >> c) & 1:
                    forced.append((x, bx, False))
            for m in range(k):
                for bx, _, _ in boxes_by_k[m]:
                    for s, t in ((x, y), (y, x)):
                        if tv[s] >> bx & 1:
                            forced.append((t, bx, True))
                        elif fv[s] >> bx & 1:
                            forced.append((t, bx, False))
        return forced

    def _apply(self, st: _State, edges=(), assigns=()) -> bool:
        try:
            forced = self._add_edges(st, edges) if edges else []
            self._run(st, list(assigns) + forced)
            return True
        except _Conflict:
            return False

    def _new_world(self, st: _State) -> int:
        y = st.nw
        st.nw += 1
        st.tv.append(self.cl.top_mask)
        st.fv.append(self.cl.bot_mask)
        for row in st.succ:
            row.append(0)
        for row in st.pred:
            row.append(0)
        return y

    # ----------------------------------------------------------------- search

    def initial(self) -> _State | None:
        n = self.cl.n
        st = _State(0, [], [], [[] for _ in range(n)], [[] for _ in range(n)])
        self._new_world(st)
        seed = [(0, i, True) for i in _bits(self.cl.top_mask)]
        seed += [(0, i, False) for i in _bits(self.cl.bot_mask)]
        seed.append((0, self.cl.root, False))
        return st if self._apply(st, assigns=seed) else None

    def _branch_point(self, st: _State):
        cl = self.cl
        A, B, kind = cl.a, cl.b, cl.kind
        tv, fv = st.tv, st.fv
        for w in range(st.nw):
            t, f = tv[w], fv[w]
            cand = (f & cl.and_mask) | (t & (cl.or_mask | cl.imp_mask)) | ((t | f) & cl.iff_mask)
            for node in _bits(cand):
                a, b = A[node], B[node]
                kd = kind[node]
                if kd == AND:
                    if not (f >> a & 1 or f >> b & 1):
                        return [[(w, a, False)], [(w, a, True), (w, b, False)]]
                elif kd == OR:
                    if not (t >> a & 1 or t >> b & 1):
                        return [[(w, a, True)], [(w, a, False), (w, b, True)]]
                elif kd == IMP:
                    if not (f >> a & 1 or t >> b & 1):
                        return [[(w, b, True)], [(w, b, False), (w, a, False)]]
                else:
                    if not ((t | f) >> a & 1):
                        pos = bool(t >> node & 1)
                        return [[(w, a, True), (w, b, pos)], [(w, a, False), (w, b, not pos)]]
        return None

    def _demand(self, st: _State):
        cl = self.cl
        fv, succ = st.fv, st.succ
        for w in range(st.nw):
            for bx in _bits(fv[w] & cl.box_mask):
                k, c = cl.mod[bx], cl.a[bx]
                if any(fv[y] >> c & 1 for y in _bits(succ[k][w])):
                    continue
                return w, bx, k, c
        return None

    def dfs(self, st: _State) -> _State | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitExceeded(f"search exceeded {self.budget} nodes")
        alts = self._branch_point(st)
        if alts is not None:
            for assigns in alts:
                child = st.copy()
                if self._apply(child, assigns=assigns):
                    found = self.dfs(child)
                    if found is not None:
                        return found
            return None
        dem = self._demand(st)
        if dem is None:
            return st
        w, bx, k, c = dem
        for y in range(st.nw):
            if y == w or st.tv[y] >> c & 1:
                continue
            child = st.copy()
            if self._apply(child, edges=[(w, k, y)], assigns=[(y, c, False)]):
                found = self.dfs(child)
                if found is not None:
                    return found
        if st.nw < self.cap:
            child = st.copy()
            y = self._new_world(child)
            if self._apply(child, edges=[(w, k, y)], assigns=[(y, c, False), (y, bx, True)]):
                found = self.dfs(child)
                if found is not None:
                    return found
        else:
            self.cap_reached = True
        return None


def _to_model(cl: Closure, st: _State) -> KripkeModel:
    edges = [(x, k, y) for k in range(cl.n) for x in range(st.nw) for y in _bits(st.succ[k][x])]
    val: dict[int, list[int]] = {}
    for node, var in cl.var_nodes:
        val.setdefault(var, [])
        for w in range(st.nw):
            if st.tv[w] >> node & 1:
                val[var].append(w)
    return model_from_edges(st.nw, edges, val)


def verify_countermodel(model: KripkeModel, root: str, query: Formula) -> None:
    report = is_j_frame(model)
    if not report.ok:
        raise CertificateError(f"countermodel is not a J-frame: {report.violations}")
    if find_root(model) is None or any(x != root and not any((root, x) in model.rel(k) for k in model.relations) for x in model.worlds):
        raise CertificateError(f"{root} is not a root of the countermodel")
    if satisfies(model, root, query):
        raise CertificateError("countermodel does not refute the query")


def _check_input(f: Formula, cfg: EngineConfig) -> None:
    check_modalities(f, cfg.max_modality)


def decide_j(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    """Search rooted J-models with 1, 2, ..., ``cfg.max_worlds`` worlds refuting ``f``."""
    _check_input(f, cfg)
    cl = Closure(f, cfg.max_modality)
    search = _Search(cl, cfg.budget)
    for cap in range(1, cfg.max_worlds + 1):
        search.cap = cap
        search.cap_reached = False
        start = search.initial()
        if start is None:
            return NoCountermodelWithinCap(cfg.max_worlds, f, search.nodes, cap_reached=False)
        found = search.dfs(start)
        if found is not None:
            model = _to_model(cl, found)
            verify_countermodel(model, model.worlds[0], f)
            return Invalid(model, model.worlds[0], f, search.nodes)
        if not search.cap_reached:
            return NoCountermodelWithinCap(cfg.max_worlds, f, search.nodes, cap_reached=False)
    return NoCountermodelWithinCap(cfg.max_worlds, f, search.nodes, cap_reached=True)


def glp_query(f: Formula) -> Formula:
    """The J-formula whose derivability is equivalent to GLP-derivability of ``f``."""
    return Implies(m_plus(f), f)


def glps_query(f: Formula) -> Formula:
    """The GLP-formula whose derivability is equivalent to GLPS-derivability of ``f``."""
    return Implies(h_formula(f), f)


def decide_glp(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    _check_input(f, cfg)
    return decide_j(glp_query(f), cfg)


def decide_gl(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    check_modalities(f, 1)
    return decide_glp(f, cfg)


def decide_glps(f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    _check_input(f, cfg)
    return decide_glp(glps_query(f), cfg)


def decide(logic: LogicId | str, f: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    name = logic.name if isinstance(logic, LogicId) else logic.upper()
    if name == "GL":
        return decide_gl(f, cfg)
    if name == "J":
        return decide_j(f, cfg)
    if name == "GLP":
        return decide_glp(f, cfg)
    if name == "GLPS":
        return decide_glps(f, cfg)
    raise EngineError(f"unsupported logic {logic!r}")


def deduction_query(premises: Sequence[Formula], f: Formula) -> Formula:
    """``/\\(g & [0]g) -> f``: premises closed under necessitation."""
    if not premises:
        return f
    return Implies(conj(And(g, Box(0, g)) for g in premises), f)


def deduces(premises: Sequence[Formula], f: Formula, logic: LogicId | str = "GLP",
            cfg: EngineConfig = EngineConfig()) -> Verdict:
    """Decide ``premises |- f`` with modus ponens and necessitation (GL or GLP)."""
    name = logic.name if isinstance(logic, LogicId) else logic.upper()
    if name not in ("GL", "GLP"):
        raise EngineError(f"deductions are supported for GL and GLP only, not {name}")
    q = deduction_query(premises, f)
    return decide_gl(q, cfg) if name == "GL" else decide_glp(q, cfg)
