"""Hilbert-style proofs for GL, J, GLP and GLPS, and a line-by-line checker.

Axiom lines name their schema and carry the instantiating formulas, so the
checker only rebuilds the instance and compares. Formulas are compared after
rewriting ``<k>A`` as ``~[k]~A``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .syntax import (
    BOT, And, Bottom, Box, Dia, Formula, Iff, Implies, LogicId, Not, Or, Top, Var,
    box_normal, max_modality, parse, to_str,
)

AXIOMS = {
    "K": 2,          # [n](A -> B) -> ([n]A -> [n]B)
    "lob": 1,        # [n]([n]A -> A) -> [n]A
    "neg-intro": 1,  # <m>A -> [n]<m>A, m < n
    "mono": 1,       # [m]A -> [n]A, m <= n
    "j6": 1,         # [m]A -> [n][m]A, m < n
    "j7": 1,         # [m]A -> [m][n]A, m < n
    "refl": 1,       # [n]A -> A  (GLPS only)
}
RULES = ("taut", "mp", "nec", "premise") + tuple(AXIOMS)

ALLOWED = {
    "GLP": {"taut", "K", "lob", "neg-intro", "mono"},
    "J": {"taut", "K", "lob", "neg-intro", "j6", "j7"},
    "GLPS": {"taut", "K", "lob", "neg-intro", "mono", "refl"},
}


class ProofError(ValueError):
    pass


class TautologyOverflow(ProofError):
    pass


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    m: int | None = None
    n: int | None = None
    args: tuple[Formula, ...] = ()
    refs: tuple[int, ...] = ()  # 1-based line numbers
    premise: int | None = None  # 0-based index into HilbertProof.premises

    def describe(self) -> str:
        bits = [self.rule]
        if self.m is not None:
            bits.append(f"m={self.m}")
        if self.n is not None:
            bits.append(f"n={self.n}")
        if self.refs:
            bits.append("refs=" + ",".join(map(str, self.refs)))
        if self.premise is not None:
            bits.append(f"premise={self.premise}")
        return " ".join(bits)


@dataclass(frozen=True)
class HilbertProof:
    logic: LogicId
    lines: tuple[ProofLine, ...]
    premises: tuple[Formula, ...] = ()
    # "normal": necessitation applies to every line;
    # "semi-normal": not to lines resting on premises or reflection axioms
    mode: str = "normal"
    conclusion: Formula | None = None

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.conclusion is None and self.lines:
            object.__setattr__(self, "conclusion", self.lines[-1].formula)
        if self.mode not in ("normal", "semi-normal"):
            raise ProofError(f"unknown proof mode {self.mode!r}")

    def __len__(self) -> int:
        return len(self.lines)


@dataclass
class CheckResult:
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"line {i}: {msg}" for i, msg in self.errors)


# ------------------------------------------------------------ tautologies


def _boolean_atoms(f: Formula, atoms: dict[Formula, int]) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Box, Var)):
            atoms.setdefault(g, len(atoms))
        elif isinstance(g, Not):
            stack.append(g.sub)
        elif isinstance(g, (And, Or, Implies, Iff)):
            stack.append(g.right)
            stack.append(g.left)


def is_tautology_instance(f: Formula, limit: int = 20) -> bool:
    """Truth-table ``f`` with its maximal non-boolean subformulas as atoms.

    All ``2**a`` rows are evaluated at once: a formula's column is an
    integer whose bit ``r`` is its value in row ``r``.
    """
    g = box_normal(f)
    atoms: dict[Formula, int] = {}
    _boolean_atoms(g, atoms)
    a = len(atoms)
    if a > limit:
        raise TautologyOverflow(f"{a} atoms exceed the truth-table limit of {limit}")
    rows = 1 << a
    full = (1 << rows) - 1
    cols = {}
    for atom, i in atoms.items():
        block = 1 << (i + 1)
        unit = ((1 << (1 << i)) - 1) << (1 << i)  # 2**i zeros then 2**i ones
        cols[atom] = unit * (full // ((1 << block) - 1)) if block <= rows else 0
    memo: dict[Formula, int] = {}

    def ev(h: Formula) -> int:
        r = memo.get(h)
        if r is not None:
            return r
        if h in cols:
            r = cols[h]
        elif isinstance(h, Top):
            r = full
        elif isinstance(h, Bottom):
            r = 0
        elif isinstance(h, Not):
            r = full ^ ev(h.sub)
        elif isinstance(h, And):
            r = ev(h.left) & ev(h.right)
        elif isinstance(h, Or):
            r = ev(h.left) | ev(h.right)
        elif isinstance(h, Implies):
            r = (full ^ ev(h.left)) | ev(h.right)
        elif isinstance(h, Iff):
            r = full ^ (ev(h.left) ^ ev(h.right))
        else:
            raise TypeError(h)
        memo[h] = r
        return r

    return ev(g) == full


# --------------------------------------------------------------- schemata


def axiom_instance(rule: str, m: int | None, n: int | None, args: Sequence[Formula]) -> Formula:
    """The formula named by an axiom justification; raises ProofError if ill-formed."""
    if rule not in AXIOMS:
        raise ProofError(f"{rule!r} is not an axiom schema")
    if len(args) != AXIOMS[rule]:
        raise ProofError(f"{rule} takes {AXIOMS[rule]} formula argument(s), got {len(args)}")
    if n is None or n < 0:
        raise ProofError(f"{rule} needs a modality index n")
    if rule == "K":
        a, b = args
        return Implies(Box(n, Implies(a, b)), Implies(Box(n, a), Box(n, b)))
    if rule == "lob":
        (a,) = args
        return Implies(Box(n, Implies(Box(n, a), a)), Box(n, a))
    if rule == "refl":
        (a,) = args
        return Implies(Box(n, a), a)
    (a,) = args
    if m is None or m < 0:
        raise ProofError(f"{rule} needs a modality index m")
    if rule == "mono":
        if not m <= n:
            raise ProofError(f"mono needs m <= n, got m={m}, n={n}")
        return Implies(Box(m, a), Box(n, a))
    if not m < n:
        raise ProofError(f"{rule} needs m < n, got m={m}, n={n}")
    if rule == "neg-intro":
        return Implies(Dia(m, a), Box(n, Dia(m, a)))
    if rule == "j6":
        return Implies(Box(m, a), Box(n, Box(m, a)))
    return Implies(Box(m, a), Box(m, Box(n, a)))  # j7


def _same(f: Formula, g: Formula) -> bool:
    return f == g or box_normal(f) == box_normal(g)


def check_proof(pr: HilbertProof, taut_limit: int = 20) -> CheckResult:
    result = CheckResult()
    family = pr.logic.family
    allowed = ALLOWED[family]
    n_mod = pr.logic.n
    tainted: list[bool] = []  # rests on a premise or reflection axiom
    if not pr.lines:
        result.errors.append((0, "empty proof"))
        return result
    for no, line in enumerate(pr.lines, start=1):
        taint = False
        try:
            top = max_modality(line.formula)
            if top is not None and top >= n_mod:
                raise ProofError(f"modality [{top}] exceeds {pr.logic}")
            rule = line.rule
            if rule == "taut":
                if not is_tautology_instance(line.formula, taut_limit):
                    raise ProofError("not a tautology instance")
            elif rule in AXIOMS:
                if rule not in allowed:
                    raise ProofError(f"axiom {rule} is not available in {family}")
                inst = axiom_instance(rule, line.m, line.n, line.args)
                if not _same(inst, line.formula):
                    raise ProofError(f"formula is not the {rule} instance {to_str(inst)}")
                taint = rule == "refl"
            elif rule == "mp":
                if len(line.refs) != 2:
                    raise ProofError("mp needs two line references")
                i, j = line.refs
                _check_refs(line.refs, no)
                a, imp = pr.lines[i - 1].formula, box_normal(pr.lines[j - 1].formula)
                if not isinstance(imp, Implies):
                    raise ProofError(f"mp: line {j} is not an implication")
                if not _same(imp.left, a):
                    raise ProofError(f"mp: line {i} does not match the antecedent of line {j}")
                if not _same(imp.right, line.formula):
                    raise ProofError(f"mp: formula is not the consequent of line {j}")
                taint = tainted[i - 1] or tainted[j - 1]
            elif rule == "nec":
                if len(line.refs) != 1 or line.n is None:
                    raise ProofError("nec needs a modality index and one line reference")
                (i,) = line.refs
                _check_refs(line.refs, no)
                if pr.mode == "semi-normal" and tainted[i - 1]:
                    raise ProofError(f"nec: line {i} rests on a premise or reflection axiom")
                if not _same(Box(line.n, pr.lines[i - 1].formula), line.formula):
                    raise ProofError(f"nec: formula is not [{line.n}] of line {i}")
                taint = tainted[i - 1]
            elif rule == "premise":
                idx = line.premise
                if idx is None or not 0 <= idx < len(pr.premises):
                    raise ProofError(f"premise index {idx} out of range")
                if not _same(pr.premises[idx], line.formula):
                    raise ProofError(f"formula differs from premise {idx}")
                taint = True
            else:
                raise ProofError(f"unknown justification {rule!r}")
        except ProofError as e:
            result.errors.append((no, str(e)))
        tainted.append(taint)
    if pr.conclusion is not None and not _same(pr.conclusion, pr.lines[-1].formula):
        result.errors.append((len(pr.lines), "conclusion differs from the last line"))
    return result


def _check_refs(refs: Sequence[int], no: int) -> None:
    for r in refs:
        if not 1 <= r < no:
            raise ProofError(f"reference to line {r} does not precede line {no}")


def ensure_checked(pr: HilbertProof) -> HilbertProof:
    res = check_proof(pr)
    if not res.ok:
        raise ProofError(f"proof does not check:\n{res}")
    return pr


# ----------------------------------------------------------- serialization


def _line_to_json(line: ProofLine) -> dict:
    d: dict = {"formula": to_str(line.formula), "rule": line.rule}
    if line.m is not None:
        d["m"] = line.m
    if line.n is not None:
        d["n"] = line.n
    if line.args:
        d["args"] = [to_str(a) for a in line.args]
    if line.refs:
        d["refs"] = list(line.refs)
    if line.premise is not None:
        d["premise"] = line.premise
    return d


def proof_to_json(pr: HilbertProof) -> str:
    """One proof line per text line."""
    head = {
        "logic": pr.logic.name,
        "n": pr.logic.n,
        "mode": pr.mode,
        "premises": [to_str(f) for f in pr.premises],
        "conclusion": to_str(pr.conclusion),
    }
    body = ",\n".join("    " + json.dumps(_line_to_json(l)) for l in pr.lines)
    head_txt = json.dumps(head)[:-1]
    return f'{head_txt}, "lines": [\n{body}\n]}}\n'


def proof_from_json(text: str | dict | list, logic: LogicId | None = None) -> HilbertProof:
    """Read a proof object, or a bare array of lines (then ``logic`` applies)."""
    data = json.loads(text) if isinstance(text, str) else text
    if isinstance(data, list):
        data = {"lines": data}
    if logic is None:
        name = data.get("logic", "GLP")
        logic = LogicId(name, data.get("n", 1 if name == "GL" else 4))
    n = logic.n
    try:
        lines = []
        for d in data["lines"]:
            lines.append(ProofLine(
                formula=parse(d["formula"], n),
                rule=d["rule"],
                m=d.get("m"),
                n=d.get("n"),
                args=tuple(parse(a, n) for a in d.get("args", ())),
                refs=tuple(d.get("refs", ())),
                premise=d.get("premise"),
            ))
        premises = tuple(parse(f, n) for f in data.get("premises", ()))
        concl = parse(data["conclusion"], n) if data.get("conclusion") else None
    except (KeyError, TypeError) as e:
        raise ProofError(f"malformed proof JSON: {e}") from None
    mode = data.get("mode", "semi-normal" if logic.family == "GLPS" else "normal")
    return HilbertProof(logic, tuple(lines), premises, mode, concl)


# ----------------------------------------------------------------- builder


class ProofBuilder:
    """Append-only proof construction; every method returns a 1-based line number."""

    def __init__(self, logic: LogicId, premises: Sequence[Formula] = (), mode: str = "normal"):
        self.logic = logic
        self.premises = tuple(premises)
        self.mode = mode
        self.lines: list[ProofLine] = []

    def __getitem__(self, no: int) -> Formula:
        return self.lines[no - 1].formula

    def _add(self, line: ProofLine) -> int:
        self.lines.append(line)
        return len(self.lines)

    def taut(self, f: Formula) -> int:
        if not is_tautology_instance(f):
            raise ProofError(f"not a tautology instance: {to_str(f)}")
        return self._add(ProofLine(f, "taut"))

    def axiom(self, rule: str, *args: Formula, m: int | None = None, n: int | None = None) -> int:
        return self._add(ProofLine(axiom_instance(rule, m, n, args), rule, m, n, tuple(args)))

    def premise(self, idx: int) -> int:
        return self._add(ProofLine(self.premises[idx], "premise", premise=idx))

    def mp(self, i: int, j: int) -> int:
        imp = box_normal(self[j])
        if not isinstance(imp, Implies) or not _same(imp.left, self[i]):
            raise ProofError(f"mp shape mismatch between lines {i} and {j}")
        # keep the caller's surface syntax for the consequent when available
        target = self[j].right if isinstance(self[j], Implies) else imp.right
        return self._add(ProofLine(target, "mp", refs=(i, j)))

    def nec(self, k: int, i: int) -> int:
        return self._add(ProofLine(Box(k, self[i]), "nec", n=k, refs=(i,)))

    def include(self, pr: HilbertProof) -> int:
        """Copy another proof's lines; returns the line holding its conclusion."""
        if pr.logic.family != self.logic.family:
            raise ProofError(f"logic mismatch: {pr.logic} vs {self.logic}")
        if pr.premises and pr.premises != self.premises:
            raise ProofError("cannot merge proofs with different premises")
        base = len(self.lines)
        for line in pr.lines:
            self.lines.append(replace(line, refs=tuple(r + base for r in line.refs)))
        return len(self.lines)

    # derived rules

    def _imp(self, i: int) -> Implies:
        f = self[i]
        if not isinstance(f, Implies):
            f = box_normal(f)
        if not isinstance(f, Implies):
            raise ProofError(f"line {i} is not an implication")
        return f

    def syllogism(self, i: int, j: int) -> int:
        """From A -> B and B -> C infer A -> C."""
        ab, bc = self._imp(i), self._imp(j)
        if not _same(ab.right, bc.left):
            raise ProofError(f"syllogism shape mismatch between lines {i} and {j}")
        a, b, c = ab.left, ab.right, bc.right
        t = self.taut(Implies(Implies(a, b), Implies(Implies(b, c), Implies(a, c))))
        return self.mp(j, self.mp(i, t))

    def contrapose(self, i: int) -> int:
        """From A -> B infer ~B -> ~A."""
        ab = self._imp(i)
        t = self.taut(Implies(ab, Implies(Not(ab.right), Not(ab.left))))
        return self.mp(i, t)

    def k_step(self, k: int, i: int) -> int:
        """From [k](A -> B) infer [k]A -> [k]B."""
        f = box_normal(self[i])
        if not (isinstance(f, Box) and f.k == k):
            raise ProofError(f"line {i} is not a [{k}]-formula")
        inner = self[i].sub
        if not isinstance(inner, Implies):
            inner = f.sub
        if not isinstance(inner, Implies):
            raise ProofError(f"line {i} is not [{k}] of an implication")
        ax = self.axiom("K", inner.left, inner.right, n=k)
        return self.mp(i, ax)

    def box_mono(self, k: int, i: int) -> int:
        """From A -> B infer [k]A -> [k]B."""
        return self.k_step(k, self.nec(k, i))

    def build(self, conclusion_line: int | None = None) -> HilbertProof:
        lines = self.lines if conclusion_line is None else self.lines[:conclusion_line]
        return ensure_checked(HilbertProof(self.logic, tuple(lines), self.premises, self.mode))


# ------------------------------------------------------ proof combinators


def _start(*proofs: HilbertProof) -> tuple[ProofBuilder, list[int]]:
    logic = proofs[0].logic
    for pr in proofs:
        ensure_checked(pr)
        if pr.logic.family != logic.family:
            raise ProofError(f"logic mismatch: {pr.logic} vs {logic}")
    n = max(pr.logic.n for pr in proofs)
    b = ProofBuilder(LogicId(logic.name, n), proofs[0].premises, proofs[0].mode)
    return b, [b.include(pr) for pr in proofs]


def syllogism_under_box(p_ab: HilbertProof, p_bc: HilbertProof) -> HilbertProof:
    """Proofs of [k](A -> B) and [k](B -> C) give a proof of [k](A -> C)."""
    b, (i, j) = _start(p_ab, p_bc)
    f, g = b[i], b[j]
    if not (isinstance(f, Box) and isinstance(g, Box) and f.k == g.k):
        raise ProofError("syllogism_under_box needs two [k]-formulas with the same k")
    k = f.k
    ab, bc = f.sub, g.sub
    if not (isinstance(ab, Implies) and isinstance(bc, Implies) and _same(ab.right, bc.left)):
        raise ProofError("syllogism_under_box shape mismatch")
    t = b.taut(Implies(ab, Implies(bc, Implies(ab.left, bc.right))))
    step = b.mp(i, b.box_mono(k, t))          # [k]((B -> C) -> (A -> C))
    return b.build(b.mp(j, b.k_step(k, step)))


def k_distribute(k: int, p_box_imp: HilbertProof, p_box_a: HilbertProof) -> HilbertProof:
    """Proofs of [k](A -> B) and [k]A give a proof of [k]B."""
    b, (i, j) = _start(p_box_imp, p_box_a)
    f = b[i]
    if not (isinstance(f, Box) and f.k == k and isinstance(f.sub, Implies)):
        raise ProofError(f"first proof must conclude [{k}](A -> B)")
    if not _same(b[j], Box(k, f.sub.left)):
        raise ProofError(f"second proof must conclude [{k}]A")
    return b.build(b.mp(j, b.k_step(k, i)))


def conj_intro_under_box(p_a: HilbertProof, p_b: HilbertProof) -> HilbertProof:
    """Proofs of [k]A and [k]B give a proof of [k](A & B)."""
    b, (i, j) = _start(p_a, p_b)
    f, g = b[i], b[j]
    if not (isinstance(f, Box) and isinstance(g, Box) and f.k == g.k):
        raise ProofError("conj_intro_under_box needs two [k]-formulas with the same k")
    k = f.k
    t = b.taut(Implies(f.sub, Implies(g.sub, And(f.sub, g.sub))))
    step = b.mp(i, b.box_mono(k, t))          # [k](B -> A & B)
    return b.build(b.mp(j, b.k_step(k, step)))


# ------------------------------------------------------ scripted derivations


def _reflection_under_box_lines(b: ProofBuilder, n: int, q: Formula) -> int:
    inner = Implies(Box(0, q), q)
    goal = Box(n, inner)
    # [0]q -> [n]q -> [n]([0]q -> q)
    up = b.axiom("mono", q, m=0, n=n)
    weak = b.box_mono(n, b.taut(Implies(q, inner)))
    case_box = b.syllogism(up, weak)
    # ~[0]q -> <0>~q -> [n]<0>~q -> [n]([0]q -> q)
    nq = Not(q)
    dia = Dia(0, nq)
    to_dia = b.contrapose(b.box_mono(0, b.taut(Implies(Not(nq), q))))        # ~[0]q -> ~[0]~~q
    to_dia = b.syllogism(to_dia, b.taut(Implies(b._imp(to_dia).right, dia)))  # ~[0]q -> <0>~q
    lift = b.axiom("neg-intro", nq, m=0, n=n)
    from_dia = b.contrapose(b.box_mono(0, b.taut(Implies(q, Not(nq)))))      # ~[0]~~q -> ~[0]q
    from_dia = b.syllogism(b.taut(Implies(dia, b._imp(from_dia).left)), from_dia)
    from_dia = b.syllogism(from_dia, b.taut(Implies(Not(Box(0, q)), inner)))  # <0>~q -> ([0]q -> q)
    case_dia = b.syllogism(b.syllogism(to_dia, lift), b.box_mono(n, from_dia))
    cases = b.taut(Implies(Implies(Box(0, q), goal), Implies(Implies(Not(Box(0, q)), goal), goal)))
    return b.mp(case_dia, b.mp(case_box, cases))


def reflection_under_box_proof(n_target: int = 1, q: Formula = Var(1), n_modalities: int | None = None) -> HilbertProof:
    """GLP-proof of ``[n]([0]q -> q)`` for ``n >= 1``, by cases on ``[0]q``."""
    if n_target < 1:
        raise ValueError("n_target must be at least 1")
    top = max(n_target, max_modality(q) or 0) + 1
    b = ProofBuilder(LogicId("GLP", max(top, n_modalities or 0)))
    _reflection_under_box_lines(b, n_target, q)
    return b.build()


def q_k(k: int, p: Formula = Var(0)) -> Formula:
    """Q_1 = p, Q_{i+1} = p | [0]Q_i."""
    if k < 1:
        raise ValueError("index must be at least 1")
    f = p
    for _ in range(k - 1):
        f = Or(p, Box(0, f))
    return f


def box_refl_chain_proof(k: int, p: Formula = Var(0), n_modalities: int | None = None) -> HilbertProof:
    """GLP-proof of ``[1](Q_k(p) -> p)`` by induction on ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    top = max(1, max_modality(p) or 0) + 1
    b = ProofBuilder(LogicId("GLP", max(top, n_modalities or 0)))
    hyp = b.nec(1, b.taut(Implies(p, p)))  # [1](Q_1 -> p)
    for i in range(1, k):
        qi = q_k(i, p)
        refl = _reflection_under_box_lines(b, 1, qi)   # [1]([0]Q_i -> Q_i)
        # syllogism under [1]: [1]([0]Q_i -> p)
        ab, bc = Implies(Box(0, qi), qi), Implies(qi, p)
        t = b.taut(Implies(ab, Implies(bc, Implies(Box(0, qi), p))))
        step = b.mp(refl, b.box_mono(1, t))
        via_box = b.mp(hyp, b.k_step(1, step))
        # [1]([0]Q_i -> p) -> [1]((p | [0]Q_i) -> p)
        weaken = b.taut(Implies(Implies(Box(0, qi), p), Implies(q_k(i + 1, p), p)))
        hyp = b.mp(via_box, b.box_mono(1, weaken))
    return b.build()


def shipped_proofs() -> list[HilbertProof]:
    """Ten small GLP-proofs over [0], [1] used as search/proof cross-checks."""
    p0, p1 = Var(0), Var(1)
    glp2 = LogicId("GLP", 2)
    out = [
        reflection_under_box_proof(1, p1),
        reflection_under_box_proof(1, BOT),
        box_refl_chain_proof(1),
        box_refl_chain_proof(2),
        box_refl_chain_proof(3),
    ]

    b = ProofBuilder(glp2)
    b.axiom("mono", p0, m=0, n=1)
    out.append(b.build())

    b = ProofBuilder(glp2)
    b.axiom("neg-intro", p0, m=0, n=1)
    out.append(b.build())

    b = ProofBuilder(glp2)
    b.axiom("lob", p0, n=0)
    out.append(b.build())

    b = ProofBuilder(glp2)
    b.box_mono(1, b.taut(Implies(And(p0, p1), p0)))
    out.append(b.build())

    b = ProofBuilder(glp2)
    first = b.box_mono(0, b.taut(Implies(p0, Implies(p1, And(p0, p1)))))
    b.syllogism(first, b.axiom("K", p1, And(p0, p1), n=0))
    out.append(b.build())
    return out
