"""Polymodal formulas: AST, parser, printer, substitutions.

Grammar (whitespace insignificant)::

    atom    := 'p' digits | 'T' | 'F' | '(' iff ')'
    prefix  := '~' prefix | '[' k ']' prefix | '<' k '>' prefix | atom
    and     := prefix ('&' prefix)*          left-assoc
    or      := and ('|' and)*                left-assoc
    imp     := or ('->' imp)?                right-assoc
    iff     := imp ('<->' iff)?              right-assoc
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

DEFAULT_MODALITIES = 4


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ModalityRangeError(FormulaError):
    def __init__(self, k: int, n: int, pos: int | None = None):
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"modality [{k}] out of range for n={n}{where}")
        self.k = k
        self.n = n
        self.pos = pos


class Formula:
    """Base class. Subclasses are frozen dataclasses with a cached hash."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_str(self)

    # operator sugar for building formulas in code and tests
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)


def _hashed(cls):
    """Make a frozen dataclass cache its structural hash."""
    cls = dataclass(frozen=True, eq=True, repr=True)(cls)
    fields = [f.name for f in cls.__dataclass_fields__.values() if f.compare]
    tag = cls.__name__

    def __hash__(self):
        try:
            return object.__getattribute__(self, "_h")
        except AttributeError:
            h = hash((tag,) + tuple(getattr(self, f) for f in fields))
            object.__setattr__(self, "_h", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_hashed
class Var(Formula):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise FormulaError("variable index must be nonnegative")


@_hashed
class Top(Formula):
    pass


@_hashed
class Bottom(Formula):
    pass


@_hashed
class Not(Formula):
    sub: Formula


@_hashed
class And(Formula):
    left: Formula
    right: Formula


@_hashed
class Or(Formula):
    left: Formula
    right: Formula


@_hashed
class Implies(Formula):
    left: Formula
    right: Formula


@_hashed
class Iff(Formula):
    left: Formula
    right: Formula


@_hashed
class Box(Formula):
    k: int
    sub: Formula

    def __post_init__(self):
        if self.k < 0:
            raise FormulaError("modality index must be nonnegative")


@_hashed
class Dia(Formula):
    k: int
    sub: Formula

    def __post_init__(self):
        if self.k < 0:
            raise FormulaError("modality index must be nonnegative")


TOP = Top()
BOT = Bottom()
BINARY = (And, Or, Implies, Iff)
UNARY_MODAL = (Box, Dia)


def p(i: int) -> Var:
    return Var(i)


def conj(items: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; the empty conjunction is T."""
    result = None
    for f in items:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


def disj(items: Iterable[Formula]) -> Formula:
    """Left-folded disjunction; the empty disjunction is F."""
    result = None
    for f in items:
        result = f if result is None else Or(result, f)
    return BOT if result is None else result


def dia_power(k: int, times: int, body: Formula = TOP) -> Formula:
    for _ in range(times):
        body = Dia(k, body)
    return body


def box_power(k: int, times: int, body: Formula = BOT) -> Formula:
    for _ in range(times):
        body = Box(k, body)
    return body


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Box, Dia)):
        return (f.sub,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> set[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        stack.extend(children(g))
    return out


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal (with repetitions)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def max_modality(f: Formula) -> int | None:
    ks = [g.k for g in walk(f) if isinstance(g, UNARY_MODAL)]
    return max(ks) if ks else None


def variables(f: Formula) -> set[int]:
    return {g.index for g in walk(f) if isinstance(g, Var)}


def is_closed(f: Formula) -> bool:
    return not variables(f)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def check_modalities(f: Formula, n: int) -> None:
    for g in walk(f):
        if isinstance(g, UNARY_MODAL) and g.k >= n:
            raise ModalityRangeError(g.k, n)


def box_normal(f: Formula) -> Formula:
    """Replace every <k>A by ~[k]~A."""
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Dia):
            r = Not(Box(g.k, Not(go(g.sub))))
        elif isinstance(g, Box):
            r = Box(g.k, go(g.sub))
        elif isinstance(g, Not):
            r = Not(go(g.sub))
        elif isinstance(g, BINARY):
            r = type(g)(go(g.left), go(g.right))
        else:
            r = g
        memo[g] = r
        return r

    return go(f)


def map_formula(f: Formula, leaf) -> Formula:
    """Rebuild ``f`` bottom-up, replacing each leaf ``g`` by ``leaf(g)``."""
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, UNARY_MODAL):
            r = type(g)(g.k, go(g.sub))
        elif isinstance(g, Not):
            r = Not(go(g.sub))
        elif isinstance(g, BINARY):
            r = type(g)(go(g.left), go(g.right))
        else:
            r = leaf(g)
        memo[g] = r
        return r

    return go(f)


# ---------------------------------------------------------------- substitution


class Substitution(Mapping[int, Formula]):
    """Finite map from variable indices to formulas; identity elsewhere."""

    __slots__ = ("_b",)

    def __init__(self, bindings: Mapping[int, Formula] | Iterable[tuple[int, Formula]] = ()):
        b = dict(bindings)
        # p_i := p_i is the identity and is not stored
        self._b = {i: f for i, f in sorted(b.items()) if f != Var(i)}

    def __getitem__(self, i: int) -> Formula:
        return self._b[i]

    def __iter__(self):
        return iter(self._b)

    def __len__(self) -> int:
        return len(self._b)

    def __call__(self, f: Formula) -> Formula:
        return apply_subst(self, f)

    def image(self, i: int) -> Formula:
        return self._b.get(i, Var(i))

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._b == other._b

    def __hash__(self) -> int:
        return hash(tuple(self._b.items()))

    def __repr__(self) -> str:
        return f"Substitution({{{', '.join(f'p{i}: {to_str(f)!r}' for i, f in self._b.items())}}})"

    def __str__(self) -> str:
        return ";".join(f"p{i}:={to_str(f)}" for i, f in self._b.items())


IDENTITY = Substitution()


def apply_subst(sigma: Mapping[int, Formula], f: Formula) -> Formula:
    if not sigma:
        return f
    return map_formula(f, lambda g: sigma.get(g.index, g) if isinstance(g, Var) else g)


def compose_subst(theta: Mapping[int, Formula], sigma: Mapping[int, Formula]) -> Substitution:
    """The substitution ``p -> theta(sigma(p))``."""
    out = {i: apply_subst(theta, f) for i, f in sigma.items()}
    for i, f in theta.items():
        out.setdefault(i, f)
    return Substitution(out)


# --------------------------------------------------------------------- printer

# binding strength: higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT = (Iff, Implies)


def to_str(f: Formula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, (Not, Box, Dia)):
        head = "~" if isinstance(f, Not) else (f"[{f.k}]" if isinstance(f, Box) else f"<{f.k}>")
        inner = to_str(f.sub)
        if isinstance(f.sub, BINARY):
            inner = f"({inner})"
        return head + inner
    prec = _PREC[type(f)]
    left, right = to_str(f.left), to_str(f.right)
    lp = _PREC.get(type(f.left), 9)
    rp = _PREC.get(type(f.right), 9)
    if isinstance(f, _RIGHT):
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {_OPS[type(f)]} {right}"


# ---------------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(p\d+)|(\[\d+\])|(<\d+>)|(<->)|(->)|([~&|()TF]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        kind = ("var", "box", "dia", "op", "op", "op")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_end(self) -> None:
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r}", pos)

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek()[1] == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.prefix()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.prefix())
        return left

    def prefix(self) -> Formula:
        kind, val, pos = self.take()
        if val == "~":
            return Not(self.prefix())
        if kind in ("box", "dia"):
            k = int(val[1:-1])
            if k >= self.n:
                raise ModalityRangeError(k, self.n, pos)
            sub = self.prefix()
            return Box(k, sub) if kind == "box" else Dia(k, sub)
        if kind == "var":
            return Var(int(val[1:]))
        if val == "T":
            return TOP
        if val == "F":
            return BOT
        if val == "(":
            inner = self.iff()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ParseError("expected ')'", p2)
            return inner
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse(text: str, n: int = DEFAULT_MODALITIES) -> Formula:
    """Parse ``text``; modality indices must be below ``n``."""
    if n < 1:
        raise FormulaError("modality count must be at least 1")
    parser = _Parser(text, n)
    f = parser.iff()
    parser.expect_end()
    return f


def parse_subst(text: str, n: int = DEFAULT_MODALITIES) -> Substitution:
    """Parse ``"p0:=<f>;p1:=<g>"``."""
    bindings = {}
    offset = 0
    for chunk in text.split(";"):
        if chunk.strip():
            lhs, sep, rhs = chunk.partition(":=")
            m = re.fullmatch(r"\s*p(\d+)\s*", lhs)
            if not sep or not m:
                raise ParseError("expected 'p<i>:=<formula>'", offset)
            try:
                bindings[int(m.group(1))] = parse(rhs, n)
            except ParseError as e:
                raise ParseError(str(e).rsplit(" at position", 1)[0], offset + len(lhs) + 2 + e.pos) from None
        offset += len(chunk) + 1
    return Substitution(bindings)


# --------------------------------------------------------------------- logics


@dataclass(frozen=True)
class LogicId:
    """A logic together with its modality count ``n``."""

    name: str  # "GL" | "J" | "GLP" | "GLPS"
    n: int = DEFAULT_MODALITIES

    def __post_init__(self):
        if self.name not in ("GL", "J", "GLP", "GLPS"):
            raise ValueError(f"unknown logic {self.name!r}")
        if self.name == "GL" and self.n != 1:
            object.__setattr__(self, "n", 1)
        if self.n < 1:
            raise ValueError("modality count must be at least 1")

    @property
    def family(self) -> str:
        """GL is GLP with one modality."""
        return "GLP" if self.name == "GL" else self.name

    def __str__(self) -> str:
        return self.name if self.name == "GL" else f"{self.name}{self.n}"


GL = LogicId("GL", 1)
