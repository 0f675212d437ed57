"""The WHILE language: syntax, parser, and executable concrete semantics.

The semantics is relational: ``rand`` evaluates to every integer in the
supplied window, division by zero yields no result at all, and commands step
nondeterministically through sets of states.  :func:`reachable` is the bounded
oracle the analyzer is tested against.

Arithmetic itself is unbounded (results may leave the window); only ``rand``
draws from the window, so windowing weakens the oracle but never the analyzer.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterator, Union

from .order import IntWindow


class AnalysisError(ValueError):
    """A semantic error surfaced while evaluating or analyzing a program."""


class UnboundVariableError(AnalysisError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable: {name}")
        self.name = name


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


# -- abstract syntax ------------------------------------------------------------

@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Rand:
    pass


@dataclass(frozen=True)
class BinA:
    op: str  # + - * /
    left: "Aexp"
    right: "Aexp"


Aexp = Union[Int, Var, Rand, BinA]


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # < =
    left: Aexp
    right: Aexp


@dataclass(frozen=True)
class BinB:
    op: str  # || &&
    left: "Bexp"
    right: "Bexp"


Bexp = Union[Bool, Cmp, BinB]


# Commands carry an optional program point ``pp``: the pre-order label given
# by label_program.  Residual commands synthesized while stepping (the Seq
# that re-queues a loop body) keep pp=None and are never the focus of a state.

@dataclass(frozen=True)
class Skip:
    pp: int | None = None


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Aexp
    pp: int | None = None


@dataclass(frozen=True)
class Seq:
    first: "Cexp"
    second: "Cexp"
    pp: int | None = None


@dataclass(frozen=True)
class If:
    guard: Bexp
    then: "Cexp"
    orelse: "Cexp"
    pp: int | None = None


@dataclass(frozen=True)
class While:
    guard: Bexp
    body: "Cexp"
    pp: int | None = None


Cexp = Union[Skip, Assign, Seq, If, While]


def label_program(ce: Cexp) -> Cexp:
    """Assign pre-order program points to every command node."""
    counter = itertools.count()

    def lab(c: Cexp) -> Cexp:
        pp = next(counter)
        match c:
            case Seq(first, second):
                return Seq(lab(first), lab(second), pp=pp)
            case If(guard, then, orelse):
                return If(guard, lab(then), lab(orelse), pp=pp)
            case While(guard, body):
                return While(guard, lab(body), pp=pp)
            case _:
                return replace(c, pp=pp)

    return lab(ce)


def iter_commands(ce: Cexp) -> Iterator[Cexp]:
    yield ce
    match ce:
        case Seq(first, second):
            yield from iter_commands(first)
            yield from iter_commands(second)
        case If(_, then, orelse):
            yield from iter_commands(then)
            yield from iter_commands(orelse)
        case While(_, body):
            yield from iter_commands(body)


def program_points(ce: Cexp) -> dict[int, Cexp]:
    return {c.pp: c for c in iter_commands(ce) if c.pp is not None}


def focus(ce: Cexp) -> int | None:
    """Program point of the first command to execute; None once terminal."""
    match ce:
        case Skip():
            return None
        case Seq(first, second):
            f = focus(first)
            return f if f is not None else focus(second)
        case _:
            return ce.pp


def _expr_vars(e: Aexp | Bexp, acc: set[str]) -> None:
    match e:
        case Var(x):
            acc.add(x)
        case BinA(_, left, right) | Cmp(_, left, right) | BinB(_, left, right):
            _expr_vars(left, acc)
            _expr_vars(right, acc)
        case _:
            pass


def program_vars(ce: Cexp) -> set[str]:
    acc: set[str] = set()
    for c in iter_commands(ce):
        match c:
            case Assign(x, e):
                acc.add(x)
                _expr_vars(e, acc)
            case If(g, _, _) | While(g, _):
                _expr_vars(g, acc)
    return acc


def assigned_vars(ce: Cexp) -> set[str]:
    """Variables the program writes; reads outside this set are unbound."""
    return {c.var for c in iter_commands(ce) if isinstance(c, Assign)}


# -- rendering -------------------------------------------------------------------

_A_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def render_aexp(ae: Aexp, prec: int = 0) -> str:
    match ae:
        case Int(i):
            return str(i)
        case Var(x):
            return x
        case Rand():
            return "rand"
        case BinA(op, left, right):
            p = _A_PREC[op]
            s = f"{render_aexp(left, p)} {op} {render_aexp(right, p + 1)}"
            return f"({s})" if p < prec else s
    raise TypeError(f"not an arithmetic expression: {ae!r}")


def render_bexp(be: Bexp, prec: int = 0) -> str:
    match be:
        case Bool(b):
            return "true" if b else "false"
        case Cmp(op, left, right):
            return f"{render_aexp(left)} {op} {render_aexp(right)}"
        case BinB(op, left, right):
            p = 2 if op == "&&" else 1
            s = f"{render_bexp(left, p)} {op} {render_bexp(right, p + 1)}"
            return f"({s})" if p < prec else s
    raise TypeError(f"not a boolean expression: {be!r}")


def render_cexp(ce: Cexp, depth: int = -1) -> str:
    """Source rendering; nested commands collapse to ``...`` once depth runs out."""
    if depth == 0:
        return "..."

    def block(c: Cexp) -> str:
        # if/while bodies and left operands of ';' are single statements in
        # the grammar, so a nested sequence needs parentheses to round-trip
        s = render_cexp(c, depth - 1)
        return f"({s})" if isinstance(c, Seq) and s != "..." else s

    match ce:
        case Skip():
            return "skip"
        case Assign(x, e):
            return f"{x} := {render_aexp(e)}"
        case Seq(first, second):
            return f"{block(first)}; {render_cexp(second, depth - 1)}"
        case If(g, t, e):
            return f"if {render_bexp(g)} then {block(t)} else {block(e)}"
        case While(g, b):
            return f"while {render_bexp(g)} do {block(b)}"
    raise TypeError(f"not a command: {ce!r}")


# -- parser ----------------------------------------------------------------------

_KEYWORDS = {"skip", "if", "then", "else", "while", "do", "rand", "true", "false"}
_SYMBOLS = (":=", "&&", "||", ";", "+", "-", "*", "/", "<", "=", "(", ")")


@dataclass(frozen=True)
class _Token:
    kind: str  # int ident keyword symbol eof
    value: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Token]:
    toks = []
    line, col, i = 1, 1, 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            toks.append(_Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            toks.append(_Token("keyword" if word in _KEYWORDS else "ident",
                               word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(_Token("symbol", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        what = "end of input" if tok.kind == "eof" else repr(tok.value)
        return ParseError(f"{message}, found {what}", tok.line, tok.col)

    def expect(self, value: str) -> _Token:
        tok = self.peek()
        if tok.value != value or tok.kind == "eof":
            raise self.fail(f"expected {value!r}")
        return self.next()

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.value == value

    # commands

    def cexp(self) -> Cexp:
        left = self.stmt()
        if self.at(";"):
            self.next()
            return Seq(left, self.cexp())
        return left

    def stmt(self) -> Cexp:
        tok = self.peek()
        if tok.value == "skip":
            self.next()
            return Skip()
        if tok.value == "if":
            self.next()
            guard = self.bexp()
            self.expect("then")
            then = self.stmt()
            self.expect("else")
            return If(guard, then, self.stmt())
        if tok.value == "while":
            self.next()
            guard = self.bexp()
            self.expect("do")
            return While(guard, self.stmt())
        if tok.value == "(":
            self.next()
            inner = self.cexp()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.next()
            self.expect(":=")
            return Assign(tok.value, self.aexp())
        raise self.fail("expected a command")

    # arithmetic

    def aexp(self) -> Aexp:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.next().value
            left = BinA(op, left, self.term())
        return left

    def term(self) -> Aexp:
        left = self.factor()
        while self.at("*") or self.at("/"):
            op = self.next().value
            left = BinA(op, left, self.factor())
        return left

    def factor(self) -> Aexp:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return Int(int(tok.value))
        if tok.value == "rand":
            self.next()
            return Rand()
        if tok.kind == "ident":
            self.next()
            return Var(tok.value)
        if tok.value == "(":
            self.next()
            inner = self.aexp()
            self.expect(")")
            return inner
        raise self.fail("expected an arithmetic expression")

    # booleans

    def bexp(self) -> Bexp:
        left = self.bterm()
        while self.at("||"):
            self.next()
            left = BinB("||", left, self.bterm())
        return left

    def bterm(self) -> Bexp:
        left = self.bfactor()
        while self.at("&&"):
            self.next()
            left = BinB("&&", left, self.bfactor())
        return left

    def bfactor(self) -> Bexp:
        tok = self.peek()
        if tok.value in ("true", "false"):
            self.next()
            return Bool(tok.value == "true")
        # A '(' may open either a parenthesized bexp or the aexp of a
        # comparison, so try the comparison first and backtrack.
        save = self.pos
        try:
            left = self.aexp()
            if self.at("<") or self.at("="):
                op = self.next().value
                return Cmp(op, left, self.aexp())
            raise self.fail("expected a comparison operator")
        except ParseError:
            self.pos = save
        if self.at("("):
            self.next()
            inner = self.bexp()
            self.expect(")")
            return inner
        raise self.fail("expected a boolean expression")


def parse(src: str) -> Cexp:
    parser = _Parser(src)
    ce = parser.cexp()
    if parser.peek().kind != "eof":
        raise parser.fail("unexpected trailing input")
    return ce


# -- concrete semantics ------------------------------------------------------------

@dataclass(frozen=True)
class Env:
    """Finite partial map from variables to integers."""

    items: tuple[tuple[str, int], ...]

    @staticmethod
    def from_dict(d: dict[str, int]) -> Env:
        return Env(tuple(sorted(d.items())))

    def get(self, x: str) -> int:
        for k, v in self.items:
            if k == x:
                return v
        raise UnboundVariableError(x)

    def set(self, x: str, v: int) -> Env:
        rest = tuple((k, w) for k, w in self.items if k != x)
        return Env(tuple(sorted(rest + ((x, v),))))

    def to_dict(self) -> dict[str, int]:
        return dict(self.items)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.items)


def denote_aop(op: str, i1: int, i2: int) -> int | None:
    """Integer arithmetic; division truncates toward zero and /0 is undefined."""
    if op == "+":
        return i1 + i2
    if op == "-":
        return i1 - i2
    if op == "*":
        return i1 * i2
    if op == "/":
        if i2 == 0:
            return None
        q = abs(i1) // abs(i2)
        return q if (i1 >= 0) == (i2 >= 0) else -q
    raise ValueError(f"unknown arithmetic operator {op!r}")


def denote_cmp(op: str, i1: int, i2: int) -> bool:
    if op == "<":
        return i1 < i2
    if op == "=":
        return i1 == i2
    raise ValueError(f"unknown comparison operator {op!r}")


def denote_bop(op: str, b1: bool, b2: bool) -> bool:
    if op == "||":
        return b1 or b2
    if op == "&&":
        return b1 and b2
    raise ValueError(f"unknown boolean operator {op!r}")


def eval_aexp(ae: Aexp, env: Env, window: IntWindow) -> set[int]:
    """Every value the expression can evaluate to; undefined operations vanish."""
    match ae:
        case Int(i):
            return {i}
        case Var(x):
            return {env.get(x)}
        case Rand():
            return set(window.values)
        case BinA(op, left, right):
            lefts = eval_aexp(left, env, window)
            rights = eval_aexp(right, env, window)
            out = set()
            for i1 in lefts:
                for i2 in rights:
                    v = denote_aop(op, i1, i2)
                    if v is not None:
                        out.add(v)
            return out
    raise TypeError(f"not an arithmetic expression: {ae!r}")


def eval_bexp(be: Bexp, env: Env, window: IntWindow) -> set[bool]:
    match be:
        case Bool(b):
            return {b}
        case Cmp(op, left, right):
            return {denote_cmp(op, i1, i2)
                    for i1 in eval_aexp(left, env, window)
                    for i2 in eval_aexp(right, env, window)}
        case BinB(op, left, right):
            return {denote_bop(op, b1, b2)
                    for b1 in eval_bexp(left, env, window)
                    for b2 in eval_bexp(right, env, window)}
    raise TypeError(f"not a boolean expression: {be!r}")


@dataclass(frozen=True)
class State:
    env: Env
    cmd: Cexp

    @property
    def terminal(self) -> bool:
        return isinstance(self.cmd, Skip)


def step(state: State, window: IntWindow) -> list[State]:
    """All one-step successors, in deterministic order."""
    env, cmd = state.env, state.cmd
    match cmd:
        case Skip():
            return []
        case Assign(x, ae):
            return [State(env.set(x, i), Skip())
                    for i in sorted(eval_aexp(ae, env, window))]
        case Seq(first, second):
            if isinstance(first, Skip):
                return [State(env, second)]
            return [State(s.env, Seq(s.cmd, second, pp=cmd.pp))
                    for s in step(State(env, first), window)]
        case If(guard, then, orelse):
            vals = eval_bexp(guard, env, window)
            out = []
            if True in vals:
                out.append(State(env, then))
            if False in vals:
                out.append(State(env, orelse))
            return out
        case While(guard, body):
            vals = eval_bexp(guard, env, window)
            out = []
            if True in vals:
                out.append(State(env, Seq(body, cmd)))
            if False in vals:
                out.append(State(env, Skip()))
            return out
    raise TypeError(f"not a command: {cmd!r}")


def reachable(state0: State, window: IntWindow,
              fuel: int) -> tuple[frozenset[State], bool]:
    """BFS closure of the step relation, up to ``fuel`` levels.

    The flag reports whether unexplored states remained when the fuel ran
    out; a program whose state space closes earlier is fully covered.
    """
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    seen = {state0}
    frontier = [state0]
    level = 0
    while frontier and level < fuel:
        nxt = []
        for st in frontier:
            for succ in step(st, window):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
        level += 1
    return frozenset(seen), bool(frontier)
