"""Gradual typing derived by abstraction over a precise subtyping lattice.

The precise system is a simply typed lambda calculus with booleans plus top
and bottom elements of the safe-for-substitution subtyping order.  Gradual
types add the unknown type ``?`` at the top of a separate *precision* order;
their meaning is the set of precise types obtained by filling in every ``?``.
Consistent subtyping and the gradual join are the optimal abstractions of
their precise counterparts, and an enumeration harness checks the standard
metatheory statements at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .galois import ConstructiveGC, LawReport
from .order import FiniteDomain, KleisliFn, MonotoneFn


# -- types -----------------------------------------------------------------------

@dataclass(frozen=True)
class TNone:
    def __str__(self) -> str:
        return "None"


@dataclass(frozen=True)
class TBool:
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class TAny:
    def __str__(self) -> str:
        return "Any"


@dataclass(frozen=True)
class TDyn:
    def __str__(self) -> str:
        return "?"


@dataclass(frozen=True)
class TArrow:
    dom: "GradualType"
    cod: "GradualType"

    def __str__(self) -> str:
        dom = f"({self.dom})" if isinstance(self.dom, TArrow) else str(self.dom)
        return f"{dom} -> {self.cod}"


PreciseType = Union[TNone, TBool, TAny, TArrow]
GradualType = Union[TNone, TBool, TAny, TArrow, TDyn]


def is_precise(t: GradualType) -> bool:
    match t:
        case TDyn():
            return False
        case TArrow(dom, cod):
            return is_precise(dom) and is_precise(cod)
        case _:
            return True


def subtype(t1: PreciseType, t2: PreciseType) -> bool:
    """Safe-for-substitution order: None at the bottom, Any at the top."""
    match (t1, t2):
        case (TNone(), _):
            return True
        case (_, TAny()):
            return True
        case (TBool(), TBool()):
            return True
        case (TArrow(d1, c1), TArrow(d2, c2)):
            return subtype(d2, d1) and subtype(c1, c2)
        case _:
            return False


def type_join(t1: PreciseType, t2: PreciseType) -> PreciseType:
    """Least upper bound under subtyping."""
    if subtype(t1, t2):
        return t2
    if subtype(t2, t1):
        return t1
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return TArrow(type_meet(t1.dom, t2.dom), type_join(t1.cod, t2.cod))
    return TAny()


def type_meet(t1: PreciseType, t2: PreciseType) -> PreciseType:
    """Greatest lower bound under subtyping."""
    if subtype(t1, t2):
        return t1
    if subtype(t2, t1):
        return t2
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return TArrow(type_join(t1.dom, t2.dom), type_meet(t1.cod, t2.cod))
    return TNone()


def precision_leq(t1: GradualType, t2: GradualType) -> bool:
    """``t1`` is at least as precise as ``t2``; ``?`` is the top."""
    if isinstance(t2, TDyn):
        return True
    if isinstance(t1, TDyn):
        return False
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return precision_leq(t1.dom, t2.dom) and precision_leq(t1.cod, t2.cod)
    return t1 == t2


@lru_cache(maxsize=None)
def precise_types(depth: int) -> tuple[PreciseType, ...]:
    """All precise types of nesting depth at most ``depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    base: tuple[PreciseType, ...] = (TNone(), TBool(), TAny())
    if depth == 1:
        return base
    inner = precise_types(depth - 1)
    return base + tuple(TArrow(d, c) for d in inner for c in inner)


@lru_cache(maxsize=None)
def gradual_types(depth: int) -> tuple[GradualType, ...]:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    base: tuple[GradualType, ...] = (TNone(), TBool(), TAny(), TDyn())
    if depth == 1:
        return base
    inner = gradual_types(depth - 1)
    return base + tuple(TArrow(d, c) for d in inner for c in inner)


def gradual_gc(depth: int) -> ConstructiveGC:
    """Connection between depth-bounded precise types and gradual types.

    Extraction is the identity injection; the meaning of a gradual type is
    every precise type more precise than it (within the depth bound).
    """
    conc = FiniteDomain.discrete(f"precise-types(depth<={depth})", precise_types(depth))
    abst = FiniteDomain.from_leq(f"gradual-types(depth<={depth})",
                                 gradual_types(depth), precision_leq)
    eta = MonotoneFn.from_callable(conc, abst, lambda t: t)
    mu = KleisliFn.from_callable(
        abst, conc,
        lambda g: [t for t in conc.elements if precision_leq(t, g)])
    return ConstructiveGC("gradual", conc, abst, eta, mu, window=depth)


def consistent_subtype(t1: GradualType, t2: GradualType) -> bool:
    """Some filling of the unknowns makes the precise types subtypes."""
    if isinstance(t1, TDyn) or isinstance(t2, TDyn):
        return True
    if isinstance(t1, TNone):
        return True
    if isinstance(t2, TAny):
        return True
    if isinstance(t1, TBool) and isinstance(t2, TBool):
        return True
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return consistent_subtype(t2.dom, t1.dom) and consistent_subtype(t1.cod, t2.cod)
    return False


def consistent_subtype_witnessed(t1: GradualType, t2: GradualType,
                                 depth: int) -> bool:
    """Existential-witness oracle for consistent subtyping, by enumeration."""
    cands = precise_types(depth)
    m1 = [t for t in cands if precision_leq(t, t1)]
    m2 = [t for t in cands if precision_leq(t, t2)]
    return any(subtype(p1, p2) for p1 in m1 for p2 in m2)


def gradual_join(t1: GradualType, t2: GradualType) -> GradualType:
    """Abstract join: ``?`` absorbs, and precise inputs join precisely."""
    if isinstance(t1, TDyn) or isinstance(t2, TDyn):
        return TDyn()
    if isinstance(t1, TNone):
        return t2
    if isinstance(t2, TNone):
        return t1
    if isinstance(t1, TAny) or isinstance(t2, TAny):
        return TAny()
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return TArrow(gradual_meet(t1.dom, t2.dom), gradual_join(t1.cod, t2.cod))
    if t1 == t2:
        return t1
    return TAny()


def gradual_meet(t1: GradualType, t2: GradualType) -> GradualType:
    if isinstance(t1, TDyn) or isinstance(t2, TDyn):
        return TDyn()
    if isinstance(t1, TAny):
        return t2
    if isinstance(t2, TAny):
        return t1
    if isinstance(t1, TNone) or isinstance(t2, TNone):
        return TNone()
    if isinstance(t1, TArrow) and isinstance(t2, TArrow):
        return TArrow(gradual_join(t1.dom, t2.dom), gradual_meet(t1.cod, t2.cod))
    if t1 == t2:
        return t1
    return TNone()


# -- terms -----------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Lit:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Lam:
    var: str
    ann: GradualType
    body: "Term"

    def __str__(self) -> str:
        return f"\\{self.var}:{self.ann}. {self.body}"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"

    def __str__(self) -> str:
        fn = f"({self.fn})" if isinstance(self.fn, (Lam, If, Ascribe)) else str(self.fn)
        arg = f"({self.arg})" if not isinstance(self.arg, (Var, Lit)) else str(self.arg)
        return f"{fn} {arg}"


@dataclass(frozen=True)
class If:
    guard: "Term"
    then: "Term"
    orelse: "Term"

    def __str__(self) -> str:
        return f"if {self.guard} then {self.then} else {self.orelse}"


@dataclass(frozen=True)
class Ascribe:
    expr: "Term"
    ann: GradualType

    def __str__(self) -> str:
        expr = f"({self.expr})" if isinstance(self.expr, (Lam, If)) else str(self.expr)
        return f"{expr} :: {self.ann}"


Term = Union[Var, Lit, Lam, App, If, Ascribe]


class IllTyped(ValueError):
    """Typing failure, carrying the failing rule and subterm as a diagnostic."""

    def __init__(self, rule: str, term: Term, detail: str):
        super().__init__(f"rule {rule}: {detail} in {term}")
        self.rule = rule
        self.term = term
        self.detail = detail


def _fun_parts(t: GradualType, gradual: bool) -> tuple[GradualType, GradualType] | None:
    if gradual and isinstance(t, TDyn):
        return TDyn(), TDyn()
    if isinstance(t, TArrow):
        return t.dom, t.cod
    return None


def _typecheck(term: Term, ctx: dict[str, GradualType], gradual: bool) -> GradualType:
    sub = consistent_subtype if gradual else subtype
    join = gradual_join if gradual else type_join
    match term:
        case Var(x):
            if x not in ctx:
                raise IllTyped("var", term, f"unbound variable {x}")
            return ctx[x]
        case Lit(_):
            return TBool()
        case Lam(x, ann, body):
            if not gradual and not is_precise(ann):
                raise IllTyped("lam", term, "unknown type in a precise term")
            return TArrow(ann, _typecheck(body, ctx | {x: ann}, gradual))
        case App(fn, arg):
            tf = _typecheck(fn, ctx, gradual)
            parts = _fun_parts(tf, gradual)
            if parts is None:
                raise IllTyped("app", term, f"operator type {tf} is not a function type")
            targ = _typecheck(arg, ctx, gradual)
            if not sub(targ, parts[0]):
                raise IllTyped("app", term,
                               f"argument type {targ} does not match {parts[0]}")
            return parts[1]
        case If(guard, then, orelse):
            tg = _typecheck(guard, ctx, gradual)
            if not sub(tg, TBool()):
                raise IllTyped("if", term, f"guard type {tg} is not boolean")
            return join(_typecheck(then, ctx, gradual),
                        _typecheck(orelse, ctx, gradual))
        case Ascribe(expr, ann):
            if not gradual and not is_precise(ann):
                raise IllTyped("ascribe", term, "unknown type in a precise term")
            te = _typecheck(expr, ctx, gradual)
            if not sub(te, ann):
                raise IllTyped("ascribe", term, f"type {te} does not match {ann}")
            return ann
    raise TypeError(f"not a term: {term!r}")


def typecheck_precise(term: Term, ctx: dict[str, PreciseType] | None = None) -> PreciseType:
    return _typecheck(term, dict(ctx or {}), gradual=False)


def typecheck_gradual(term: Term, ctx: dict[str, GradualType] | None = None) -> GradualType:
    return _typecheck(term, dict(ctx or {}), gradual=True)


def try_type(term: Term, gradual: bool) -> GradualType | None:
    try:
        return _typecheck(term, {}, gradual)
    except IllTyped:
        return None


# -- dynamic-language embedding ----------------------------------------------------

@dataclass(frozen=True)
class UVar:
    name: str


@dataclass(frozen=True)
class ULit:
    value: bool


@dataclass(frozen=True)
class ULam:
    var: str
    body: "Untyped"


@dataclass(frozen=True)
class UApp:
    fn: "Untyped"
    arg: "Untyped"


@dataclass(frozen=True)
class UIf:
    guard: "Untyped"
    then: "Untyped"
    orelse: "Untyped"


Untyped = Union[UVar, ULit, ULam, UApp, UIf]


class OpenTermError(ValueError):
    pass


def free_vars(u: Untyped, bound: frozenset[str] = frozenset()) -> set[str]:
    match u:
        case UVar(x):
            return set() if x in bound else {x}
        case ULit(_):
            return set()
        case ULam(x, body):
            return free_vars(body, bound | {x})
        case UApp(fn, arg):
            return free_vars(fn, bound) | free_vars(arg, bound)
        case UIf(g, t, e):
            return free_vars(g, bound) | free_vars(t, bound) | free_vars(e, bound)
    raise TypeError(f"not an untyped term: {u!r}")


def embed_dynamic(u: Untyped) -> Term:
    """Embed a closed dynamic-language term: binders get ``?`` annotations and
    every non-variable node is ascribed at ``?``, so the result checks at ``?``."""
    if free_vars(u):
        raise OpenTermError(f"term has free variables: {sorted(free_vars(u))}")
    return _embed(u)


def _embed(u: Untyped) -> Term:
    match u:
        case UVar(x):
            return Var(x)
        case ULit(b):
            return Ascribe(Lit(b), TDyn())
        case ULam(x, body):
            return Ascribe(Lam(x, TDyn(), _embed(body)), TDyn())
        case UApp(fn, arg):
            return Ascribe(App(_embed(fn), _embed(arg)), TDyn())
        case UIf(g, t, e):
            return Ascribe(If(_embed(g), _embed(t), _embed(e)), TDyn())
    raise TypeError(f"not an untyped term: {u!r}")


# -- enumeration harness -------------------------------------------------------------

def enumerate_terms(max_size: int, anns: tuple[GradualType, ...]) -> Iterator[Term]:
    """All closed terms with at most ``max_size`` nodes and the given annotations.

    Binder names follow the binding depth, so enumerated terms are canonical
    up to alpha-renaming.
    """
    def exact(n: int, ctx: tuple[str, ...]) -> Iterator[Term]:
        if n < 1:
            return
        if n == 1:
            for x in ctx:
                yield Var(x)
            yield Lit(True)
            yield Lit(False)
            return
        name = f"x{len(ctx)}"
        for ann in anns:
            for body in exact(n - 1, ctx + (name,)):
                yield Lam(name, ann, body)
        for ann in anns:
            for expr in exact(n - 1, ctx):
                yield Ascribe(expr, ann)
        for i in range(1, n - 1):
            for fn in exact(i, ctx):
                for arg in exact(n - 1 - i, ctx):
                    yield App(fn, arg)
        for i in range(1, n - 2):
            for j in range(1, n - 1 - i):
                k = n - 1 - i - j
                for g in exact(i, ctx):
                    for t in exact(j, ctx):
                        for e in exact(k, ctx):
                            yield If(g, t, e)

    for n in range(1, max_size + 1):
        yield from exact(n, ())


def enumerate_untyped(max_size: int) -> Iterator[Untyped]:
    def exact(n: int, ctx: tuple[str, ...]) -> Iterator[Untyped]:
        if n < 1:
            return
        if n == 1:
            for x in ctx:
                yield UVar(x)
            yield ULit(True)
            yield ULit(False)
            return
        name = f"x{len(ctx)}"
        for body in exact(n - 1, ctx + (name,)):
            yield ULam(name, body)
        for i in range(1, n - 1):
            for fn in exact(i, ctx):
                for arg in exact(n - 1 - i, ctx):
                    yield UApp(fn, arg)
        for i in range(1, n - 2):
            for j in range(1, n - 1 - i):
                k = n - 1 - i - j
                for g in exact(i, ctx):
                    for t in exact(j, ctx):
                        for e in exact(k, ctx):
                            yield UIf(g, t, e)

    for n in range(1, max_size + 1):
        yield from exact(n, ())


def term_annotations(term: Term) -> list[GradualType]:
    match term:
        case Var(_) | Lit(_):
            return []
        case Lam(_, ann, body):
            return [ann] + term_annotations(body)
        case App(fn, arg):
            return term_annotations(fn) + term_annotations(arg)
        case If(g, t, e):
            return term_annotations(g) + term_annotations(t) + term_annotations(e)
        case Ascribe(expr, ann):
            return term_annotations(expr) + [ann]
    raise TypeError(f"not a term: {term!r}")


def replace_annotations(term: Term, anns: list[GradualType]) -> Term:
    """Rebuild a term with new annotations, consumed left to right."""
    def go(t: Term, it: Iterator[GradualType]) -> Term:
        match t:
            case Var(_) | Lit(_):
                return t
            case Lam(x, _, body):
                ann = next(it)
                return Lam(x, ann, go(body, it))
            case App(fn, arg):
                return App(go(fn, it), go(arg, it))
            case If(g, th, e):
                return If(go(g, it), go(th, it), go(e, it))
            case Ascribe(expr, _):
                inner = go(expr, it)
                return Ascribe(inner, next(it))
        raise TypeError(f"not a term: {t!r}")

    return go(term, iter(anns))


def precision_successors(term: Term, depth: int) -> Iterator[Term]:
    """Every term obtained by making annotations less precise, pointwise."""
    anns = term_annotations(term)
    choices = [[g for g in gradual_types(depth) if precision_leq(a, g)] for a in anns]
    def combos(i: int, acc: list[GradualType]) -> Iterator[list[GradualType]]:
        if i == len(choices):
            yield acc
            return
        for g in choices[i]:
            yield from combos(i + 1, acc + [g])
    for combo in combos(0, []):
        yield replace_annotations(term, combo)


def term_precision_leq(t1: Term, t2: Term) -> bool:
    """Pointwise annotation precision on structurally identical terms."""
    match (t1, t2):
        case (Var(a), Var(b)):
            return a == b
        case (Lit(a), Lit(b)):
            return a == b
        case (Lam(x1, a1, b1), Lam(x2, a2, b2)):
            return x1 == x2 and precision_leq(a1, a2) and term_precision_leq(b1, b2)
        case (App(f1, a1), App(f2, a2)):
            return term_precision_leq(f1, f2) and term_precision_leq(a1, a2)
        case (If(g1, t1_, e1), If(g2, t2_, e2)):
            return (term_precision_leq(g1, g2) and term_precision_leq(t1_, t2_)
                    and term_precision_leq(e1, e2))
        case (Ascribe(e1, a1), Ascribe(e2, a2)):
            return term_precision_leq(e1, e2) and precision_leq(a1, a2)
        case _:
            return False


def check_fully_annotated_equivalence(size: int, depth: int) -> LawReport:
    """Precise and gradual checking agree on every term without unknowns."""
    anns = precise_types(depth)
    cex = []
    count = 0
    for term in enumerate_terms(size, anns):
        count += 1
        tp = try_type(term, gradual=False)
        tg = try_type(term, gradual=True)
        if tp != tg:
            cex.append({"term": str(term), "precise": str(tp), "gradual": str(tg)})
    return LawReport("fully-annotated-equivalence",
                     f"{count} closed precise terms (size<={size}, type depth<={depth})",
                     size, tuple(cex))


def check_dynamic_embedding(size: int) -> LawReport:
    """Every closed untyped term embeds and checks at the unknown type."""
    cex = []
    count = 0
    for u in enumerate_untyped(size):
        count += 1
        t = try_type(embed_dynamic(u), gradual=True)
        if t != TDyn():
            cex.append({"term": str(embed_dynamic(u)), "type": str(t)})
    return LawReport("dynamic-embedding",
                     f"{count} closed untyped terms (size<={size})", size, tuple(cex))


def check_gradual_guarantee(size: int, depth: int) -> LawReport:
    """Less precise annotations keep terms typable, at a less precise type."""
    anns = gradual_types(depth)
    cex = []
    checked = 0
    for term in enumerate_terms(size, anns):
        t1 = try_type(term, gradual=True)
        if t1 is None:
            continue
        for succ in precision_successors(term, depth):
            checked += 1
            t2 = try_type(succ, gradual=True)
            if t2 is None:
                cex.append({"term": str(term), "weakened": str(succ),
                            "lost": "typability"})
            elif not precision_leq(t1, t2):
                cex.append({"term": str(term), "weakened": str(succ),
                            "type": str(t1), "weakened_type": str(t2)})
    return LawReport("gradual-guarantee",
                     f"{checked} precision pairs of typable terms "
                     f"(size<={size}, type depth<={depth})", size, tuple(cex))


def check_metatheory(size: int = 4, depth: int = 1,
                     edl_size: int = 3) -> tuple[LawReport, LawReport, LawReport]:
    """The three enumeration-checked metatheory statements, as law reports."""
    return (check_fully_annotated_equivalence(size, depth),
            check_dynamic_embedding(edl_size),
            check_gradual_guarantee(size, depth))


def check_consistent_subtype_witnessed(depth: int, witness_depth: int) -> LawReport:
    """The algorithmic rules agree with the existential witness search."""
    cex = []
    types = gradual_types(depth)
    for t1 in types:
        for t2 in types:
            algo = consistent_subtype(t1, t2)
            oracle = consistent_subtype_witnessed(t1, t2, witness_depth)
            if algo != oracle:
                cex.append({"t1": str(t1), "t2": str(t2),
                            "rules": algo, "witness-search": oracle})
    return LawReport("consistent-subtyping vs witness search",
                     f"gradual type pairs (depth<={depth}, witnesses<={witness_depth})",
                     depth, tuple(cex))


def check_unknown_laws(depth: int) -> LawReport:
    """``?`` is consistent with everything and absorbs the gradual join."""
    cex = []
    for t in gradual_types(depth):
        if not consistent_subtype(TDyn(), t):
            cex.append({"law": "? <:# t", "t": str(t)})
        if not consistent_subtype(t, TDyn()):
            cex.append({"law": "t <:# ?", "t": str(t)})
        if gradual_join(TDyn(), t) != TDyn() or gradual_join(t, TDyn()) != TDyn():
            cex.append({"law": "? join t = ?", "t": str(t)})
    return LawReport("unknown-type laws", f"gradual types (depth<={depth})",
                     depth, tuple(cex))


def check_join_soundness(depth: int) -> LawReport:
    """Every realizable precise join is covered by the gradual join.

    This is the one-sided reading of the induced specification: the gradual
    join may stay less precise than the enumerated optimum at absorbing
    corners (``?`` wins over ``Any``), but never misses a witness.
    """
    cex = []
    types = gradual_types(depth)
    precise = precise_types(depth)
    members = {g: [t for t in precise if precision_leq(t, g)] for g in types}
    for a in types:
        for b in types:
            gj = gradual_join(a, b)
            for t1 in members[a]:
                for t2 in members[b]:
                    if not precision_leq(type_join(t1, t2), gj):
                        cex.append({"t1": str(a), "t2": str(b),
                                    "witness": f"{t1} join {t2}"})
    return LawReport("gradual-join soundness",
                     f"gradual type pairs (depth<={depth})", depth, tuple(cex))


def law_suite(depth: int = 2, seed: int = 0) -> list[LawReport]:
    """Connection laws plus the operator and metatheory checks."""
    from .galois import constructive_law_suite

    reports = constructive_law_suite(gradual_gc(depth), seed=seed)
    reports.append(check_consistent_subtype_witnessed(depth, depth + 1))
    reports.append(check_unknown_laws(depth))
    reports.append(check_join_soundness(depth))
    reports.extend(check_metatheory(3, 1, 3))
    return reports


# -- concrete syntax ---------------------------------------------------------------

class TermParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"at {pos}: {message}")
        self.pos = pos


_TYPE_HEADS = {"Bool": TBool, "None": TNone, "Any": TAny}


class _TermParser:
    """Tokenizer and recursive-descent parser for the gradual term syntax."""

    _SYMS = ("::", "->", "\\", ":", ".", "(", ")", "?")
    _KEYWORDS = {"if", "then", "else", "true", "false"}

    def __init__(self, src: str):
        self.toks: list[tuple[str, str, int]] = []
        i = 0
        while i < len(src):
            ch = src[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                word = src[i:j]
                kind = "keyword" if word in self._KEYWORDS else "word"
                self.toks.append((kind, word, i))
                i = j
                continue
            for sym in self._SYMS:
                if src.startswith(sym, i):
                    self.toks.append(("symbol", sym, i))
                    i += len(sym)
                    break
            else:
                raise TermParseError(f"unexpected character {ch!r}", i)
        self.toks.append(("eof", "", len(src)))
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.peek()
        if kind == "eof" or val != value:
            raise TermParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        self.next()

    def at(self, value: str) -> bool:
        kind, val, _ = self.peek()
        return kind != "eof" and val == value

    def type_(self) -> GradualType:
        left = self.type_atom()
        if self.at("->"):
            self.next()
            return TArrow(left, self.type_())
        return left

    def type_atom(self) -> GradualType:
        kind, val, pos = self.peek()
        if val == "?":
            self.next()
            return TDyn()
        if val in _TYPE_HEADS:
            self.next()
            return _TYPE_HEADS[val]()
        if val == "(":
            self.next()
            inner = self.type_()
            self.expect(")")
            return inner
        raise TermParseError(f"expected a type, found {val or 'end of input'!r}", pos)

    def term(self) -> Term:
        kind, val, pos = self.peek()
        if val == "\\":
            self.next()
            k2, name, p2 = self.next()
            if k2 != "word":
                raise TermParseError("expected a binder name", p2)
            self.expect(":")
            ann = self.type_()
            self.expect(".")
            return Lam(name, ann, self.term())
        if val == "if":
            self.next()
            guard = self.term()
            self.expect("then")
            then = self.term()
            self.expect("else")
            return If(guard, then, self.term())
        return self.ascription()

    def ascription(self) -> Term:
        expr = self.application()
        while self.at("::"):
            self.next()
            expr = Ascribe(expr, self.type_())
        return expr

    def application(self) -> Term:
        expr = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind in ("word",) or val in ("true", "false", "("):
                expr = App(expr, self.atom())
            else:
                return expr

    def atom(self) -> Term:
        kind, val, pos = self.next()
        if val == "true":
            return Lit(True)
        if val == "false":
            return Lit(False)
        if kind == "word":
            return Var(val)
        if val == "(":
            inner = self.term()
            self.expect(")")
            return inner
        raise TermParseError(f"expected a term, found {val or 'end of input'!r}", pos)


def parse_term(src: str) -> Term:
    parser = _TermParser(src)
    term = parser.term()
    kind, val, pos = parser.peek()
    if kind != "eof":
        raise TermParseError(f"unexpected trailing input {val!r}", pos)
    return term


def parse_type(src: str) -> GradualType:
    parser = _TermParser(src)
    t = parser.type_()
    kind, val, pos = parser.peek()
    if kind != "eof":
        raise TermParseError(f"unexpected trailing input {val!r}", pos)
    return t
