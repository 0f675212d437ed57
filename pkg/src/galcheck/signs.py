"""Sign-domain static analysis for the WHILE language.

The value domain is the eight-point sign lattice; environments are abstracted
pointwise; guards go through a four-point abstract boolean lattice.  The
whole-program analyzer is a worklist closure of the abstract transition
relation, which terminates without widening because both the residual-command
set and the environment lattice are finite.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import whilelang as wl
from .galois import ConstructiveGC
from .order import DomainError, FiniteDomain, IntWindow, KleisliFn, MonotoneFn

SIGNS = ("none", "neg", "zer", "pos", "negz", "nzer", "posz", "any")

_SIGN_HASSE = [
    ("none", "neg"), ("none", "zer"), ("none", "pos"),
    ("neg", "negz"), ("neg", "nzer"),
    ("zer", "negz"), ("zer", "posz"),
    ("pos", "nzer"), ("pos", "posz"),
    ("negz", "any"), ("nzer", "any"), ("posz", "any"),
]


@lru_cache(maxsize=None)
def sign_domain() -> FiniteDomain:
    return FiniteDomain.from_hasse("sign", SIGNS, _SIGN_HASSE)


@lru_cache(maxsize=None)
def _sign_tables() -> tuple[dict, dict, dict]:
    dom = sign_domain()
    leq = {(a, b): dom.leq(a, b) for a in SIGNS for b in SIGNS}
    join = {(a, b): dom.join(a, b) for a in SIGNS for b in SIGNS}
    meet = {(a, b): dom.meet(a, b) for a in SIGNS for b in SIGNS}
    return leq, join, meet


def sign_leq(a: str, b: str) -> bool:
    return _sign_tables()[0][(a, b)]


def sign_join(a: str, b: str) -> str:
    return _sign_tables()[1][(a, b)]


def sign_meet(a: str, b: str) -> str:
    return _sign_tables()[2][(a, b)]


def eta_int(i: int) -> str:
    """Best sign of a single integer."""
    if i < 0:
        return "neg"
    if i == 0:
        return "zer"
    return "pos"


_SIGN_PRED = {
    "none": lambda i: False,
    "neg": lambda i: i < 0,
    "zer": lambda i: i == 0,
    "pos": lambda i: i > 0,
    "negz": lambda i: i <= 0,
    "nzer": lambda i: i != 0,
    "posz": lambda i: i >= 0,
    "any": lambda i: True,
}


def sign_contains(s: str, i: int) -> bool:
    """Membership in the (unbounded) meaning of a sign."""
    return _SIGN_PRED[s](i)


def sign_members(s: str, window: IntWindow) -> list[int]:
    return [i for i in window.values if sign_contains(s, i)]


def sign_gc(window: IntWindow) -> ConstructiveGC:
    if window.bound < 1:
        raise DomainError("sign fixture needs a window bound of at least 1")
    ints = window.domain
    dom = sign_domain()
    eta = MonotoneFn.from_callable(ints, dom, eta_int)
    mu = KleisliFn.from_callable(dom, ints, lambda s: sign_members(s, window))
    return ConstructiveGC("sign", ints, dom, eta, mu, window=window.bound)


# -- abstract booleans ---------------------------------------------------------

ABS_BOOLS = ("none", "ff", "tt", "any")


@lru_cache(maxsize=None)
def absbool_domain() -> FiniteDomain:
    return FiniteDomain.from_hasse(
        "absbool", ABS_BOOLS,
        [("none", "ff"), ("none", "tt"), ("ff", "any"), ("tt", "any")])


def absbool_join(a: str, b: str) -> str:
    if a == b:
        return a
    if a == "none":
        return b
    if b == "none":
        return a
    return "any"


def eta_bool(b: bool) -> str:
    return "tt" if b else "ff"


def absbool_gc() -> ConstructiveGC:
    bools = FiniteDomain.discrete("bool", (False, True))
    dom = absbool_domain()
    eta = MonotoneFn.from_callable(bools, dom, eta_bool)
    mu = KleisliFn.from_callable(
        dom, bools,
        lambda a: [b for b in (False, True) if absbool_contains(a, b)])
    return ConstructiveGC("absbool", bools, dom, eta, mu)


def absbool_contains(a: str, b: bool) -> bool:
    return {"none": False, "ff": not b, "tt": b, "any": True}[a]


# -- transfer functions --------------------------------------------------------

_ATOMS = ("neg", "zer", "pos")

_NEGATE = {"none": "none", "neg": "pos", "zer": "zer", "pos": "neg",
           "negz": "posz", "nzer": "nzer", "posz": "negz", "any": "any"}

# sign of i1/i2 (truncating division) per sign atom of the operands; the
# magnitude of the dividend decides between zero and the sign of the quotient,
# so nonzero/nonzero covers both.
_ATOM_DIV = {
    ("neg", "neg"): "posz", ("neg", "pos"): "negz",
    ("zer", "neg"): "zer", ("zer", "pos"): "zer",
    ("pos", "neg"): "negz", ("pos", "pos"): "posz",
}


def _atoms(s: str) -> tuple[str, ...]:
    return tuple(a for a in _ATOMS if sign_leq(a, s))


def _join_all(parts: Iterable[str]) -> str:
    acc = "none"
    for p in parts:
        acc = sign_join(acc, p)
    return acc


def _abs_add(s1: str, s2: str) -> str:
    # Case join for addition; empty-meaning operands have no sum at all.
    if s1 == "none" or s2 == "none":
        return "none"
    fired = []
    if sign_leq("pos", s1) or sign_leq("pos", s2):
        fired.append("pos")
    if sign_leq("neg", s1) or sign_leq("neg", s2):
        fired.append("neg")
    if ((sign_leq("zer", s1) and sign_leq("zer", s2))
            or (sign_leq("pos", s1) and sign_leq("neg", s2))
            or (sign_leq("neg", s1) and sign_leq("pos", s2))):
        fired.append("zer")
    return _join_all(fired)


def _abs_mul(s1: str, s2: str) -> str:
    a1, a2 = _atoms(s1), _atoms(s2)
    if not a1 or not a2:
        return "none"
    def atom_mul(x: str, y: str) -> str:
        if "zer" in (x, y):
            return "zer"
        return "pos" if x == y else "neg"
    return _join_all(atom_mul(x, y) for x in a1 for y in a2)


def _abs_div(s1: str, s2: str) -> str:
    a1 = _atoms(s1)
    a2 = [a for a in _atoms(s2) if a != "zer"]
    if not a1 or not a2:
        return "none"
    return _join_all(_ATOM_DIV[(x, y)] for x in a1 for y in a2)


def abs_aop(op: str, s1: str, s2: str) -> str:
    """Abstract arithmetic on signs; division by a possibly-zero-only divisor is none."""
    if op == "+":
        return _abs_add(s1, s2)
    if op == "-":
        return _abs_add(s1, _NEGATE[s2])
    if op == "*":
        return _abs_mul(s1, s2)
    if op == "/":
        return _abs_div(s1, s2)
    raise ValueError(f"unknown arithmetic operator {op!r}")


_ATOM_LT = {
    ("neg", "neg"): "any", ("neg", "zer"): "tt", ("neg", "pos"): "tt",
    ("zer", "neg"): "ff", ("zer", "zer"): "ff", ("zer", "pos"): "tt",
    ("pos", "neg"): "ff", ("pos", "zer"): "ff", ("pos", "pos"): "any",
}


def abs_cmp(op: str, s1: str, s2: str) -> str:
    """Abstract comparison of signs into the abstract booleans."""
    if op not in ("<", "="):
        raise ValueError(f"unknown comparison operator {op!r}")
    acc = "none"
    for x in _atoms(s1):
        for y in _atoms(s2):
            if op == "<":
                out = _ATOM_LT[(x, y)]
            else:
                out = ("tt" if x == y == "zer" else
                       "any" if x == y else "ff")
            acc = absbool_join(acc, out)
    return acc


def abs_bop(op: str, b1: str, b2: str) -> str:
    """Abstract conjunction/disjunction on abstract booleans."""
    if op not in ("||", "&&"):
        raise ValueError(f"unknown boolean operator {op!r}")
    def atoms(b: str) -> tuple[bool, ...]:
        return {"none": (), "tt": (True,), "ff": (False,), "any": (True, False)}[b]
    acc = "none"
    for x in atoms(b1):
        for y in atoms(b2):
            acc = absbool_join(acc, eta_bool((x or y) if op == "||" else (x and y)))
    return acc


# -- abstract environments -----------------------------------------------------

@dataclass(frozen=True)
class AbsEnv:
    """Total map from the program's variables to signs, ordered pointwise."""

    vars: tuple[str, ...]
    signs: tuple[str, ...]

    @staticmethod
    def uniform(vars: Iterable[str], sign: str = "any") -> AbsEnv:
        vs = tuple(sorted(set(vars)))
        return AbsEnv(vs, (sign,) * len(vs))

    @staticmethod
    def from_dict(d: dict[str, str]) -> AbsEnv:
        vs = tuple(sorted(d))
        return AbsEnv(vs, tuple(d[v] for v in vs))

    def get(self, x: str) -> str:
        try:
            return self.signs[self.vars.index(x)]
        except ValueError:
            raise wl.UnboundVariableError(x) from None

    def set(self, x: str, s: str) -> AbsEnv:
        i = self.vars.index(x)
        return AbsEnv(self.vars, self.signs[:i] + (s,) + self.signs[i + 1:])

    def leq(self, other: AbsEnv) -> bool:
        return self.vars == other.vars and all(
            sign_leq(a, b) for a, b in zip(self.signs, other.signs))

    def join(self, other: AbsEnv) -> AbsEnv:
        if self.vars != other.vars:
            raise DomainError("abstract environments over different variables")
        return AbsEnv(self.vars, tuple(
            sign_join(a, b) for a, b in zip(self.signs, other.signs)))

    @property
    def is_unreachable(self) -> bool:
        """No concrete environment matches once any variable means nothing."""
        return "none" in self.signs

    def to_dict(self) -> dict[str, str]:
        return dict(zip(self.vars, self.signs))


def eta_env(env: wl.Env, vars: tuple[str, ...]) -> AbsEnv:
    return AbsEnv(vars, tuple(eta_int(env.get(v)) for v in vars))


def env_domain(vars: Iterable[str]) -> FiniteDomain:
    """All abstract environments over a (small) variable set, pointwise order."""
    vs = tuple(sorted(set(vars)))
    labels = [()]
    for _ in vs:
        labels = [t + (s,) for t in labels for s in SIGNS]
    def leq(t1, t2):
        return all(sign_leq(a, b) for a, b in zip(t1, t2))
    return FiniteDomain.from_leq(f"absenv({','.join(vs)})", labels, leq)


def env_gc(vars: Iterable[str], window: IntWindow) -> ConstructiveGC:
    """Pointwise environment connection over a fixed finite variable set."""
    vs = tuple(sorted(set(vars)))
    concs = [()]
    for _ in vs:
        concs = [t + (i,) for t in concs for i in window.values]
    conc = FiniteDomain.discrete(f"env({','.join(vs)})[{window.bound}]", concs)
    abst = env_domain(vs)
    eta = MonotoneFn.from_callable(conc, abst, lambda t: tuple(eta_int(i) for i in t))
    mu = KleisliFn.from_callable(
        abst, conc,
        lambda ss: [t for t in concs
                    if all(sign_contains(s, i) for s, i in zip(ss, t))])
    return ConstructiveGC(f"env({','.join(vs)})", conc, abst, eta, mu,
                          window=window.bound)


# -- abstract interpreters -----------------------------------------------------

def abs_aexp(ae: wl.Aexp, env: AbsEnv) -> str:
    """Abstract value of an arithmetic expression."""
    match ae:
        case wl.Int(i):
            return eta_int(i)
        case wl.Var(x):
            return env.get(x)
        case wl.Rand():
            return "any"
        case wl.BinA(op, left, right):
            return abs_aop(op, abs_aexp(left, env), abs_aexp(right, env))
    raise TypeError(f"not an arithmetic expression: {ae!r}")


def abs_bexp(be: wl.Bexp, env: AbsEnv) -> str:
    """Abstract truth value of a boolean expression."""
    match be:
        case wl.Bool(b):
            return eta_bool(b)
        case wl.Cmp(op, left, right):
            return abs_cmp(op, abs_aexp(left, env), abs_aexp(right, env))
        case wl.BinB(op, left, right):
            return abs_bop(op, abs_bexp(left, env), abs_bexp(right, env))
    raise TypeError(f"not a boolean expression: {be!r}")


@dataclass(frozen=True)
class AbsState:
    env: AbsEnv
    cmd: wl.Cexp


def _raw_abs_step(state: AbsState) -> list[AbsState]:
    env, cmd = state.env, state.cmd
    out: list[AbsState] = []
    match cmd:
        case wl.Skip():
            return []
        case wl.Assign(x, ae):
            out.append(AbsState(env.set(x, abs_aexp(ae, env)), wl.Skip()))
        case wl.Seq(first, second):
            if isinstance(first, wl.Skip):
                out.append(AbsState(env, second))
            else:
                out.extend(AbsState(s.env, wl.Seq(s.cmd, second, pp=cmd.pp))
                           for s in _raw_abs_step(AbsState(env, first)))
        case wl.If(guard, then, orelse):
            g = abs_bexp(guard, env)
            if absbool_contains(g, True):
                out.append(AbsState(env, then))
            if absbool_contains(g, False):
                out.append(AbsState(env, orelse))
        case wl.While(guard, body):
            g = abs_bexp(guard, env)
            if absbool_contains(g, True):
                out.append(AbsState(env, wl.Seq(body, cmd)))
            if absbool_contains(g, False):
                out.append(AbsState(env, wl.Skip()))
        case _:
            raise TypeError(f"not a command: {cmd!r}")
    return out


def abs_step(state: AbsState) -> list[AbsState]:
    """Abstract successors, mirroring the concrete transition rules.

    Branches are taken when the guard's abstract boolean covers the matching
    truth value; successors whose environment has become unreachable are
    dropped (no concrete state maps to them).
    """
    return [s for s in _raw_abs_step(state) if not s.env.is_unreachable]


class AnalysisBudgetError(wl.AnalysisError):
    pass


@dataclass(frozen=True)
class AnalysisResult:
    """Join of the abstract environments reaching each program point."""

    vars: tuple[str, ...]
    points: dict[int, AbsEnv]
    commands: dict[int, str]
    final: AbsEnv
    pruned_unreachable: int

    def env_at(self, point: int) -> AbsEnv | None:
        return self.points.get(point)

    def to_json_dict(self) -> dict:
        return {
            "program_points": [
                {"point": p, "command": self.commands.get(p, ""),
                 "env": self.points[p].to_dict()}
                for p in sorted(self.points)
            ],
            "final": self.final.to_dict(),
            "pruned_unreachable": self.pruned_unreachable,
        }


def analyze(ce: wl.Cexp, init: AbsEnv | None = None,
            max_states: int | None = None) -> AnalysisResult:
    """Worklist closure of the abstract transition relation.

    Program points are the pre-order labels of the original command nodes;
    each abstract state is attributed to the point of its first unexecuted
    command.  The per-point environments only ever grow, and the final
    environment is the join over fully terminated states (bottom everywhere
    when no run can terminate).  The state space is finite, so the loop
    terminates without widening; ``max_states`` is a safety valve only.
    """
    if _unlabeled(ce):
        ce = wl.label_program(ce)
    vars = tuple(sorted(wl.assigned_vars(ce)))
    if init is None:
        init = AbsEnv.uniform(vars)
    missing = set(vars) - set(init.vars)
    if missing:
        raise wl.UnboundVariableError(", ".join(sorted(missing)))
    commands = {pp: wl.render_cexp(node, depth=1)
                for pp, node in wl.program_points(ce).items()}

    points: dict[int, AbsEnv] = {}
    final: AbsEnv | None = None
    pruned = 0
    start = AbsState(init, ce)
    seen = {start}
    work = deque([start])
    processed = 0
    while work:
        processed += 1
        if max_states is not None and processed > max_states:
            raise AnalysisBudgetError(
                f"abstract state budget of {max_states} exhausted")
        st = work.popleft()
        pp = wl.focus(st.cmd)
        if pp is None:
            final = st.env if final is None else final.join(st.env)
        else:
            points[pp] = st.env if pp not in points else points[pp].join(st.env)
        raw = _raw_abs_step(st)
        for succ in raw:
            if succ.env.is_unreachable:
                pruned += 1
                continue
            if succ not in seen:
                seen.add(succ)
                work.append(succ)
    if final is None:
        final = AbsEnv(init.vars, ("none",) * len(init.vars))
    return AnalysisResult(vars, points, commands, final, pruned)


def _unlabeled(ce: wl.Cexp) -> bool:
    return all(node.pp is None for node in wl.iter_commands(ce))


# -- fixtures for law checking ---------------------------------------------------

def wide_window(window: IntWindow) -> IntWindow:
    """Output window big enough to hold any product or sum of window values."""
    return IntWindow(max(window.bound * window.bound, 2 * window.bound, 1))


def aop_kleisli(op: str, window: IntWindow, out: IntWindow) -> KleisliFn:
    """Concrete arithmetic on window pairs, as a relation into ``out``."""
    pairs = FiniteDomain.product(f"{window.domain.name}^2", window.domain, window.domain)

    def apply(p: tuple[int, int]) -> list[int]:
        v = wl.denote_aop(op, p[0], p[1])
        return [] if v is None else [v]

    return KleisliFn.from_callable(pairs, out.domain, apply)


def aop_sharp_fn(op: str) -> MonotoneFn:
    dom = sign_domain()
    pairs = FiniteDomain.product("sign^2", dom, dom)
    return MonotoneFn.from_callable(pairs, dom, lambda p: abs_aop(op, p[0], p[1]))


def cmp_kleisli(op: str, window: IntWindow) -> KleisliFn:
    pairs = FiniteDomain.product(f"{window.domain.name}^2", window.domain, window.domain)
    bools = FiniteDomain.discrete("bool", (False, True))
    return KleisliFn.from_callable(pairs, bools,
                                   lambda p: [wl.denote_cmp(op, p[0], p[1])])


def cmp_sharp_fn(op: str) -> MonotoneFn:
    dom = sign_domain()
    pairs = FiniteDomain.product("sign^2", dom, dom)
    return MonotoneFn.from_callable(pairs, absbool_domain(),
                                    lambda p: abs_cmp(op, p[0], p[1]))


def bop_kleisli(op: str) -> KleisliFn:
    bools = FiniteDomain.discrete("bool", (False, True))
    pairs = FiniteDomain.product("bool^2", bools, bools)
    return KleisliFn.from_callable(pairs, bools,
                                   lambda p: [wl.denote_bop(op, p[0], p[1])])


def bop_sharp_fn(op: str) -> MonotoneFn:
    dom = absbool_domain()
    pairs = FiniteDomain.product("absbool^2", dom, dom)
    return MonotoneFn.from_callable(pairs, dom, lambda p: abs_bop(op, p[0], p[1]))


def law_suite(window: IntWindow, seed: int = 0) -> list:
    """Connection laws plus soundness/optimality of every transfer table.

    Division (and, at tiny windows, the other operators) is only optimal once
    the window is wide enough to realize each sign pattern; the reports state
    the window used.
    """
    from .galois import (check_optimality, check_soundness,
                         constructive_law_suite, product_gc)

    gc = sign_gc(window)
    reports = constructive_law_suite(gc, seed=seed)
    out_gc = sign_gc(wide_window(window))
    paired = product_gc(gc, gc)
    for op in ("+", "-", "*", "/"):
        f = aop_kleisli(op, window, wide_window(window))
        fs = aop_sharp_fn(op)
        reports.append(check_soundness(f, fs, paired, "mu_mu",
                                       out_gc=out_gc, subject=f"abstract {op}"))
        reports.append(check_optimality(f, fs, paired,
                                        out_gc=out_gc, subject=f"abstract {op}"))
    bool_out = absbool_gc()
    for op in ("<", "="):
        reports.append(check_optimality(cmp_kleisli(op, window), cmp_sharp_fn(op),
                                        paired, out_gc=bool_out,
                                        subject=f"abstract {op}"))
    bool_paired = product_gc(bool_out, bool_out)
    for op in ("&&", "||"):
        reports.append(check_optimality(bop_kleisli(op), bop_sharp_fn(op),
                                        bool_paired, out_gc=bool_out,
                                        subject=f"abstract {op}"))
    return reports


def env_law_suite(window: IntWindow, vars: tuple[str, ...] = ("x", "y"),
                  seed: int = 0) -> list:
    """Environment-connection laws plus the two expression base cases.

    The base-case tables (variable lookup and the unknown-input expression)
    are compared with the brute-force best abstraction on every reachable
    abstract environment; unreachable environments have an empty meaning, so
    any answer is sound there and the tables stay above the (bottom) optimum.
    """
    from .galois import LawReport, best_abstraction, constructive_law_suite

    vars = tuple(sorted(set(vars)))
    gc = env_gc(vars, window)
    reports = constructive_law_suite(gc, seed=seed)
    out_gc = sign_gc(window)

    lookup = KleisliFn.from_callable(gc.concrete, window.domain, lambda t: [t[0]])
    rand = KleisliFn.from_callable(gc.concrete, window.domain,
                                   lambda t: list(window.values))
    for subject, f, sharp in (
            (f"lookup {vars[0]}", lookup, lambda ss: ss[0]),
            ("unknown input", rand, lambda ss: "any")):
        best = best_abstraction(f, gc, out_gc)
        cex = []
        for ss in gc.abstract.elements:
            reachable_env = "none" not in ss
            want = best(ss)
            got = sharp(ss)
            if reachable_env and got != want:
                cex.append({"env": str(ss), "expected": want, "actual": got})
            elif not reachable_env and not sign_leq(want, got):
                cex.append({"env": str(ss), "bound": want, "actual": got})
        reports.append(LawReport(f"optimality on reachable envs [{subject}]",
                                 gc.carrier, window.bound, tuple(cex)))
    return reports
