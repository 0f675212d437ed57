"""The parity domain: the toolkit's smallest end-to-end fixture.

Two carriers: the bare two-point parity domain (discrete order), and its
extension with an ``any`` top element, which is what makes operators like
``max`` abstractable at all.
"""
from __future__ import annotations

from functools import lru_cache

from .galois import ConstructiveGC
from .order import FiniteDomain, IntWindow, KleisliFn, MonotoneFn

EVEN = "even"
ODD = "odd"
ANY = "any"

PARITIES = (EVEN, ODD)
PARITIES_PLUS = (EVEN, ODD, ANY)


def parity(n: int) -> str:
    """Parity of an integer; negatives go by absolute value."""
    return EVEN if n % 2 == 0 else ODD


def flip(p: str) -> str:
    return ODD if p == EVEN else EVEN


def succ_sharp(p: str) -> str:
    """Abstract successor on parities; identical to flip."""
    return flip(p)


def max_sharp(p1: str, p2: str) -> str:
    """Abstract binary max over the extended parity domain.

    The maximum of an even and an odd number can be either, and once one
    side is ``any`` nothing is known about the result.
    """
    if p1 == p2:
        return p1
    return ANY


@lru_cache(maxsize=None)
def parity_domain() -> FiniteDomain:
    return FiniteDomain.discrete("parity", PARITIES)


@lru_cache(maxsize=None)
def parity_plus_domain() -> FiniteDomain:
    return FiniteDomain.from_hasse("parity+", PARITIES_PLUS,
                                   [(EVEN, ANY), (ODD, ANY)])


def _interp(p: str, window: IntWindow) -> list[int]:
    if p == ANY:
        return list(window.values)
    return [n for n in window.values if parity(n) == p]


def _gc(name: str, abstract: FiniteDomain, window: IntWindow) -> ConstructiveGC:
    if window.bound < 1:
        raise ValueError("parity fixtures need a window bound of at least 1")
    ints = window.domain
    eta = MonotoneFn.from_callable(ints, abstract, parity)
    mu = KleisliFn.from_callable(abstract, ints, lambda p: _interp(p, window))
    return ConstructiveGC(name, ints, abstract, eta, mu, window=window.bound)


def parity_gc(window: IntWindow) -> ConstructiveGC:
    return _gc("parity", parity_domain(), window)


def parity_plus_gc(window: IntWindow) -> ConstructiveGC:
    return _gc("parity+", parity_plus_domain(), window)


def succ_kleisli(window: IntWindow) -> KleisliFn:
    """Successor on the window, as a relation; the top edge has no successor.

    Dropping the out-of-window result keeps window-quantified laws exact:
    the abstract successor never has to answer for integers the window
    cannot represent.
    """
    ints = window.domain
    return KleisliFn.from_callable(
        ints, ints, lambda n: [n + 1] if n + 1 in window else [])


def succ_sharp_fn() -> MonotoneFn:
    return MonotoneFn.from_callable(parity_domain(), parity_domain(), succ_sharp)


def max_kleisli(window: IntWindow) -> KleisliFn:
    """Binary max on window pairs, landing back in the window."""
    ints = window.domain
    pairs = FiniteDomain.product(f"{ints.name} x {ints.name}", ints, ints)
    return KleisliFn.from_callable(pairs, ints, lambda p: [max(p[0], p[1])])


def max_sharp_fn() -> MonotoneFn:
    pp = parity_plus_domain()
    pairs = FiniteDomain.product("parity+ x parity+", pp, pp)
    return MonotoneFn.from_callable(pairs, pp, lambda p: max_sharp(p[0], p[1]))


def law_suite(window: IntWindow, extended: bool = False, seed: int = 0) -> list:
    """Connection laws plus the successor (or max, when extended) checks."""
    from .galois import (VARIANTS, check_optimality, check_soundness,
                         constructive_law_suite, product_gc)

    if not extended:
        gc = parity_gc(window)
        reports = constructive_law_suite(gc, seed=seed)
        succ = succ_kleisli(window)
        fs = succ_sharp_fn()
        for variant in VARIANTS:
            reports.append(check_soundness(succ, fs, gc, variant, subject="succ#"))
        reports.append(check_optimality(succ, fs, gc, subject="succ#"))
        return reports

    gc = parity_plus_gc(window)
    reports = constructive_law_suite(gc, seed=seed)
    paired = product_gc(gc, gc)
    fmax = max_kleisli(window)
    fs = max_sharp_fn()
    for variant in VARIANTS:
        reports.append(check_soundness(fmax, fs, paired, variant,
                                       out_gc=gc, subject="max#"))
    reports.append(check_optimality(fmax, fs, paired, out_gc=gc, subject="max#"))
    return reports
