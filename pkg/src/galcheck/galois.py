"""Galois connections as first-class values, with exhaustive law checkers.

Three flavors over finite carriers:

* :class:`ConstructiveGC`: a pure extraction function ``eta`` paired with a
  set-valued interpretation ``mu``, related by ``x in mu(y)  iff  eta(x) <= y``.
* :class:`KleisliGC`: both adjoints are monotone functions into downsets.
* :class:`ClassicalGC`: abstraction/concretization maps between downset
  spaces.

Every law is checked by enumeration over the carriers and reported through
:class:`LawReport`; nothing is trusted on construction beyond well-formedness
of the component functions, so deliberately broken fixtures can be built and
fed to the checkers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Literal

from .order import (DomainError, DownSet, FiniteDomain, KleisliFn, Label,
                    MonotoneFn, bind, downset_space, iter_bits, pure)


class NotLiftedFormError(ValueError):
    """A Kleisli connection whose abstraction side is not pure().

    Raised by :func:`induce` when some image of the abstraction side has no
    maximum element, i.e. the connection cannot be written as
    ``(pure(eta), mu)`` for any extraction function ``eta``.
    """


def show_label(x: Label) -> object:
    """JSON-safe rendering of a carrier element."""
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


@dataclass(frozen=True)
class LawReport:
    """Outcome of one exhaustively checked law over a named carrier."""

    law: str
    carrier: str
    window: int | None
    counterexamples: tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json_dict(self) -> dict:
        return {
            "law": self.law,
            "carrier": self.carrier,
            "window": self.window,
            "verdict": self.verdict,
            "counterexamples": list(self.counterexamples),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def summary(self, max_examples: int = 3) -> str:
        line = f"{self.law} over {self.carrier}"
        if self.window is not None:
            line += f" (window {self.window})"
        line += f": {self.verdict}"
        if not self.passed:
            shown = ", ".join(str(c) for c in self.counterexamples[:max_examples])
            more = len(self.counterexamples) - max_examples
            line += f" [{len(self.counterexamples)} counterexamples: {shown}"
            line += ", ...]" if more > 0 else "]"
        return line


@dataclass(frozen=True)
class ConstructiveGC:
    """Extraction/interpretation pair between a concrete and abstract carrier."""

    name: str
    concrete: FiniteDomain
    abstract: FiniteDomain
    eta: MonotoneFn
    mu: KleisliFn
    window: int | None = None

    def __post_init__(self) -> None:
        if self.eta.dom != self.concrete or self.eta.cod != self.abstract:
            raise DomainError(f"extraction map of {self.name!r} has the wrong carriers")
        if self.mu.dom != self.abstract or self.mu.cod != self.concrete:
            raise DomainError(f"interpretation map of {self.name!r} has the wrong carriers")

    @property
    def carrier(self) -> str:
        return f"{self.concrete.name} / {self.abstract.name}"


@dataclass(frozen=True)
class KleisliGC:
    """Galois connection whose two adjoints are downset-valued functions."""

    name: str
    concrete: FiniteDomain
    abstract: FiniteDomain
    kalpha: KleisliFn
    kgamma: KleisliFn

    def __post_init__(self) -> None:
        if self.kalpha.dom != self.concrete or self.kalpha.cod != self.abstract:
            raise DomainError(f"abstraction side of {self.name!r} has the wrong carriers")
        if self.kgamma.dom != self.abstract or self.kgamma.cod != self.concrete:
            raise DomainError(f"concretization side of {self.name!r} has the wrong carriers")

    @property
    def carrier(self) -> str:
        return f"{self.concrete.name} / {self.abstract.name}"


@dataclass(frozen=True)
class ClassicalGC:
    """Abstraction/concretization between downset spaces, held extensionally."""

    name: str
    concrete: FiniteDomain
    abstract: FiniteDomain
    alpha: Callable[[DownSet], DownSet]
    gamma: Callable[[DownSet], DownSet]

    @property
    def carrier(self) -> str:
        return f"downsets of {self.concrete.name} / downsets of {self.abstract.name}"


# -- constructive laws --------------------------------------------------------

def check_correspondence(gc: ConstructiveGC) -> LawReport:
    """``x in mu(y)  iff  eta(x) <= y``, exhaustively over both carriers."""
    conc, abst = gc.concrete, gc.abstract
    eta, mu = gc.eta.table, gc.mu.table
    cex = []
    for xi in range(conc.size):
        exi = eta[xi]
        for yi in range(abst.size):
            in_mu = bool(mu[yi] >> xi & 1)
            leq = abst.leq_ix(exi, yi)
            if in_mu != leq:
                cex.append({
                    "x": show_label(conc.elements[xi]),
                    "y": show_label(abst.elements[yi]),
                    "holds": "membership" if in_mu else "extraction-order",
                })
    return LawReport("correspondence", gc.carrier, gc.window, tuple(cex))


def check_expansive(gc: ConstructiveGC) -> LawReport:
    """``x in mu(eta(x))`` for every concrete x."""
    cex = []
    for xi in range(gc.concrete.size):
        if not gc.mu.table[gc.eta.table[xi]] >> xi & 1:
            cex.append({"x": show_label(gc.concrete.elements[xi])})
    return LawReport("expansive", gc.carrier, gc.window, tuple(cex))


def check_reductive(gc: ConstructiveGC) -> LawReport:
    """``x in mu(y)  implies  eta(x) <= y``."""
    cex = []
    for yi in range(gc.abstract.size):
        for xi in iter_bits(gc.mu.table[yi]):
            if not gc.abstract.leq_ix(gc.eta.table[xi], yi):
                cex.append({
                    "x": show_label(gc.concrete.elements[xi]),
                    "y": show_label(gc.abstract.elements[yi]),
                })
    return LawReport("reductive", gc.carrier, gc.window, tuple(cex))


def constructive_law_suite(gc: ConstructiveGC, seed: int = 0) -> list[LawReport]:
    """Correspondence/expansive/reductive, plus the same law on the lifted
    classical connection (enumerated or seed-sampled downset spaces)."""
    classical = lift_to_classical(lift_to_kleisli(gc))
    return [check_correspondence(gc), check_expansive(gc), check_reductive(gc),
            check_classical_correspondence(classical, seed=seed)]


# -- Kleisli laws and lifting -------------------------------------------------

def check_kleisli_expansive(kgc: KleisliGC) -> LawReport:
    """``ret <= kgamma . kalpha`` pointwise on the concrete carrier."""
    cex = []
    for xi in range(kgc.concrete.size):
        acc = 0
        for yi in iter_bits(kgc.kalpha.table[xi]):
            acc |= kgc.kgamma.table[yi]
        if kgc.concrete.down_bits(xi) & ~acc:
            cex.append({"x": show_label(kgc.concrete.elements[xi])})
    return LawReport("kleisli-expansive", kgc.carrier, None, tuple(cex))


def check_kleisli_reductive(kgc: KleisliGC) -> LawReport:
    """``kalpha . kgamma <= ret`` pointwise on the abstract carrier."""
    cex = []
    for yi in range(kgc.abstract.size):
        acc = 0
        for xi in iter_bits(kgc.kgamma.table[yi]):
            acc |= kgc.kalpha.table[xi]
        if acc & ~kgc.abstract.down_bits(yi):
            cex.append({"y": show_label(kgc.abstract.elements[yi])})
    return LawReport("kleisli-reductive", kgc.carrier, None, tuple(cex))


def lift_to_kleisli(gc: ConstructiveGC) -> KleisliGC:
    """Read a constructive connection as a Kleisli one: ``(pure(eta), mu)``."""
    return KleisliGC(gc.name, gc.concrete, gc.abstract, pure(gc.eta), gc.mu)


def lift_to_classical(kgc: KleisliGC) -> ClassicalGC:
    """Extend both adjoints over downsets: ``(kalpha*, kgamma*)``."""
    return ClassicalGC(
        kgc.name, kgc.concrete, kgc.abstract,
        alpha=lambda xs: bind(xs, kgc.kalpha),
        gamma=lambda ys: bind(ys, kgc.kgamma),
    )


def induce(kgc: KleisliGC) -> ConstructiveGC:
    """Recover the extraction function from a lifted-form Kleisli connection.

    The extraction image of ``x`` is the maximum element of ``kalpha(x)``;
    when some image has no maximum the connection is not of lifted form and
    :class:`NotLiftedFormError` is raised.  The interpretation side is reused
    unchanged, so ``lift_to_kleisli(induce(kgc))`` reproduces ``kgc`` tablewise.
    """
    abst = kgc.abstract
    eta_table = []
    for xi in range(kgc.concrete.size):
        bits = kgc.kalpha.table[xi]
        maximum = None
        for yi in iter_bits(bits):
            if bits & ~abst.down_bits(yi) == 0:
                maximum = yi
                break
        if maximum is None:
            raise NotLiftedFormError(
                f"abstraction image of {kgc.concrete.elements[xi]!r} has no maximum; "
                f"{kgc.name!r} is not of lifted form")
        eta_table.append(maximum)
    eta = MonotoneFn(kgc.concrete, abst, tuple(eta_table))
    return ConstructiveGC(kgc.name, kgc.concrete, kgc.abstract, eta, kgc.kgamma)


def check_classical_correspondence(cgc: ClassicalGC, *, limit: int = 4096,
                                   sample: int = 256, seed: int = 0) -> LawReport:
    """``N <= gamma(P)  iff  alpha(N) <= P`` over (enumerated or sampled) downsets."""
    conc_sets, conc_how = downset_space(cgc.concrete, limit=limit, sample=sample, seed=seed)
    abst_sets, abst_how = downset_space(cgc.abstract, limit=limit, sample=sample, seed=seed + 1)
    alphas = [cgc.alpha(DownSet(cgc.concrete, n)).bits for n in conc_sets]
    gammas = [cgc.gamma(DownSet(cgc.abstract, p)).bits for p in abst_sets]
    cex = []
    for ni, n in enumerate(conc_sets):
        an = alphas[ni]
        for pi, p in enumerate(abst_sets):
            if (n & ~gammas[pi] == 0) != (an & ~p == 0):
                cex.append({
                    "N": [show_label(x) for x in DownSet(cgc.concrete, n).labels],
                    "P": [show_label(y) for y in DownSet(cgc.abstract, p).labels],
                })
    carrier = f"{cgc.carrier} [{conc_how}; {abst_how}]"
    return LawReport("classical-correspondence", carrier, None, tuple(cex))


# -- soundness, optimality, best abstraction ----------------------------------

Variant = Literal["eta_mu", "mu_mu", "eta_eta", "mu_eta"]
VARIANTS: tuple[Variant, ...] = ("eta_mu", "mu_mu", "eta_eta", "mu_eta")


def _check_pairing(f: KleisliFn, fsharp: MonotoneFn, gc: ConstructiveGC,
                   out: ConstructiveGC) -> None:
    if f.dom != gc.concrete or f.cod != out.concrete:
        raise DomainError("concrete operation does not match the connection carriers")
    if fsharp.dom != gc.abstract or fsharp.cod != out.abstract:
        raise DomainError("abstract operation does not match the connection carriers")


def check_soundness(f: KleisliFn, fsharp: MonotoneFn, gc: ConstructiveGC,
                    variant: Variant = "mu_mu",
                    out_gc: ConstructiveGC | None = None,
                    subject: str = "") -> LawReport:
    """One of the four equivalent statements that ``fsharp`` over-approximates ``f``.

    ``f`` maps ``gc.concrete`` into downsets of ``out_gc.concrete`` (a
    relational semantics; ``out_gc`` defaults to ``gc``), ``fsharp`` maps the
    abstract carriers.  The variant names which side of the connection is used
    on the input and output: interpretation (mu) or extraction (eta).
    """
    out = out_gc or gc
    _check_pairing(f, fsharp, gc, out)
    conc, abst = gc.concrete, gc.abstract
    cex = []

    if variant in ("eta_eta", "mu_eta"):
        for xi in range(conc.size):
            fi = fsharp.table[gc.eta.table[xi]]
            if variant == "mu_eta":
                bad = f.table[xi] & ~out.mu.table[fi]
            else:
                bad = 0
                for oi in iter_bits(f.table[xi]):
                    if not out.abstract.leq_ix(out.eta.table[oi], fi):
                        bad |= 1 << oi
            for oi in iter_bits(bad):
                cex.append({"x": show_label(conc.elements[xi]),
                            "result": show_label(out.concrete.elements[oi])})
    else:
        for yi in range(abst.size):
            fi = fsharp.table[yi]
            target = out.mu.table[fi] if variant == "mu_mu" else None
            for xi in iter_bits(gc.mu.table[yi]):
                if variant == "mu_mu":
                    bad = f.table[xi] & ~target
                else:
                    bad = 0
                    for oi in iter_bits(f.table[xi]):
                        if not out.abstract.leq_ix(out.eta.table[oi], fi):
                            bad |= 1 << oi
                for oi in iter_bits(bad):
                    cex.append({"y": show_label(abst.elements[yi]),
                                "x": show_label(conc.elements[xi]),
                                "result": show_label(out.concrete.elements[oi])})
    law = f"soundness/{variant}" + (f" [{subject}]" if subject else "")
    return LawReport(law, gc.carrier, gc.window, tuple(cex))


def best_abstraction(f: KleisliFn, gc: ConstructiveGC,
                     out_gc: ConstructiveGC | None = None) -> MonotoneFn:
    """The optimal abstract operation induced by the connection, by enumeration.

    Maps each abstract ``y`` to the join of the extractions of every concrete
    result reachable from the interpretation of ``y``.  An empty image joins
    to the abstract carrier's least element.
    """
    out = out_gc or gc
    if f.dom != gc.concrete or f.cod != out.concrete:
        raise DomainError("concrete operation does not match the connection carriers")
    table = []
    for yi in range(gc.abstract.size):
        image = 0
        for xi in iter_bits(gc.mu.table[yi]):
            image |= f.table[xi]
        targets = {out.eta.table[oi] for oi in iter_bits(image)}
        table.append(out.abstract.join_all_ix(sorted(targets)))
    return MonotoneFn(gc.abstract, out.abstract, tuple(table))


def check_optimality(f: KleisliFn, fsharp: MonotoneFn, gc: ConstructiveGC,
                     out_gc: ConstructiveGC | None = None,
                     subject: str = "") -> LawReport:
    """``fsharp`` coincides with the brute-force best abstraction everywhere."""
    out = out_gc or gc
    _check_pairing(f, fsharp, gc, out)
    best = best_abstraction(f, gc, out)
    cex = []
    for yi in range(gc.abstract.size):
        if fsharp.table[yi] != best.table[yi]:
            cex.append({
                "y": show_label(gc.abstract.elements[yi]),
                "expected": show_label(out.abstract.elements[best.table[yi]]),
                "actual": show_label(out.abstract.elements[fsharp.table[yi]]),
            })
    law = "optimality" + (f" [{subject}]" if subject else "")
    return LawReport(law, gc.carrier, gc.window, tuple(cex))


# -- combining connections ----------------------------------------------------

def product_gc(gc1: ConstructiveGC, gc2: ConstructiveGC,
               name: str | None = None) -> ConstructiveGC:
    """Componentwise pairing of two connections over the product carriers."""
    name = name or f"{gc1.name}*{gc2.name}"
    conc = FiniteDomain.product(f"{gc1.concrete.name} x {gc2.concrete.name}",
                                gc1.concrete, gc2.concrete)
    abst = FiniteDomain.product(f"{gc1.abstract.name} x {gc2.abstract.name}",
                                gc1.abstract, gc2.abstract)
    na2, nc2 = gc2.abstract.size, gc2.concrete.size
    eta_table = []
    for i in range(gc1.concrete.size):
        e1 = gc1.eta.table[i]
        for j in range(gc2.concrete.size):
            eta_table.append(e1 * na2 + gc2.eta.table[j])
    mu_table = []
    for yi in range(gc1.abstract.size):
        m1 = gc1.mu.table[yi]
        for yj in range(gc2.abstract.size):
            m2 = gc2.mu.table[yj]
            bits = 0
            for xi in iter_bits(m1):
                bits |= m2 << (xi * nc2)
            mu_table.append(bits)
    window = gc1.window if gc1.window == gc2.window else None
    return ConstructiveGC(name, conc, abst,
                          MonotoneFn(conc, abst, tuple(eta_table)),
                          KleisliFn(abst, conc, tuple(mu_table)),
                          window=window)


def ia_connection(a: FiniteDomain, b: FiniteDomain) -> ClassicalGC:
    """The independent-attributes abstraction of relations by componentwise split.

    Relations over ``a x b`` are abstracted to a pair of projections, encoded
    as a downset over the disjoint sum of the carriers (left part = first
    projection, right part = second).  Concretization rebuilds the full
    product of the two parts, so the connection forgets the dependency
    between components.
    """
    conc = FiniteDomain.product(f"{a.name} x {b.name}", a, b)
    abst = FiniteDomain.disjoint_sum(f"{a.name} + {b.name}", a, b)
    na, nb = a.size, b.size

    def alpha(rel: DownSet) -> DownSet:
        bits = 0
        for p in iter_bits(rel.bits):
            i, j = divmod(p, nb)
            bits |= abst.down_bits(i) | abst.down_bits(na + j)
        return DownSet(abst, bits)

    def gamma(parts: DownSet) -> DownSet:
        left = parts.bits & ((1 << na) - 1)
        right = parts.bits >> na
        bits = 0
        for i in iter_bits(left):
            bits |= right << (i * nb)
        return DownSet(conc, bits)

    return ClassicalGC("independent-attributes", conc, abst, alpha, gamma)


def ia_kleisli_reading(a: FiniteDomain, b: FiniteDomain) -> KleisliGC:
    """The pointwise reading of the independent-attributes maps.

    The abstraction image of a single pair holds both of its projections,
    which has no maximum element in the sum order, so :func:`induce` rejects
    this connection as not of lifted form.
    """
    conc = FiniteDomain.product(f"{a.name} x {b.name}", a, b)
    abst = FiniteDomain.disjoint_sum(f"{a.name} + {b.name}", a, b)
    na, nb = a.size, b.size
    full_b = (1 << nb) - 1

    kalpha_table = []
    for i in range(a.size):
        for j in range(b.size):
            kalpha_table.append(abst.down_bits(i) | abst.down_bits(na + j))
    kgamma_table = []
    for i in range(a.size):
        bits = 0
        for i2 in iter_bits(a.down_bits(i)):
            bits |= full_b << (i2 * nb)
        kgamma_table.append(bits)
    for j in range(b.size):
        bits = 0
        for j2 in iter_bits(b.down_bits(j)):
            col = 0
            for i in range(na):
                col |= 1 << (i * nb + j2)
            bits |= col
        kgamma_table.append(bits)

    return KleisliGC("independent-attributes", conc, abst,
                     KleisliFn(conc, abst, tuple(kalpha_table)),
                     KleisliFn(abst, conc, tuple(kgamma_table)))
