"""Finite posets, downward-closed sets, and the monotone powerset monad.

Everything downstream (law checkers, analyzers, type systems) quantifies over
carriers exhaustively, so carriers are kept small, explicit, and fast to
query: elements are interned as indices into a tuple, and the order relation
is stored as one bitmask per element.  A quantified law over a carrier of a
few hundred elements is then just a couple of nested loops over machine ints.

Infinite carriers (the integers, the full type universe) are represented by
bounded stand-ins such as :class:`IntWindow`; every report produced from one
states the bound that was used.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence

Label = Hashable


class DomainError(ValueError):
    """Unknown element, carrier mismatch, or an invalid order table."""


class LatticeError(ValueError):
    """A requested join or meet does not exist in the carrier."""


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits of ``bits``, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class FiniteDomain:
    """A finite poset: an element tuple plus a decidable partial order.

    ``down(i)`` is the bitmask of all ``j`` with ``elements[j] <= elements[i]``.
    User-supplied relations are validated (reflexive, transitive,
    antisymmetric) at construction time; constructors that produce posets by
    construction (discrete, product, sum) skip the revalidation.
    """

    __slots__ = ("name", "elements", "_index", "_down", "_up", "_hash",
                 "_join_cache", "_meet_cache", "__dict__")

    def __init__(self, name: str, elements: Iterable[Label],
                 down: Sequence[int], *, validate: bool = True):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise DomainError(f"duplicate elements in carrier {name!r}")
        n = len(elements)
        down = tuple(down)
        if len(down) != n:
            raise DomainError(f"order table size {len(down)} != carrier size {n}")
        for bits in down:
            if bits >> n:
                raise DomainError("order table mentions elements outside the carrier")
        self.name = name
        self.elements = elements
        self._index = {x: i for i, x in enumerate(elements)}
        self._down = down
        if validate:
            self._validate()
        up = [0] * n
        for i in range(n):
            for j in iter_bits(down[i]):
                up[j] |= 1 << i
        self._up = tuple(up)
        self._hash = hash((self.elements, self._down))
        self._join_cache: dict[tuple[int, int], int] = {}
        self._meet_cache: dict[tuple[int, int], int] = {}

    def _validate(self) -> None:
        down = self._down
        for i in range(len(down)):
            if not down[i] >> i & 1:
                raise DomainError(f"order not reflexive at {self.elements[i]!r}")
            for j in iter_bits(down[i]):
                if j != i and down[j] >> i & 1:
                    raise DomainError(
                        f"order not antisymmetric between {self.elements[i]!r} "
                        f"and {self.elements[j]!r}")
                if down[j] & ~down[i]:
                    raise DomainError(f"order not transitive below {self.elements[i]!r}")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def discrete(name: str, elements: Iterable[Label]) -> FiniteDomain:
        """Carrier with ``x <= y`` iff ``x == y``."""
        elements = tuple(elements)
        return FiniteDomain(name, elements,
                            [1 << i for i in range(len(elements))], validate=False)

    @staticmethod
    def from_hasse(name: str, elements: Iterable[Label],
                   covers: Iterable[tuple[Label, Label]]) -> FiniteDomain:
        """Build the order as the reflexive-transitive closure of cover pairs.

        ``covers`` lists ``(lo, hi)`` edges of the Hasse diagram; cycles are
        rejected by the antisymmetry check after closure.
        """
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        down = [1 << i for i in range(n)]
        edges = []
        for lo, hi in covers:
            if lo not in index or hi not in index:
                raise DomainError(f"cover pair ({lo!r}, {hi!r}) not in carrier {name!r}")
            edges.append((index[lo], index[hi]))
        changed = True
        while changed:
            changed = False
            for lo, hi in edges:
                merged = down[hi] | down[lo]
                if merged != down[hi]:
                    down[hi] = merged
                    changed = True
        return FiniteDomain(name, elements, down, validate=True)

    @staticmethod
    def from_leq(name: str, elements: Iterable[Label],
                 leq: Callable[[Label, Label], bool]) -> FiniteDomain:
        """Build from a decidable order predicate (validated)."""
        elements = tuple(elements)
        n = len(elements)
        down = [0] * n
        for i in range(n):
            for j in range(n):
                if leq(elements[j], elements[i]):
                    down[i] |= 1 << j
        return FiniteDomain(name, elements, down, validate=True)

    @staticmethod
    def product(name: str, a: FiniteDomain, b: FiniteDomain) -> FiniteDomain:
        """Pairs ordered componentwise; index of ``(x, y)`` is ``ix(x)*|b| + ix(y)``."""
        nb = b.size
        labels = [(x, y) for x in a.elements for y in b.elements]
        down = []
        for i in range(a.size):
            for j in range(b.size):
                bits = 0
                row = b._down[j]
                for i2 in iter_bits(a._down[i]):
                    bits |= row << (i2 * nb)
                down.append(bits)
        return FiniteDomain(name, labels, down, validate=False)

    @staticmethod
    def disjoint_sum(name: str, a: FiniteDomain, b: FiniteDomain) -> FiniteDomain:
        """Tagged union ``("L", x) | ("R", y)`` with no order across the tags."""
        labels = [("L", x) for x in a.elements] + [("R", y) for y in b.elements]
        down = list(a._down) + [bits << a.size for bits in b._down]
        return FiniteDomain(name, labels, down, validate=False)

    # -- queries --------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def is_discrete(self) -> bool:
        return all(self._down[i] == 1 << i for i in range(self.size))

    def index(self, x: Label) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise DomainError(f"{x!r} is not an element of {self.name!r}") from None

    def __contains__(self, x: Label) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def down_bits(self, i: int) -> int:
        return self._down[i]

    def up_bits(self, i: int) -> int:
        return self._up[i]

    def leq_ix(self, i: int, j: int) -> bool:
        return bool(self._down[j] >> i & 1)

    def leq(self, x: Label, y: Label) -> bool:
        return self.leq_ix(self.index(x), self.index(y))

    @cached_property
    def bottom_ix(self) -> int | None:
        full = self.full_mask
        for i in range(self.size):
            if self._up[i] == full:
                return i
        return None

    def bottom(self) -> Label:
        if self.bottom_ix is None:
            raise LatticeError(f"{self.name!r} has no least element")
        return self.elements[self.bottom_ix]

    def _bound_ix(self, i: int, j: int, cone: tuple[int, ...],
                  cache: dict[tuple[int, int], int]) -> int:
        if i > j:
            i, j = j, i
        got = cache.get((i, j))
        if got is not None:
            return got
        shared = cone[i] & cone[j]
        if shared == 0:
            raise LatticeError(
                f"{self.elements[i]!r} and {self.elements[j]!r} have no bound in {self.name!r}")
        for k in iter_bits(shared):
            if shared & ~cone[k] == 0:
                cache[(i, j)] = k
                return k
        raise LatticeError(
            f"{self.elements[i]!r} and {self.elements[j]!r} have no unique bound in {self.name!r}")

    def join_ix(self, i: int, j: int) -> int:
        return self._bound_ix(i, j, self._up, self._join_cache)

    def meet_ix(self, i: int, j: int) -> int:
        return self._bound_ix(i, j, self._down, self._meet_cache)

    def join(self, x: Label, y: Label) -> Label:
        return self.elements[self.join_ix(self.index(x), self.index(y))]

    def meet(self, x: Label, y: Label) -> Label:
        return self.elements[self.meet_ix(self.index(x), self.index(y))]

    def join_all_ix(self, ixs: Iterable[int]) -> int:
        acc: int | None = None
        for i in ixs:
            acc = i if acc is None else self.join_ix(acc, i)
        if acc is None:
            if self.bottom_ix is None:
                raise LatticeError(f"empty join in {self.name!r}, which has no least element")
            return self.bottom_ix
        return acc

    def join_all(self, xs: Iterable[Label]) -> Label:
        return self.elements[self.join_all_ix(self.index(x) for x in xs)]

    def describe(self) -> str:
        return f"{self.name} ({self.size} elements)"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteDomain):
            return NotImplemented
        return self.elements == other.elements and self._down == other._down

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteDomain({self.name!r}, {self.size} elements)"


@dataclass(frozen=True)
class IntWindow:
    """The integers ``-bound..bound`` with the discrete order.

    A finite stand-in for the unbounded integers: quantified laws are checked
    over the window only, and reports state the bound that was used.
    """

    bound: int

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise DomainError("window bound must be nonnegative")

    def __contains__(self, i: int) -> bool:
        return -self.bound <= i <= self.bound

    @property
    def values(self) -> range:
        return range(-self.bound, self.bound + 1)

    @cached_property
    def domain(self) -> FiniteDomain:
        return FiniteDomain.discrete(f"ints[-{self.bound}..{self.bound}]", self.values)


@dataclass(frozen=True)
class DownSet:
    """A downward-closed subset of a :class:`FiniteDomain`.

    Construct through :meth:`close` (which closes an arbitrary member set
    downward) or the ``empty``/``full`` helpers; ``bits`` is assumed closed.
    """

    domain: FiniteDomain
    bits: int

    @staticmethod
    def close(domain: FiniteDomain, members: Iterable[Label]) -> DownSet:
        bits = 0
        for x in members:
            bits |= domain.down_bits(domain.index(x))
        return DownSet(domain, bits)

    @staticmethod
    def close_bits(domain: FiniteDomain, raw: int) -> DownSet:
        bits = 0
        for i in iter_bits(raw):
            bits |= domain.down_bits(i)
        return DownSet(domain, bits)

    @staticmethod
    def empty(domain: FiniteDomain) -> DownSet:
        return DownSet(domain, 0)

    @staticmethod
    def full(domain: FiniteDomain) -> DownSet:
        return DownSet(domain, domain.full_mask)

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(self.domain.elements[i] for i in iter_bits(self.bits))

    def __contains__(self, x: Label) -> bool:
        return bool(self.bits >> self.domain.index(x) & 1)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.labels)

    def __len__(self) -> int:
        return self.bits.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    def _check_same(self, other: DownSet) -> None:
        if self.domain != other.domain:
            raise DomainError("downsets over different carriers")

    def subset(self, other: DownSet) -> bool:
        self._check_same(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: DownSet) -> bool:
        return self.subset(other)

    def __or__(self, other: DownSet) -> DownSet:
        self._check_same(other)
        return DownSet(self.domain, self.bits | other.bits)

    def __and__(self, other: DownSet) -> DownSet:
        self._check_same(other)
        return DownSet(self.domain, self.bits & other.bits)

    def __repr__(self) -> str:
        return f"DownSet({self.domain.name}, {{{', '.join(map(repr, self.labels))}}})"


@dataclass(frozen=True)
class MonotoneFn:
    """A total order-preserving function between finite carriers.

    ``table[i]`` is the codomain index of the image of element ``i``;
    monotonicity is checked on construction.
    """

    dom: FiniteDomain
    cod: FiniteDomain
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.dom.size:
            raise DomainError("function table does not cover the carrier")
        for k in self.table:
            if not 0 <= k < self.cod.size:
                raise DomainError("function table maps outside the codomain")
        if not self.dom.is_discrete:
            for i in range(self.dom.size):
                ti = self.table[i]
                for j in iter_bits(self.dom.up_bits(i)):
                    if not self.cod.leq_ix(ti, self.table[j]):
                        raise DomainError(
                            f"not monotone: {self.dom.elements[i]!r} <= "
                            f"{self.dom.elements[j]!r} but images are not ordered")

    @staticmethod
    def from_callable(dom: FiniteDomain, cod: FiniteDomain,
                      fn: Callable[[Label], Label]) -> MonotoneFn:
        return MonotoneFn(dom, cod, tuple(cod.index(fn(x)) for x in dom.elements))

    def __call__(self, x: Label) -> Label:
        return self.cod.elements[self.table[self.dom.index(x)]]


@dataclass(frozen=True)
class KleisliFn:
    """A monotone function from a carrier into downsets of another.

    ``table[i]`` is the (already closed) member bitmask of the image of
    element ``i``; monotone means larger inputs get larger image sets.
    """

    dom: FiniteDomain
    cod: FiniteDomain
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.dom.size:
            raise DomainError("function table does not cover the carrier")
        full = self.cod.full_mask
        for bits in self.table:
            if bits & ~full:
                raise DomainError("image set mentions elements outside the codomain")
        for i, bits in enumerate(self.table):
            closed = 0
            for k in iter_bits(bits):
                closed |= self.cod.down_bits(k)
            if closed != bits:
                raise DomainError(
                    f"image of {self.dom.elements[i]!r} is not downward-closed")
        if not self.dom.is_discrete:
            for i in range(self.dom.size):
                ti = self.table[i]
                for j in iter_bits(self.dom.up_bits(i)):
                    if ti & ~self.table[j]:
                        raise DomainError(
                            f"not monotone: image of {self.dom.elements[i]!r} is not "
                            f"contained in the image of {self.dom.elements[j]!r}")

    @staticmethod
    def from_callable(dom: FiniteDomain, cod: FiniteDomain,
                      fn: Callable[[Label], Iterable[Label]]) -> KleisliFn:
        return KleisliFn(dom, cod,
                         tuple(DownSet.close(cod, fn(x)).bits for x in dom.elements))

    def __call__(self, x: Label) -> DownSet:
        return DownSet(self.cod, self.table[self.dom.index(x)])


# -- the powerset monad -------------------------------------------------------

def ret(x: Label, domain: FiniteDomain) -> DownSet:
    """Down-closure of the singleton ``{x}``: the monad unit."""
    return DownSet(domain, domain.down_bits(domain.index(x)))


def bind(xs: DownSet, f: KleisliFn) -> DownSet:
    """Union of ``f`` over the members of ``xs``: the monad extension."""
    if xs.domain != f.dom:
        raise DomainError(
            f"bind over {xs.domain.name!r} with a function on {f.dom.name!r}")
    acc = 0
    for i in iter_bits(xs.bits):
        acc |= f.table[i]
    return DownSet(f.cod, acc)


def pure(f: MonotoneFn) -> KleisliFn:
    """Inject a pure function into the effectful function space: ``ret . f``."""
    return KleisliFn(f.dom, f.cod,
                     tuple(f.cod.down_bits(k) for k in f.table))


def identity_fn(domain: FiniteDomain) -> MonotoneFn:
    return MonotoneFn(domain, domain, tuple(range(domain.size)))


def kcompose(g: KleisliFn, f: KleisliFn) -> KleisliFn:
    """Kleisli composition: ``(g . f)(x) = bind(f(x), g)``."""
    if f.cod != g.dom:
        raise DomainError(
            f"cannot compose: {f.cod.name!r} feeds a function on {g.dom.name!r}")
    table = []
    for bits in f.table:
        acc = 0
        for i in iter_bits(bits):
            acc |= g.table[i]
        table.append(acc)
    return KleisliFn(f.dom, g.cod, tuple(table))


# -- downset spaces -----------------------------------------------------------

def enumerate_downsets(domain: FiniteDomain, limit: int = 4096) -> list[int] | None:
    """All downward-closed member bitmasks, or None when 2^n exceeds ``limit``."""
    n = domain.size
    if n > limit.bit_length() - 1:
        return None
    down = domain._down
    sets = []
    for raw in range(1 << n):
        closed = True
        rest = raw
        while rest:
            low = rest & -rest
            if down[low.bit_length() - 1] & ~raw:
                closed = False
                break
            rest ^= low
        if closed:
            sets.append(raw)
    return sets


def sample_downsets(domain: FiniteDomain, count: int = 256, seed: int = 0) -> list[int]:
    """A seeded, deterministic sample of downsets.

    Always includes the empty set, the full carrier, and the closure of every
    singleton, so that pointwise violations of a quantified law cannot hide
    from the sample.
    """
    rng = random.Random(seed)
    n = domain.size
    seen: dict[int, None] = {0: None, domain.full_mask: None}
    for i in range(n):
        seen.setdefault(domain.down_bits(i), None)
    attempts = 0
    # rich orders may have fewer distinct downsets than asked for
    while len(seen) < count and attempts < 64 * count:
        attempts += 1
        bits = DownSet.close_bits(domain, rng.getrandbits(n)).bits
        seen.setdefault(bits, None)
    return sorted(seen)


def downset_space(domain: FiniteDomain, *, limit: int = 4096, sample: int = 256,
                  seed: int = 0) -> tuple[list[int], str]:
    """Downsets to quantify over plus a description of how they were obtained."""
    sets = enumerate_downsets(domain, limit)
    if sets is not None:
        return sets, f"all {len(sets)} downsets"
    return sample_downsets(domain, sample, seed), f"sampled {sample} downsets (seed {seed})"
