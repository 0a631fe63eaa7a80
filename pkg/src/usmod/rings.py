"""Finite commutative rings: construction, ideals, spectra, multiplicative sets.

Rings are stored as full operation tables over element indices ``0..n-1``.
That is deliberate: at desk scale exactness and dead-simple table scans beat
any clever representation, and every axiom becomes an exhaustive check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, TYPE_CHECKING

from .caps import DEFAULT_CAPS, Caps
from .errors import (
    DomainError,
    ImproperIdealError,
    InvalidMultiplicativeSetError,
    InvalidRingError,
    NotPrimeError,
    ResourceExceededError,
)

if TYPE_CHECKING:  # pragma: no cover - only for annotations
    from .modules import FiniteModule

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative unital ring given by explicit operation tables."""

    add: Table
    mul: Table
    zero: int
    one: int
    label: str
    names: tuple[str, ...]
    zmod_n: Optional[int] = None  # set by make_zmod; tags rings of the form Z/n

    @property
    def size(self) -> int:
        return len(self.add)

    def elements(self) -> range:
        return range(self.size)

    def neg(self, a: int) -> int:
        row = self.add[a]
        for b, s in enumerate(row):
            if s == self.zero:
                return b
        raise InvalidRingError(f"{self.label}: element {a} has no additive inverse")

    def name(self, a: int) -> str:
        return self.names[a]

    def units(self) -> list[int]:
        one = self.one
        return [a for a in self.elements() if one in self.mul[a]]

    def is_unit(self, a: int) -> bool:
        return self.one in self.mul[a]

    def product(self, elems: Iterable[int]) -> int:
        acc = self.one
        for a in elems:
            acc = self.mul[acc][a]
        return acc

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (
            self.add == other.add
            and self.mul == other.mul
            and self.zero == other.zero
            and self.one == other.one
        )

    def __hash__(self) -> int:
        # cheap but eq-consistent; tables are too big to hash on every lookup
        return hash((len(self.add), self.zero, self.one, self.label))

    def __repr__(self) -> str:
        return f"FiniteRing({self.label}, n={self.size})"


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing
    members: tuple[int, ...]  # sorted

    @property
    def size(self) -> int:
        return len(self.members)

    def is_proper(self) -> bool:
        return len(self.members) < self.ring.size

    def contains(self, a: int) -> bool:
        return a in set(self.members)

    def __repr__(self) -> str:
        elems = ",".join(self.ring.name(a) for a in self.members)
        return f"Ideal({{{elems}}} of {self.ring.label})"


@dataclass(frozen=True)
class MultiplicativeSet:
    """1 in S, 0 not in S, closed under products; sigma = product of all members.

    sigma is the universal uniform witness: for finite S, some s in S kills a
    module iff sigma does, because sigma is divisible by every member.
    """

    ring: FiniteRing
    members: tuple[int, ...]  # sorted
    sigma: int

    @property
    def size(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        elems = ",".join(self.ring.name(a) for a in self.members)
        return f"MultSet({{{elems}}} of {self.ring.label}, sigma={self.ring.name(self.sigma)})"


# ---------------------------------------------------------------------------
# validation


def check_ring_axioms(ring: FiniteRing) -> None:
    """Exhaustive scan of all abelian-group, commutativity, associativity,
    unitality and distributivity axioms.  Raises InvalidRingError on failure."""
    n = ring.size
    if n < 2 or ring.zero == ring.one:
        raise InvalidRingError("ring must be nonzero (0 != 1)")
    add, mul, zero, one = ring.add, ring.mul, ring.zero, ring.one
    if len(mul) != n or any(len(row) != n for row in add) or any(len(row) != n for row in mul):
        raise InvalidRingError("table shape mismatch")
    rng = range(n)
    for a in rng:
        if add[a][zero] != a:
            raise InvalidRingError("0 is not an additive identity")
        if mul[a][one] != a:
            raise InvalidRingError("1 is not a multiplicative identity")
        if zero not in add[a]:
            raise InvalidRingError("missing additive inverse")
        for b in rng:
            if add[a][b] != add[b][a]:
                raise InvalidRingError("addition not commutative")
            if mul[a][b] != mul[b][a]:
                raise InvalidRingError("multiplication not commutative")
    for a in rng:
        for b in rng:
            ab = add[a][b]
            mab = mul[a][b]
            for c in rng:
                if add[ab][c] != add[a][add[b][c]]:
                    raise InvalidRingError("addition not associative")
                if mul[mab][c] != mul[a][mul[b][c]]:
                    raise InvalidRingError("multiplication not associative")
                if mul[a][add[b][c]] != add[mab][mul[a][c]]:
                    raise InvalidRingError("distributivity fails")


def check_ideal(ideal: Ideal) -> None:
    ring = ideal.ring
    mem = set(ideal.members)
    if ring.zero not in mem:
        raise DomainError("ideal must contain 0")
    for a in mem:
        for b in mem:
            if ring.add[a][b] not in mem:
                raise DomainError("ideal not closed under addition")
        for r in ring.elements():
            if ring.mul[r][a] not in mem:
                raise DomainError("ideal not closed under ring multiplication")


def check_mult_set(mset: MultiplicativeSet) -> None:
    ring = mset.ring
    mem = set(mset.members)
    if ring.one not in mem:
        raise InvalidMultiplicativeSetError("1 must belong to the set")
    if ring.zero in mem:
        raise InvalidMultiplicativeSetError("0 must not belong to the set")
    for s in mem:
        for t in mem:
            if ring.mul[s][t] not in mem:
                raise InvalidMultiplicativeSetError("set not closed under products")
    if mset.sigma not in mem or mset.sigma != ring.product(mset.members):
        raise InvalidMultiplicativeSetError("sigma is not the product of all members")


# ---------------------------------------------------------------------------
# constructors


def make_zmod(n: int) -> FiniteRing:
    """Z/nZ with residue arithmetic."""
    if n < 2:
        raise InvalidRingError(f"zmod needs n >= 2, got {n}")
    add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    mul = tuple(tuple((a * b) % n for b in range(n)) for a in range(n))
    ring = FiniteRing(
        add=add,
        mul=mul,
        zero=0,
        one=1 % n,
        label=f"Z/{n}",
        names=tuple(str(a) for a in range(n)),
        zmod_n=n,
    )
    check_ring_axioms(ring)
    return ring


def make_product(r1: FiniteRing, r2: FiniteRing, caps: Caps = DEFAULT_CAPS) -> FiniteRing:
    """Componentwise ring on pairs; identity (1, 1)."""
    n1, n2 = r1.size, r2.size
    if n1 * n2 > caps.max_ring:
        raise ResourceExceededError(f"product ring would have {n1 * n2} > {caps.max_ring} elements")

    def idx(a: int, b: int) -> int:
        return a * n2 + b

    pairs = [(a, b) for a in range(n1) for b in range(n2)]
    add = tuple(
        tuple(idx(r1.add[a][c], r2.add[b][d]) for (c, d) in pairs) for (a, b) in pairs
    )
    mul = tuple(
        tuple(idx(r1.mul[a][c], r2.mul[b][d]) for (c, d) in pairs) for (a, b) in pairs
    )
    ring = FiniteRing(
        add=add,
        mul=mul,
        zero=idx(r1.zero, r2.zero),
        one=idx(r1.one, r2.one),
        label=f"{r1.label}x{r2.label}",
        names=tuple(f"({r1.name(a)},{r2.name(b)})" for (a, b) in pairs),
    )
    check_ring_axioms(ring)
    return ring


def make_trivial_extension(
    ring: FiniteRing, module: "FiniteModule", caps: Caps = DEFAULT_CAPS
) -> FiniteRing:
    """Ring on pairs (a, m) with (a,m)(b,n) = (ab, an+bm).

    The module coordinate squares to zero; the embedding a -> (a, 0) is
    verified to be a ring monomorphism.
    """
    if module.ring != ring:
        raise DomainError("module is not over the given ring")
    n, m = ring.size, module.size
    if n * m > caps.max_ring:
        raise ResourceExceededError(f"extension would have {n * m} > {caps.max_ring} elements")

    def idx(a: int, x: int) -> int:
        return a * m + x

    pairs = [(a, x) for a in range(n) for x in range(m)]
    add = tuple(
        tuple(idx(ring.add[a][b], module.add[x][y]) for (b, y) in pairs) for (a, x) in pairs
    )
    mul = tuple(
        tuple(
            idx(ring.mul[a][b], module.add[module.act[a][y]][module.act[b][x]])
            for (b, y) in pairs
        )
        for (a, x) in pairs
    )
    out = FiniteRing(
        add=add,
        mul=mul,
        zero=idx(ring.zero, module.zero),
        one=idx(ring.one, module.zero),
        label=f"{ring.label}*{module.label}",
        names=tuple(f"({ring.name(a)},{module.name(x)})" for (a, x) in pairs),
    )
    check_ring_axioms(out)
    for a in range(n):  # canonical embedding must be a ring monomorphism
        for b in range(n):
            if out.add[idx(a, module.zero)][idx(b, module.zero)] != idx(ring.add[a][b], module.zero):
                raise InvalidRingError("embedding not additive")
            if out.mul[idx(a, module.zero)][idx(b, module.zero)] != idx(ring.mul[a][b], module.zero):
                raise InvalidRingError("embedding not multiplicative")
    return out


def quotient_ring(ring: FiniteRing, ideal: Ideal) -> tuple[FiniteRing, tuple[int, ...]]:
    """Coset ring R/I plus the natural surjection as an index map."""
    if ideal.ring != ring:
        raise DomainError("ideal belongs to a different ring")
    if not ideal.is_proper():
        raise ImproperIdealError("cannot quotient by the whole ring")
    mem = ideal.members
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for a in ring.elements():
        if a in rep_of:
            continue
        coset = sorted(ring.add[a][k] for k in mem)
        rep = coset[0]
        reps.append(rep)
        for c in coset:
            rep_of[c] = rep
    reps.sort()
    index_of = {rep: i for i, rep in enumerate(reps)}
    surj = tuple(index_of[rep_of[a]] for a in ring.elements())
    add = tuple(tuple(surj[ring.add[a][b]] for b in reps) for a in reps)
    mul = tuple(tuple(surj[ring.mul[a][b]] for b in reps) for a in reps)
    out = FiniteRing(
        add=add,
        mul=mul,
        zero=surj[ring.zero],
        one=surj[ring.one],
        label=f"{ring.label}/{{{','.join(ring.name(a) for a in mem)}}}",
        names=tuple(f"[{ring.name(rep)}]" for rep in reps),
    )
    check_ring_axioms(out)
    return out, surj


# ---------------------------------------------------------------------------
# ideals and spectra


def cyclic_ideal(ring: FiniteRing, a: int) -> tuple[int, ...]:
    return tuple(sorted({ring.mul[r][a] for r in ring.elements()}))


def _join(ring: FiniteRing, xs: tuple[int, ...], ys: tuple[int, ...]) -> tuple[int, ...]:
    # the elementwise sum of two ideals/submodules is already closed
    return tuple(sorted({ring.add[x][y] for x in xs for y in ys}))


@lru_cache(maxsize=None)
def all_ideals(ring: FiniteRing) -> tuple[Ideal, ...]:
    """Every ideal, via join-closure of the cyclic ideals (r), canonically sorted."""
    seeds = sorted({cyclic_ideal(ring, a) for a in ring.elements()}, key=lambda t: (len(t), t))
    found = set(seeds)
    queue = list(seeds)
    while queue:
        xs = queue.pop()
        for ys in list(found):
            zs = _join(ring, xs, ys)
            if zs not in found:
                found.add(zs)
                queue.append(zs)
    ordered = sorted(found, key=lambda t: (len(t), t))
    return tuple(Ideal(ring, mem) for mem in ordered)


def ideal_from(ring: FiniteRing, generators: Iterable[int]) -> Ideal:
    mem = {ring.zero}
    for g in generators:
        mem = set(_join(ring, tuple(sorted(mem)), cyclic_ideal(ring, g)))
    ideal = Ideal(ring, tuple(sorted(mem)))
    check_ideal(ideal)
    return ideal


def is_prime_ideal(ideal: Ideal) -> bool:
    ring = ideal.ring
    if not ideal.is_proper():
        return False
    mem = set(ideal.members)
    for a in ring.elements():
        if a in mem:
            continue
        for b in ring.elements():
            if b not in mem and ring.mul[a][b] in mem:
                return False
    return True


@lru_cache(maxsize=None)
def spectrum(ring: FiniteRing) -> tuple[tuple[Ideal, ...], tuple[Ideal, ...]]:
    """(primes, maximals).  For finite commutative rings these coincide, but
    both are computed from their own definitions and cross-checkable."""
    ideals = all_ideals(ring)
    primes = tuple(i for i in ideals if is_prime_ideal(i))
    proper = [i for i in ideals if i.is_proper()]
    maximals = []
    for i in proper:
        mem = set(i.members)
        if not any(j is not i and mem < set(j.members) for j in proper):
            maximals.append(i)
    return primes, tuple(maximals)


# ---------------------------------------------------------------------------
# multiplicative sets


def mult_set_closure(ring: FiniteRing, generators: Iterable[int]) -> MultiplicativeSet:
    """Smallest multiplicatively closed superset of generators + {1}.

    Raises if the closure swallows 0 (some generator is nilpotent-tainted).
    """
    gens = sorted(set(generators))
    if not gens:
        raise InvalidMultiplicativeSetError("need at least one generator")
    mem = {ring.one}
    queue = list(gens)
    while queue:
        s = queue.pop()
        if s in mem:
            continue
        mem.add(s)
        for t in list(mem):
            st = ring.mul[s][t]
            if st not in mem:
                queue.append(st)
    if ring.zero in mem:
        raise InvalidMultiplicativeSetError(
            f"closure of {{{','.join(ring.name(g) for g in gens)}}} contains 0"
        )
    members = tuple(sorted(mem))
    mset = MultiplicativeSet(ring, members, ring.product(members))
    check_mult_set(mset)
    return mset


def complement_of_prime(ring: FiniteRing, p: Ideal) -> MultiplicativeSet:
    if p.ring != ring:
        raise DomainError("ideal belongs to a different ring")
    if not is_prime_ideal(p):
        raise NotPrimeError("complement is multiplicative only for prime ideals")
    members = tuple(sorted(set(ring.elements()) - set(p.members)))
    mset = MultiplicativeSet(ring, members, ring.product(members))
    check_mult_set(mset)
    return mset


def unit_mult_set(ring: FiniteRing) -> MultiplicativeSet:
    members = tuple(sorted(ring.units()))
    return MultiplicativeSet(ring, members, ring.product(members))


def regular_elements(ring: FiniteRing) -> set[int]:
    """Nonzerodivisors of the ring."""
    out = set()
    for a in ring.elements():
        if all(ring.mul[a][b] != ring.zero for b in ring.elements() if b != ring.zero):
            out.add(a)
    return out


def is_regular_set(ring: FiniteRing, mset: MultiplicativeSet) -> bool:
    reg = regular_elements(ring)
    return all(s in reg for s in mset.members)


def is_u_S_noetherian(
    ring: FiniteRing, mset: MultiplicativeSet
) -> tuple[bool, int, dict[tuple[int, ...], tuple[int, ...]]]:
    """Uniform squeeze of every ideal over a finitely generated sub-ideal.

    For a finite ring this is always witnessed by s = 1 with J = I, but the
    definitional containment check is executed literally anyway.  Returns
    (verdict, witness s, per-ideal J map keyed by I.members).
    """
    per_ideal: dict[tuple[int, ...], tuple[int, ...]] = {}
    for s in mset.members:
        ok = True
        trial: dict[tuple[int, ...], tuple[int, ...]] = {}
        for ideal in all_ideals(ring):
            j = ideal.members  # generated by its own (finitely many) elements
            jset = set(j)
            if not all(ring.mul[s][a] in jset for a in ideal.members):
                ok = False
                break
            trial[ideal.members] = j
        if ok:
            per_ideal = trial
            return True, s, per_ideal
    return False, ring.zero, per_ideal  # unreachable for valid inputs


# ---------------------------------------------------------------------------
# isomorphism search (tests and CRT sanity checks only)


def find_ring_isomorphism(
    r1: FiniteRing, r2: FiniteRing, caps: Caps = DEFAULT_CAPS
) -> Optional[tuple[int, ...]]:
    """Exhaustive unit-preserving bijection search with early pruning.

    Returns the image table (index map) or None.  Guarded by caps because the
    search is factorial; it only runs on example-sized rings.
    """
    if r1.size != r2.size:
        return None
    n = r1.size
    budget = caps.max_iso_search

    others1 = [a for a in range(n) if a not in (r1.zero, r1.one)]
    others2 = [b for b in range(n) if b not in (r2.zero, r2.one)]
    phi: dict[int, int] = {r1.zero: r2.zero, r1.one: r2.one}
    used = {r2.zero, r2.one}
    tried = 0

    def consistent(a: int, b: int) -> bool:
        # check structure against everything already assigned
        for x, y in phi.items():
            if r1.add[a][x] in phi and phi[r1.add[a][x]] != r2.add[b][y]:
                return False
            if r1.mul[a][x] in phi and phi[r1.mul[a][x]] != r2.mul[b][y]:
                return False
        return True

    def backtrack(i: int) -> bool:
        nonlocal tried
        if i == len(others1):
            # full verification pass
            for a in range(n):
                for c in range(n):
                    if phi[r1.add[a][c]] != r2.add[phi[a]][phi[c]]:
                        return False
                    if phi[r1.mul[a][c]] != r2.mul[phi[a]][phi[c]]:
                        return False
            return True
        a = others1[i]
        for b in others2:
            if b in used:
                continue
            tried += 1
            if tried > budget:
                raise ResourceExceededError("ring isomorphism search budget exhausted")
            if not consistent(a, b):
                continue
            phi[a] = b
            used.add(b)
            if backtrack(i + 1):
                return True
            del phi[a]
            used.discard(b)
        return False

    if backtrack(0):
        return tuple(phi[a] for a in range(n))
    return None
