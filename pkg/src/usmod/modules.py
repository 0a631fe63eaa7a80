"""Finite modules over finite commutative rings.

A module is an additive table plus a scalar-action table indexed by ring
elements.  Submodules are canonical sorted element sets, so lattice meet and
join are plain set operations; homomorphisms are explicit index maps and are
enumerated from a greedily chosen generating set.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .caps import DEFAULT_CAPS, Caps
from .errors import (
    DomainError,
    InvalidModuleError,
    ResourceExceededError,
)
from .rings import FiniteRing, Ideal, Table


@dataclass(frozen=True, eq=False)
class FiniteModule:
    ring: FiniteRing
    add: Table
    zero: int
    act: Table  # act[r][x] = r . x, shape |R| x |M|
    label: str
    names: tuple[str, ...]
    # provenance for direct sums (used by certification closure rules);
    # deliberately excluded from equality.
    summands: Optional[tuple["FiniteModule", ...]] = None

    @property
    def size(self) -> int:
        return len(self.add)

    def elements(self) -> range:
        return range(self.size)

    def neg(self, x: int) -> int:
        for y, s in enumerate(self.add[x]):
            if s == self.zero:
                return y
        raise InvalidModuleError(f"{self.label}: element {x} has no additive inverse")

    def name(self, x: int) -> str:
        return self.names[x]

    def int_mul(self, t: int, x: int) -> int:
        """x added to itself t times (t >= 0)."""
        acc = self.zero
        for _ in range(t):
            acc = self.add[acc][x]
        return acc

    def additive_order(self, x: int) -> int:
        acc = x
        order = 1
        while acc != self.zero:
            acc = self.add[acc][x]
            order += 1
        return order

    def exponent(self) -> int:
        out = 1
        for x in self.elements():
            o = self.additive_order(x)
            out = out * o // _gcd(out, o)
        return out

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteModule):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.add == other.add
            and self.zero == other.zero
            and self.act == other.act
        )

    def __hash__(self) -> int:
        return hash((len(self.add), self.zero, self.label, hash(self.ring)))

    def __repr__(self) -> str:
        return f"FiniteModule({self.label}, m={self.size} over {self.ring.label})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class Submodule:
    parent: FiniteModule
    members: tuple[int, ...]  # sorted

    @property
    def size(self) -> int:
        return len(self.members)

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def is_zero(self) -> bool:
        return self.members == (self.parent.zero,)

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.size

    def __repr__(self) -> str:
        elems = ",".join(self.parent.name(x) for x in self.members)
        return f"Submodule({{{elems}}} of {self.parent.label})"


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteModule
    target: FiniteModule
    map: tuple[int, ...]  # image index for each source index

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __repr__(self) -> str:
        return f"Hom({self.source.label} -> {self.target.label}, {self.map})"


# ---------------------------------------------------------------------------
# validation


def check_module_axioms(module: FiniteModule) -> None:
    ring = module.ring
    m, n = module.size, ring.size
    if len(module.act) != n or any(len(row) != m for row in module.act):
        raise InvalidModuleError("action table shape mismatch")
    add, act, zero = module.add, module.act, module.zero
    for x in range(m):
        if add[x][zero] != x:
            raise InvalidModuleError("0 is not an additive identity")
        if zero not in add[x]:
            raise InvalidModuleError("missing additive inverse")
        if act[ring.one][x] != x:
            raise InvalidModuleError("1 . x != x")
        for y in range(m):
            if add[x][y] != add[y][x]:
                raise InvalidModuleError("addition not commutative")
            for z in range(m):
                if add[add[x][y]][z] != add[x][add[y][z]]:
                    raise InvalidModuleError("addition not associative")
    for r in range(n):
        for x in range(m):
            rx = act[r][x]
            for y in range(m):
                if act[r][add[x][y]] != add[rx][act[r][y]]:
                    raise InvalidModuleError("r(x+y) != rx+ry")
            for r2 in range(n):
                if act[ring.add[r][r2]][x] != add[rx][act[r2][x]]:
                    raise InvalidModuleError("(r+r')x != rx+r'x")
                if act[ring.mul[r][r2]][x] != act[r][act[r2][x]]:
                    raise InvalidModuleError("(rr')x != r(r'x)")


def check_homomorphism(f: Homomorphism) -> None:
    src, dst = f.source, f.target
    if src.ring != dst.ring:
        raise DomainError("source and target are over different rings")
    if len(f.map) != src.size:
        raise DomainError("map length mismatch")
    for x in src.elements():
        fx = f.map[x]
        for y in src.elements():
            if f.map[src.add[x][y]] != dst.add[fx][f.map[y]]:
                raise DomainError("map is not additive")
        for r in src.ring.elements():
            if f.map[src.act[r][x]] != dst.act[r][fx]:
                raise DomainError("map is not linear")


def make_hom(
    source: FiniteModule, target: FiniteModule, mapping: Sequence[int], check: bool = True
) -> Homomorphism:
    f = Homomorphism(source, target, tuple(mapping))
    if check:
        check_homomorphism(f)
    return f


# ---------------------------------------------------------------------------
# constructors


def regular_module(ring: FiniteRing) -> FiniteModule:
    """The ring as a module over itself; its submodules are the ideals."""
    module = FiniteModule(
        ring=ring,
        add=ring.add,
        zero=ring.zero,
        act=ring.mul,
        label=ring.label,
        names=ring.names,
    )
    check_module_axioms(module)
    return module


def zero_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(
        ring=ring,
        add=((0,),),
        zero=0,
        act=tuple((0,) for _ in ring.elements()),
        label="0",
        names=("0",),
    )


def cyclic_zmod_module(ring: FiniteRing, d: int) -> FiniteModule:
    """Z/d as a module over Z/n; requires d | n."""
    n = ring.zmod_n
    if n is None or n % d != 0:
        raise DomainError(f"Z/{d} is not a Z/{n} module")
    add = tuple(tuple((x + y) % d for y in range(d)) for x in range(d))
    act = tuple(tuple((r * x) % d for x in range(d)) for r in range(n))
    module = FiniteModule(
        ring=ring,
        add=add,
        zero=0,
        act=act,
        label=f"C{d}",
        names=tuple(str(x) for x in range(d)),
    )
    check_module_axioms(module)
    return module


def submodule(parent: FiniteModule, members: Iterable[int]) -> Submodule:
    sub = Submodule(parent, tuple(sorted(set(members))))
    check_submodule(sub)
    return sub


def check_submodule(sub: Submodule) -> None:
    parent = sub.parent
    mem = set(sub.members)
    if parent.zero not in mem:
        raise DomainError("submodule must contain 0")
    for x in mem:
        for y in mem:
            if parent.add[x][y] not in mem:
                raise DomainError("submodule not closed under addition")
        for r in parent.ring.elements():
            if parent.act[r][x] not in mem:
                raise DomainError("submodule not closed under the ring action")


def span(parent: FiniteModule, seed: Iterable[int]) -> tuple[int, ...]:
    """Submodule generated by *seed*: closure under addition and the action.

    Every pair (x, y) is processed when the later of the two is admitted, so
    the result is genuinely closed.
    """
    mem = {parent.zero}
    queue = list(set(seed))
    while queue:
        x = queue.pop()
        if x in mem:
            continue
        mem.add(x)
        for y in list(mem):
            s = parent.add[x][y]
            if s not in mem:
                queue.append(s)
        for r in parent.ring.elements():
            s = parent.act[r][x]
            if s not in mem:
                queue.append(s)
    return tuple(sorted(mem))


def cyclic_submodule(module: FiniteModule, x: int) -> Submodule:
    """Rx = { r.x : r in R }."""
    if not 0 <= x < module.size:
        raise DomainError("element outside the module")
    mem = {module.act[r][x] for r in module.ring.elements()}
    return Submodule(module, tuple(sorted(mem)))


def zero_submodule(module: FiniteModule) -> Submodule:
    return Submodule(module, (module.zero,))


def whole_submodule(module: FiniteModule) -> Submodule:
    return Submodule(module, tuple(module.elements()))


def sum_submodules(a: Submodule, b: Submodule) -> Submodule:
    if a.parent != b.parent:
        raise DomainError("submodules have different parents")
    parent = a.parent
    mem = {parent.add[x][y] for x in a.members for y in b.members}
    return Submodule(parent, tuple(sorted(mem)))


def intersect_submodules(a: Submodule, b: Submodule) -> Submodule:
    if a.parent != b.parent:
        raise DomainError("submodules have different parents")
    return Submodule(a.parent, tuple(sorted(set(a.members) & set(b.members))))


@lru_cache(maxsize=None)
def all_submodules(module: FiniteModule, caps: Caps = DEFAULT_CAPS) -> tuple[Submodule, ...]:
    """The full submodule lattice, as join-closure of the cyclic submodules."""
    if module.size > caps.max_module:
        raise ResourceExceededError(
            f"module has {module.size} > {caps.max_module} elements"
        )
    add = module.add
    seeds = sorted(
        {cyclic_submodule(module, x).members for x in module.elements()},
        key=lambda t: (len(t), t),
    )
    found: set[tuple[int, ...]] = set(seeds)
    queue = list(seeds)
    while queue:
        xs = queue.pop()
        for ys in list(found):
            zs = tuple(sorted({add[x][y] for x in xs for y in ys}))
            if zs not in found:
                if len(found) >= caps.max_lattice:
                    raise ResourceExceededError("submodule lattice exceeds cap")
                found.add(zs)
                queue.append(zs)
    ordered = sorted(found, key=lambda t: (len(t), t))
    return tuple(Submodule(module, mem) for mem in ordered)


@lru_cache(maxsize=None)
def quotient_module(module: FiniteModule, sub: Submodule) -> tuple[FiniteModule, Homomorphism]:
    """Coset module and the natural surjection, labelled by minimal coset reps."""
    if sub.parent != module:
        raise DomainError("submodule of a different module")
    mem = sub.members
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for x in module.elements():
        if x in rep_of:
            continue
        coset = sorted(module.add[x][k] for k in mem)
        rep = coset[0]
        reps.append(rep)
        for c in coset:
            rep_of[c] = rep
    reps.sort()
    index_of = {rep: i for i, rep in enumerate(reps)}
    proj = tuple(index_of[rep_of[x]] for x in module.elements())
    add = tuple(tuple(proj[module.add[a][b]] for b in reps) for a in reps)
    act = tuple(tuple(proj[module.act[r][a]] for a in reps) for r in module.ring.elements())
    quot = FiniteModule(
        ring=module.ring,
        add=add,
        zero=proj[module.zero],
        act=act,
        label=f"{module.label}/{{{','.join(module.name(x) for x in mem)}}}",
        names=tuple(f"[{module.name(rep)}]" for rep in reps),
    )
    eta = Homomorphism(module, quot, proj)
    return quot, eta


@lru_cache(maxsize=None)
def submodule_as_module(sub: Submodule) -> tuple[FiniteModule, Homomorphism]:
    """A submodule re-indexed as a standalone module, plus its inclusion map."""
    parent = sub.parent
    mem = sub.members
    index_of = {x: i for i, x in enumerate(mem)}
    add = tuple(tuple(index_of[parent.add[x][y]] for y in mem) for x in mem)
    act = tuple(tuple(index_of[parent.act[r][x]] for x in mem) for r in parent.ring.elements())
    module = FiniteModule(
        ring=parent.ring,
        add=add,
        zero=index_of[parent.zero],
        act=act,
        label=f"{parent.label}|{len(mem)}",
        names=tuple(parent.name(x) for x in mem),
    )
    incl = Homomorphism(module, parent, mem)
    return module, incl


def direct_sum(
    m1: FiniteModule, m2: FiniteModule, caps: Caps = DEFAULT_CAPS
) -> tuple[FiniteModule, Homomorphism, Homomorphism, Homomorphism, Homomorphism]:
    """Componentwise module on pairs; returns (M, i1, i2, p1, p2)."""
    if m1.ring != m2.ring:
        raise DomainError("summands are over different rings")
    n1, n2 = m1.size, m2.size
    if n1 * n2 > caps.max_module:
        raise ResourceExceededError(f"direct sum would have {n1 * n2} > {caps.max_module} elements")

    def idx(x: int, y: int) -> int:
        return x * n2 + y

    pairs = [(x, y) for x in range(n1) for y in range(n2)]
    add = tuple(
        tuple(idx(m1.add[x][u], m2.add[y][v]) for (u, v) in pairs) for (x, y) in pairs
    )
    act = tuple(
        tuple(idx(m1.act[r][x], m2.act[r][y]) for (x, y) in pairs)
        for r in m1.ring.elements()
    )
    out = FiniteModule(
        ring=m1.ring,
        add=add,
        zero=idx(m1.zero, m2.zero),
        act=act,
        label=f"{m1.label}(+){m2.label}",
        names=tuple(f"({m1.name(x)}|{m2.name(y)})" for (x, y) in pairs),
        summands=(m1, m2),
    )
    i1 = Homomorphism(m1, out, tuple(idx(x, m2.zero) for x in range(n1)))
    i2 = Homomorphism(m2, out, tuple(idx(m1.zero, y) for y in range(n2)))
    p1 = Homomorphism(out, m1, tuple(x for (x, y) in pairs))
    p2 = Homomorphism(out, m2, tuple(y for (x, y) in pairs))
    return out, i1, i2, p1, p2


def direct_sum_many(
    mods: Sequence[FiniteModule], caps: Caps = DEFAULT_CAPS
) -> tuple[FiniteModule, list[Homomorphism], list[Homomorphism]]:
    """Left-nested iterated direct sum; returns (sum, injections, projections)."""
    if not mods:
        raise DomainError("need at least one summand")
    total = mods[0]
    injections = [identity_hom(mods[0])]
    projections = [identity_hom(mods[0])]
    for m in mods[1:]:
        total2, i1, i2, p1, p2 = direct_sum(total, m, caps)
        injections = [compose(i1, inj) for inj in injections]
        injections.append(i2)
        projections = [compose(proj, p1) for proj in projections]
        projections.append(p2)
        total = total2
    if len(mods) > 1:
        object.__setattr__(total, "summands", tuple(mods))
    return total, injections, projections


# ---------------------------------------------------------------------------
# maps


def identity_hom(module: FiniteModule) -> Homomorphism:
    return Homomorphism(module, module, tuple(module.elements()))


def zero_hom(source: FiniteModule, target: FiniteModule) -> Homomorphism:
    return Homomorphism(source, target, tuple(target.zero for _ in source.elements()))


def inclusion_hom(sub: Submodule) -> tuple[FiniteModule, Homomorphism]:
    return submodule_as_module(sub)


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """g after f.  Compositions of valid maps are valid; no recheck."""
    if f.target != g.source:
        raise DomainError("maps do not compose")
    return Homomorphism(f.source, g.target, tuple(g.map[y] for y in f.map))


def add_homs(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    if f.source != g.source or f.target != g.target:
        raise DomainError("maps have different endpoints")
    add = f.target.add
    return Homomorphism(f.source, f.target, tuple(add[a][b] for a, b in zip(f.map, g.map)))


def scalar_hom(module: FiniteModule, r: int) -> Homomorphism:
    """x -> r.x as an endomorphism."""
    return Homomorphism(module, module, tuple(module.act[r]))


def kernel(f: Homomorphism) -> Submodule:
    zero = f.target.zero
    return Submodule(f.source, tuple(x for x in f.source.elements() if f.map[x] == zero))


def image(f: Homomorphism) -> Submodule:
    return Submodule(f.target, tuple(sorted(set(f.map))))


def preimage(f: Homomorphism, q: Submodule) -> Submodule:
    if q.parent != f.target:
        raise DomainError("submodule not in the target of the map")
    qset = q.member_set()
    return Submodule(f.source, tuple(x for x in f.source.elements() if f.map[x] in qset))


def image_of_submodule(f: Homomorphism, k: Submodule) -> Submodule:
    if k.parent != f.source:
        raise DomainError("submodule not in the source of the map")
    return Submodule(f.target, tuple(sorted({f.map[x] for x in k.members})))


# ---------------------------------------------------------------------------
# hom enumeration


def generating_set(module: FiniteModule) -> tuple[int, ...]:
    """Greedy irredundant generating set in canonical element order."""
    gens: list[int] = []
    spanned = {module.zero}
    for x in module.elements():
        if x not in spanned:
            gens.append(x)
            spanned = set(span(module, gens))
    return tuple(gens)


def _closure_extend(
    src: FiniteModule, dst: FiniteModule, assigned: Sequence[tuple[int, int]]
) -> Optional[dict[int, int]]:
    """Forced extension of generator images to the span, or None on conflict.

    Works the full pair/action closure, so a completed extension is a
    genuine homomorphism on its domain (every sum and scalar derivation is
    checked, not just a spanning tree).
    """
    f: dict[int, int] = {}
    stack: list[tuple[int, int]] = [(src.zero, dst.zero)]
    stack.extend(assigned)
    ring = src.ring
    while stack:
        x, fx = stack.pop()
        cur = f.get(x)
        if cur is not None:
            if cur != fx:
                return None
            continue
        f[x] = fx
        for y, fy in list(f.items()):
            stack.append((src.add[x][y], dst.add[fx][fy]))
        for r in ring.elements():
            stack.append((src.act[r][x], dst.act[r][fx]))
    return f


def hom_enumerate(
    source: FiniteModule,
    target: FiniteModule,
    cap: int | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> list[Homomorphism]:
    """All R-linear maps source -> target, in deterministic order.

    Candidate images of each generator are filtered by additive order; the
    product of the candidate counts is the projected size and must stay
    within the cap before enumeration starts.
    """
    if source.ring != target.ring:
        raise DomainError("source and target are over different rings")
    cap = caps.max_hom if cap is None else cap
    gens = generating_set(source)
    if not gens:  # zero module: only the zero map
        return [zero_hom(source, target)]

    candidates: list[list[int]] = []
    projected = 1
    for g in gens:
        d = source.additive_order(g)
        cand = [y for y in target.elements() if target.int_mul(d, y) == target.zero]
        candidates.append(cand)
        projected *= len(cand)
        if projected > cap:
            raise ResourceExceededError(
                f"projected hom count {projected} exceeds cap {cap}"
            )

    out: list[Homomorphism] = []
    assignment: list[tuple[int, int]] = []

    def backtrack(i: int) -> None:
        if i == len(gens):
            f = _closure_extend(source, target, assignment)
            if f is not None:
                assert len(f) == source.size
                out.append(Homomorphism(source, target, tuple(f[x] for x in source.elements())))
            return
        for y in candidates[i]:
            assignment.append((gens[i], y))
            if _closure_extend(source, target, assignment) is not None:
                backtrack(i + 1)
            assignment.pop()

    backtrack(0)
    return out


def hom_module(
    source: FiniteModule,
    target: FiniteModule,
    cap: int | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[FiniteModule, list[Homomorphism]]:
    """Hom(source, target) as a module under pointwise addition and action."""
    homs = hom_enumerate(source, target, cap, caps)
    index_of = {h.map: i for i, h in enumerate(homs)}
    add_rows = []
    for f in homs:
        row = []
        for g in homs:
            row.append(index_of[add_homs(f, g).map])
        add_rows.append(tuple(row))
    ring = source.ring
    act_rows = []
    for r in ring.elements():
        row = []
        for f in homs:
            scaled = tuple(target.act[r][v] for v in f.map)
            row.append(index_of[scaled])
        act_rows.append(tuple(row))
    module = FiniteModule(
        ring=ring,
        add=tuple(add_rows),
        zero=index_of[zero_hom(source, target).map],
        act=tuple(act_rows),
        label=f"Hom({source.label},{target.label})",
        names=tuple(str(h.map) for h in homs),
    )
    return module, homs


# ---------------------------------------------------------------------------
# annihilators, prime modules, zero divisors


def annihilator(ring: FiniteRing, target: Submodule | FiniteModule) -> Ideal:
    """{ r in R : r.N = 0 }."""
    if isinstance(target, Submodule):
        parent = target.parent
        members: Sequence[int] = target.members
    else:
        parent = target
        members = range(target.size)
    if parent.ring != ring:
        raise DomainError("module is over a different ring")
    ann = [
        r
        for r in ring.elements()
        if all(parent.act[r][x] == parent.zero for x in members)
    ]
    return Ideal(ring, tuple(ann))


def is_prime_module(module: FiniteModule) -> bool:
    """All nonzero submodules share the module's annihilator.

    Checked on cyclic submodules only; every nonzero submodule contains a
    nonzero cyclic one, so this is equivalent to the full-lattice scan (the
    test suite cross-checks that on small instances).
    """
    if module.size == 1:
        raise DomainError("the zero module is not prime")
    ring = module.ring
    ann_m = annihilator(ring, module).members
    for x in module.elements():
        if x == module.zero:
            continue
        if annihilator(ring, cyclic_submodule(module, x)).members != ann_m:
            return False
    return True


def zero_divisors_on(ring: FiniteRing, module: FiniteModule) -> tuple[int, ...]:
    """Z_R(M): ring elements killing some nonzero module element."""
    if module.ring != ring:
        raise DomainError("module is over a different ring")
    out = []
    for r in ring.elements():
        if any(module.act[r][x] == module.zero for x in module.elements() if x != module.zero):
            out.append(r)
    return tuple(out)
