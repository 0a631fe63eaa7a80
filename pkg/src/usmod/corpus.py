"""Deterministic instance generation for the law harness.

An Instance is a fully serializable recipe: ring spec, multiplicative-set
spec, module spec and an optional submodule-generator spec, all relative to
each other.  Building an instance never consults global state, so a witness
serialized from a report replays bit-identically anywhere.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .caps import DEFAULT_CAPS, Caps
from .errors import ConfigError, ResourceExceededError
from .modules import (
    FiniteModule,
    Submodule,
    all_submodules,
    direct_sum,
    quotient_module,
    regular_module,
    span,
    submodule_as_module,
)
from .rings import (
    FiniteRing,
    Ideal,
    MultiplicativeSet,
    all_ideals,
    complement_of_prime,
    make_product,
    make_trivial_extension,
    make_zmod,
    mult_set_closure,
    spectrum,
    unit_mult_set,
)

import random

Spec = tuple  # nested tuples of strings and ints


@dataclass(frozen=True)
class Bounds:
    max_ring: int = 36
    max_module: int = 64
    composite_cap: int = 16  # elements in product/extension rings
    max_instances: int = 0   # 0 = no limit
    msets_per_ring: int = 6
    modules_per_ring: int = 6
    submodules_per_module: int = 6

    def check(self, caps: Caps) -> None:
        if self.max_ring > caps.max_ring or self.max_module > caps.max_module:
            raise ConfigError("bounds exceed the global caps")
        if self.max_ring < 2:
            raise ConfigError("max_ring must be at least 2")


@dataclass(frozen=True)
class Instance:
    ring: Spec
    mset: Spec
    module: Spec
    submodule: Optional[tuple[int, ...]]  # generator elements, or None
    seed: int
    size_profile: tuple[int, int]  # (max_ring, max_module)

    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "mset": self.mset,
            "module": self.module,
            "submodule": self.submodule,
            "seed": self.seed,
            "size_profile": self.size_profile,
        }

    @staticmethod
    def from_json(payload: dict) -> "Instance":
        return Instance(
            ring=_tuplize(payload["ring"]),
            mset=_tuplize(payload["mset"]),
            module=_tuplize(payload["module"]),
            submodule=None if payload["submodule"] is None else tuple(payload["submodule"]),
            seed=payload["seed"],
            size_profile=tuple(payload["size_profile"]),
        )


def _tuplize(x):
    if isinstance(x, list):
        return tuple(_tuplize(y) for y in x)
    return x


# ---------------------------------------------------------------------------
# spec builders


@lru_cache(maxsize=None)
def build_ring(spec: Spec, caps: Caps = DEFAULT_CAPS) -> FiniteRing:
    kind = spec[0]
    if kind == "zmod":
        return make_zmod(spec[1])
    if kind == "product":
        return make_product(build_ring(spec[1], caps), build_ring(spec[2], caps), caps)
    if kind == "trivext":
        ring = build_ring(spec[1], caps)
        module = build_module(ring, spec[2], caps)
        return make_trivial_extension(ring, module, caps)
    raise ConfigError(f"unknown ring spec {spec!r}")


@lru_cache(maxsize=None)
def build_module(ring: FiniteRing, spec: Spec, caps: Caps = DEFAULT_CAPS) -> FiniteModule:
    kind = spec[0]
    if kind == "regular":
        return regular_module(ring)
    if kind == "dsum":
        return direct_sum(
            build_module(ring, spec[1], caps), build_module(ring, spec[2], caps), caps
        )[0]
    if kind == "quot":
        base = build_module(ring, spec[1], caps)
        sub = Submodule(base, span(base, spec[2]))
        return quotient_module(base, sub)[0]
    if kind == "asmod":
        base = build_module(ring, spec[1], caps)
        sub = Submodule(base, span(base, spec[2]))
        return submodule_as_module(sub)[0]
    raise ConfigError(f"unknown module spec {spec!r}")


def build_mset(ring: FiniteRing, spec: Spec) -> MultiplicativeSet:
    kind = spec[0]
    if kind == "closure":
        return mult_set_closure(ring, spec[1])
    if kind == "units":
        return unit_mult_set(ring)
    if kind == "complement_prime":
        return complement_of_prime(ring, Ideal(ring, tuple(spec[1])))
    raise ConfigError(f"unknown mset spec {spec!r}")


@dataclass(frozen=True)
class BuiltInstance:
    instance: Instance
    ring: FiniteRing
    mset: MultiplicativeSet
    module: FiniteModule
    submodule: Optional[Submodule]


def build_instance(inst: Instance, caps: Caps = DEFAULT_CAPS) -> BuiltInstance:
    ring = build_ring(inst.ring, caps)
    mset = build_mset(ring, inst.mset)
    module = build_module(ring, inst.module, caps)
    sub = None
    if inst.submodule is not None:
        sub = Submodule(module, span(module, inst.submodule))
    return BuiltInstance(inst, ring, mset, module, sub)


# ---------------------------------------------------------------------------
# generation


def _ring_specs(bounds: Bounds) -> list[Spec]:
    specs: list[Spec] = [("zmod", n) for n in range(2, bounds.max_ring + 1)]
    cap = bounds.composite_cap
    for a in range(2, cap + 1):
        for b in range(a, cap + 1):
            if a * b <= cap:
                specs.append(("product", ("zmod", a), ("zmod", b)))
    for n in (2, 3, 4):
        if n * n <= cap:
            specs.append(("trivext", ("zmod", n), ("regular",)))
    if 2 * 2 * 2 * 2 <= cap:
        specs.append(
            ("trivext", ("zmod", 2), ("dsum", ("regular",), ("regular",)))
        )
    return specs


def _mset_specs(ring: FiniteRing, bounds: Bounds) -> list[Spec]:
    chosen: list[Spec] = []
    seen: set[tuple[int, ...]] = set()

    def admit(spec: Spec) -> None:
        try:
            mset = build_mset(ring, spec)
        except Exception:
            return
        if mset.members in seen or len(chosen) >= bounds.msets_per_ring:
            return
        seen.add(mset.members)
        chosen.append(spec)

    admit(("closure", (ring.one,)))
    admit(("units",))
    for a in ring.elements():
        if a in (ring.zero, ring.one):
            continue
        admit(("closure", (a,)))
    for p in spectrum(ring)[0]:
        admit(("complement_prime", p.members))
    return chosen


def _module_specs(ring: FiniteRing, bounds: Bounds, rng: random.Random, caps: Caps) -> list[Spec]:
    chosen: list[Spec] = []
    seen: set[tuple] = set()

    def admit(spec: Spec) -> bool:
        if len(chosen) >= bounds.modules_per_ring:
            return False
        try:
            module = build_module(ring, spec, caps)
            if module.size > bounds.max_module:
                return False
            all_submodules(module, caps)  # lattice must be computable
        except ResourceExceededError:
            return False
        sig = (module.size, module.add)
        if sig in seen:
            return False
        seen.add(sig)
        chosen.append(spec)
        return True

    admit(("regular",))
    ideals = [i for i in all_ideals(ring) if 1 < i.size < ring.size]
    for ideal in ideals[:2]:
        admit(("quot", ("regular",), ideal.members))
    for ideal in ideals[-2:]:
        admit(("asmod", ("regular",), ideal.members))
    admit(("dsum", ("regular",), ("regular",)))
    # one random chain: quotient of a direct sum by a random cyclic submodule
    if ring.size * ring.size <= bounds.max_module:
        x = rng.randrange(ring.size * ring.size)
        admit(("quot", ("dsum", ("regular",), ("regular",)), (x,)))
    return chosen


def _submodule_gens(module: FiniteModule, bounds: Bounds, rng: random.Random, caps: Caps) -> list[Optional[tuple[int, ...]]]:
    try:
        lattice = all_submodules(module, caps)
    except ResourceExceededError:
        return [None]
    if len(lattice) <= bounds.submodules_per_module:
        picks = list(lattice)
    else:
        picks = [lattice[0], lattice[-1]]
        middle = list(lattice[1:-1])
        rng.shuffle(middle)
        picks.extend(middle[: bounds.submodules_per_module - 2])
    return [sub.members for sub in picks]


def generate_corpus(
    seed: int, bounds: Bounds = Bounds(), caps: Caps = DEFAULT_CAPS
) -> list[Instance]:
    """Deterministic corpus: same (seed, bounds) gives a byte-identical list.

    The (Z/6, {1,4}) family is pinned at the front as the regression anchor.
    """
    bounds.check(caps)
    rng = random.Random(seed)
    profile = (bounds.max_ring, bounds.max_module)
    out: list[Instance] = []
    seen: set[str] = set()

    def emit(ring_spec: Spec, mset_spec: Spec, module_spec: Spec, gens) -> None:
        inst = Instance(ring_spec, mset_spec, module_spec, gens, seed, profile)
        key = inst.key()
        if key not in seen:
            seen.add(key)
            out.append(inst)

    # pinned anchors: the running example and its whole lattice
    if bounds.max_ring >= 6:
        for gens in ((0,), (3,), (2,), (1,)):
            emit(("zmod", 6), ("closure", (4,)), ("regular",), gens)

    for ring_spec in _ring_specs(bounds):
        try:
            ring = build_ring(ring_spec, caps)
        except ResourceExceededError:
            continue
        if ring.size > bounds.max_ring:
            continue
        mset_specs = _mset_specs(ring, bounds)
        module_specs = _module_specs(ring, bounds, rng, caps)
        for module_spec in module_specs:
            module = build_module(ring, module_spec, caps)
            gens_list = _submodule_gens(module, bounds, rng, caps)
            for mset_spec in mset_specs:
                for gens in gens_list:
                    emit(ring_spec, mset_spec, module_spec, gens)

    if bounds.max_instances and len(out) > bounds.max_instances:
        # stride-sample for variety but always keep the pinned anchors
        pinned = out[:4] if bounds.max_ring >= 6 else []
        rest = out[len(pinned):]
        budget = max(bounds.max_instances - len(pinned), 1)
        step = len(rest) / budget
        out = pinned + [rest[int(i * step)] for i in range(min(budget, len(rest)))]
    return out
