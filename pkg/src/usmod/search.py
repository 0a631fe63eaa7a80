"""Counterexample search with greedy shrinking.

Registered claims cover the converses the statements leave open (an
instance that is uniformly-S-essential but not essential is expected and
archived as an artifact) and violation hunts for every registered law
(expected to come back empty).  Shrinking never leaves the ring family:
a Z/n witness shrinks through the divisors of n, then through smaller
multiplicative sets, ambient modules and submodules, re-verifying the
claim after every step.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .caps import DEFAULT_CAPS, Caps
from .corpus import Bounds, BuiltInstance, Instance, build_instance, generate_corpus
from .errors import ConfigError, ResourceExceededError
from .essential import is_essential, is_u_S_essential_fast
from .laws import LAWS_BY_ID, VIOLATED
from .modules import all_submodules

CheckFn = Callable[[BuiltInstance, Caps], Optional[dict]]


@dataclass(frozen=True)
class Claim:
    claim_id: str
    description: str
    expect_witnesses: bool  # False for claims whose searches must come back empty
    fn: CheckFn


def _check_us_not_essential(b: BuiltInstance, caps: Caps) -> Optional[dict]:
    if b.submodule is None:
        return None
    try:
        us = is_u_S_essential_fast(b.submodule, b.module, b.mset)
        ess = is_essential(b.submodule, b.module, caps)
    except ResourceExceededError:
        return None
    if us.verdict and not ess.verdict:
        return {
            "submodule": list(b.submodule.members),
            "essential_counterexample_L": list(ess.counterexample_L.members),
        }
    return None


def _check_essential_not_us(b: BuiltInstance, caps: Caps) -> Optional[dict]:
    """Open search target: provably empty for finite multiplicative sets
    (some power of sigma is a nonzero idempotent in S, and idempotent
    witnesses force essential submodules to be uniformly essential), but the
    bounded confirmation runs anyway."""
    if b.submodule is None:
        return None
    try:
        ess = is_essential(b.submodule, b.module, caps)
        us = is_u_S_essential_fast(b.submodule, b.module, b.mset)
    except ResourceExceededError:
        return None
    if ess.verdict and not us.verdict:
        return {"submodule": list(b.submodule.members)}
    return None


def _law_violation_check(law_id: str) -> CheckFn:
    law = LAWS_BY_ID[law_id]

    def check(b: BuiltInstance, caps: Caps) -> Optional[dict]:
        if law.scope == "instance" and b.submodule is None:
            return None
        if b.module.size > law.max_module:
            return None
        try:
            verdict, witness, _ = law.fn(b, caps)
        except ResourceExceededError:
            return None
        if verdict == VIOLATED:
            return {"law_id": law_id, "law_witness": witness}
        return None

    return check


def claim_registry() -> dict[str, Claim]:
    claims = {
        "u-S-essential-not-essential": Claim(
            "u-S-essential-not-essential",
            "uniformly-S-essential submodule that is not essential",
            True,
            _check_us_not_essential,
        ),
        "essential-not-u-S-essential": Claim(
            "essential-not-u-S-essential",
            "essential submodule that is not uniformly-S-essential "
            "(provably empty for finite sets; bounded confirmation)",
            False,
            _check_essential_not_us,
        ),
    }
    # accepted spelling variant
    claims["essential-not-us-essential"] = claims["essential-not-u-S-essential"]
    for law_id in LAWS_BY_ID:
        cid = f"paper-law-{law_id}"
        claims[cid] = Claim(
            cid, f"violation hunt for law {law_id}", False, _law_violation_check(law_id)
        )
    return claims


CLAIMS = claim_registry()


# ---------------------------------------------------------------------------
# shrinking


def _size_key(b: BuiltInstance) -> tuple[int, int, int, int]:
    ksize = b.submodule.size if b.submodule else 0
    return (b.ring.size, b.module.size, b.mset.size, ksize)


def _variants(inst: Instance, b: BuiltInstance, caps: Caps) -> list[Instance]:
    """Candidate shrinks, strictly smaller in the size key, same ring family."""
    out: list[Instance] = []

    # smaller ring within the zmod family: divisors of n
    if inst.ring[0] == "zmod":
        n = inst.ring[1]
        for d in range(2, n):
            if n % d != 0:
                continue
            small = ("zmod", d)
            for mset_spec in _candidate_msets(d):
                out.append(
                    Instance(small, mset_spec, ("regular",), None, inst.seed, inst.size_profile)
                )

    # smaller multiplicative set: closures of single members
    if b.mset.size > 1:
        for g in b.mset.members:
            if g == b.ring.one:
                out.append(
                    Instance(inst.ring, ("closure", (b.ring.one,)), inst.module,
                             inst.submodule, inst.seed, inst.size_profile)
                )
            else:
                out.append(
                    Instance(inst.ring, ("closure", (g,)), inst.module,
                             inst.submodule, inst.seed, inst.size_profile)
                )

    # smaller ambient module: proper submodules containing K, re-indexed
    if b.submodule is not None:
        kset = set(b.submodule.members)
        try:
            lattice = all_submodules(b.module, caps)
        except ResourceExceededError:
            lattice = ()
        for n_sub in lattice:
            if n_sub.is_whole() or not kset <= set(n_sub.members):
                continue
            index_of = {x: i for i, x in enumerate(n_sub.members)}
            gens = tuple(sorted(index_of[x] for x in b.submodule.members))
            out.append(
                Instance(
                    inst.ring,
                    inst.mset,
                    ("asmod", inst.module, n_sub.members),
                    gens,
                    inst.seed,
                    inst.size_profile,
                )
            )

        # smaller witness submodule
        for k_sub in lattice:
            if set(k_sub.members) < kset:
                out.append(
                    Instance(inst.ring, inst.mset, inst.module, k_sub.members,
                             inst.seed, inst.size_profile)
                )
    return out


def _candidate_msets(n: int) -> list[tuple]:
    out: list[tuple] = [("closure", (1 % n,))]
    for g in range(2, n):
        out.append(("closure", (g,)))
    return out


def _expand_submodules(inst: Instance, caps: Caps) -> list[Instance]:
    """For ring-shrink candidates (emitted without a submodule), instantiate
    every lattice member of the module as a candidate witness."""
    if inst.submodule is not None:
        return [inst]
    try:
        built = build_instance(inst, caps)
        lattice = all_submodules(built.module, caps)
    except (ResourceExceededError, ConfigError, Exception):
        return []
    return [
        Instance(inst.ring, inst.mset, inst.module, sub.members, inst.seed, inst.size_profile)
        for sub in lattice
    ]


def shrink(
    inst: Instance, claim: Claim, caps: Caps = DEFAULT_CAPS
) -> tuple[Instance, dict]:
    """Greedy shrink: keep applying the first strictly smaller variant that
    still witnesses the claim, re-verifying after every step."""
    built = build_instance(inst, caps)
    payload = claim.fn(built, caps)
    assert payload is not None, "shrink called on a non-witness"
    current, current_built, current_payload = inst, built, payload
    improved = True
    while improved:
        improved = False
        base_key = _size_key(current_built)
        candidates: list[Instance] = []
        for cand in _variants(current, current_built, caps):
            candidates.extend(_expand_submodules(cand, caps))
        # deterministic order: smallest candidate first
        scored = []
        for cand in candidates:
            try:
                cb = build_instance(cand, caps)
            except Exception:
                continue
            key = _size_key(cb)
            if key < base_key:
                scored.append((key, cand.key(), cand, cb))
        scored.sort(key=lambda t: (t[0], t[1]))
        for _, _, cand, cb in scored:
            found = claim.fn(cb, caps)
            if found is not None:
                current, current_built, current_payload = cand, cb, found
                improved = True
                break
    return current, current_payload


# ---------------------------------------------------------------------------
# the search driver


@dataclass(frozen=True)
class SearchHit:
    claim_id: str
    instance: Instance
    payload: dict

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "instance": self.instance.to_json(),
            "payload": self.payload,
        }


def search_counterexamples(
    claim_id: str,
    bounds: Bounds = Bounds(max_ring=12),
    seed: int = 0,
    limit: int = 5,
    caps: Caps = DEFAULT_CAPS,
    time_budget: float = 120.0,
) -> list[SearchHit]:
    """Scan a seeded instance stream for claim witnesses, shrink each one,
    and return up to *limit* distinct minimized hits."""
    if claim_id not in CLAIMS:
        raise ConfigError(f"unknown claim {claim_id!r}")
    claim = CLAIMS[claim_id]
    hits: list[SearchHit] = []
    seen: set[str] = set()
    started = time.monotonic()
    for inst in generate_corpus(seed, bounds, caps):
        if time.monotonic() - started > time_budget:
            break
        if len(hits) >= limit:
            break
        try:
            built = build_instance(inst, caps)
        except ResourceExceededError:
            continue
        payload = claim.fn(built, caps)
        if payload is None:
            continue
        small, small_payload = shrink(inst, claim, caps)
        key = small.key()
        if key in seen:
            continue
        seen.add(key)
        hits.append(SearchHit(claim_id, small, small_payload))
    return hits


def search_counterexample(
    claim_id: str,
    bounds: Bounds = Bounds(max_ring=12),
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> Optional[SearchHit]:
    hits = search_counterexamples(claim_id, bounds, seed, limit=1, caps=caps)
    return hits[0] if hits else None


def replay_hit(hit_json: dict, caps: Caps = DEFAULT_CAPS) -> bool:
    """Re-verify a serialized search hit from its instance alone."""
    claim = CLAIMS[hit_json["claim_id"]]
    inst = Instance.from_json(hit_json["instance"])
    built = build_instance(inst, caps)
    return claim.fn(built, caps) is not None
