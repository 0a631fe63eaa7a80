"""Serialization and replay of negative verdicts.

Refutations and false essentiality verdicts are only trusted because they
replay: each payload is self-contained (instance recipe plus explicit member
lists or tables) and the replayers re-run the definitional checks from the
payload alone, sharing no state with the original run.
"""
from __future__ import annotations

from typing import Sequence

from .caps import DEFAULT_CAPS, Caps
from .corpus import Instance, build_instance
from .errors import ResourceExceededError
from .essential import is_essential, is_u_S_essential_fast, is_u_S_essential_oracle
from .injective import RefutedWitness, certify_u_S_injective
from .modules import (
    FiniteModule,
    Homomorphism,
    Submodule,
    check_homomorphism,
    check_module_axioms,
    hom_enumerate,
)


def serialize_module(module: FiniteModule) -> dict:
    return {
        "add": [list(row) for row in module.add],
        "act": [list(row) for row in module.act],
        "zero": module.zero,
        "label": module.label,
    }


def deserialize_module(ring, payload: dict) -> FiniteModule:
    module = FiniteModule(
        ring=ring,
        add=tuple(tuple(row) for row in payload["add"]),
        zero=payload["zero"],
        act=tuple(tuple(row) for row in payload["act"]),
        label=payload["label"],
        names=tuple(str(i) for i in range(len(payload["add"]))),
    )
    check_module_axioms(module)
    return module


# ---------------------------------------------------------------------------
# false essentiality verdicts


def collect_false_essential_witnesses(
    corpus: Sequence[Instance], caps: Caps = DEFAULT_CAPS, limit: int = 0
) -> list[dict]:
    """Every false verdict either decider produces on the corpus, as a
    self-contained payload."""
    out: list[dict] = []
    for inst in corpus:
        if inst.submodule is None:
            continue
        if limit and len(out) >= limit:
            break
        try:
            b = build_instance(inst, caps)
        except ResourceExceededError:
            continue
        k = b.submodule
        us = is_u_S_essential_oracle(k, b.module, b.mset, caps)
        if not us.verdict:
            out.append(
                {
                    "kind": "u-S-essential-false",
                    "instance": inst.to_json(),
                    "submodule": list(k.members),
                    "counterexample_L": list(us.counterexample_L.members),
                    "s1": us.witness_s_pair[0],
                }
            )
        fast = is_u_S_essential_fast(k, b.module, b.mset)
        if not fast.verdict:
            out.append(
                {
                    "kind": "u-S-essential-false",
                    "instance": inst.to_json(),
                    "submodule": list(k.members),
                    "counterexample_L": list(fast.counterexample_L.members),
                    "s1": fast.witness_s_pair[0],
                }
            )
        ess = is_essential(k, b.module, caps)
        if not ess.verdict:
            out.append(
                {
                    "kind": "essential-false",
                    "instance": inst.to_json(),
                    "submodule": list(k.members),
                    "counterexample_L": list(ess.counterexample_L.members),
                }
            )
    return out


def replay_essential_witness(payload: dict, caps: Caps = DEFAULT_CAPS) -> bool:
    """Re-check a false verdict from the payload alone."""
    inst = Instance.from_json(payload["instance"])
    b = build_instance(inst, caps)
    module = b.module
    kset = set(payload["submodule"])
    lset = set(payload["counterexample_L"])
    if not lset <= set(module.elements()):
        return False
    # the counterexample must be a genuine submodule
    sub = Submodule(module, tuple(sorted(lset)))
    from .modules import check_submodule

    try:
        check_submodule(sub)
    except Exception:
        return False
    meet = kset & lset
    if payload["kind"] == "essential-false":
        return meet == {module.zero} and lset != {module.zero}
    s1 = payload["s1"]
    if s1 not in set(b.mset.members):
        return False
    meet_killed = all(module.act[s1][x] == module.zero for x in meet)
    l_unkilled = all(
        any(module.act[s][x] != module.zero for x in lset) for s in b.mset.members
    )
    return meet_killed and l_unkilled


# ---------------------------------------------------------------------------
# refuted injectivity reports


def collect_refuted_reports(
    corpus: Sequence[Instance],
    caps: Caps = DEFAULT_CAPS,
    limit: int = 0,
    max_module: int = 12,
) -> list[dict]:
    """Run the certification pipeline over the corpus modules and serialize
    every refutation the bounded test produces."""
    out: list[dict] = []
    seen: set[tuple] = set()
    for inst in corpus:
        key = (inst.ring, inst.mset, inst.module)
        if key in seen:
            continue
        seen.add(key)
        if limit and len(out) >= limit:
            break
        try:
            b = build_instance(inst, caps)
        except ResourceExceededError:
            continue
        if b.module.size > max_module:
            continue
        try:
            report = certify_u_S_injective(b.module, b.mset, caps)
        except ResourceExceededError:
            continue
        if report.verdict != "refuted":
            continue
        witness: RefutedWitness = report.witness
        out.append(
            {
                "kind": "u-S-injectivity-refuted",
                "instance": inst.to_json(),
                "f": {
                    "source": serialize_module(witness.f.source),
                    "target": serialize_module(witness.f.target),
                    "map": list(witness.f.map),
                },
                "failures": [[s, list(h.map)] for s, h in witness.failures],
            }
        )
    return out


def replay_refuted_payload(payload: dict, caps: Caps = DEFAULT_CAPS) -> bool:
    """Re-verify a refutation from the payload alone: for every member s of
    the set, the recorded h: A -> E admits no g: B -> E with s.h = g.f
    (exhaustive g-scan on freshly rebuilt modules)."""
    inst = Instance.from_json(payload["instance"])
    b = build_instance(inst, caps)
    module = b.module
    mset = b.mset
    source = deserialize_module(b.ring, payload["f"]["source"])
    target = deserialize_module(b.ring, payload["f"]["target"])
    f = Homomorphism(source, target, tuple(payload["f"]["map"]))
    check_homomorphism(f)
    failures = {s: tuple(hmap) for s, hmap in payload["failures"]}
    if set(failures) != set(mset.members):
        return False
    try:
        target_homs = hom_enumerate(target, module, caps=caps)
    except ResourceExceededError:
        return False
    composed = {tuple(g.map[y] for y in f.map) for g in target_homs}
    for s, hmap in failures.items():
        h = Homomorphism(source, module, hmap)
        check_homomorphism(h)
        sh = tuple(module.act[s][v] for v in hmap)
        if sh in composed:
            return False
    return True
