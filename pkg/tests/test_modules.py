import itertools
import random

import pytest

from usmod.errors import DomainError, ResourceExceededError
from usmod.caps import Caps
from usmod.modules import (
    all_submodules,
    annihilator,
    check_homomorphism,
    check_module_axioms,
    compose,
    cyclic_submodule,
    direct_sum,
    generating_set,
    hom_enumerate,
    identity_hom,
    image,
    image_of_submodule,
    intersect_submodules,
    is_prime_module,
    kernel,
    make_hom,
    preimage,
    quotient_module,
    regular_module,
    scalar_hom,
    span,
    submodule,
    submodule_as_module,
    sum_submodules,
    zero_divisors_on,
    zero_hom,
    zero_module,
)
from usmod.rings import make_product, make_zmod


@pytest.fixture(scope="module")
def z6():
    return make_zmod(6)


@pytest.fixture(scope="module")
def m6(z6):
    return regular_module(z6)


def brute_force_submodules(module):
    """Literal scan of all subsets closed under addition and action.

    Exponential; only usable for |M| <= 16."""
    n = module.size
    others = [x for x in module.elements() if x != module.zero]
    found = []
    for mask in itertools.chain.from_iterable(
        itertools.combinations(others, k) for k in range(len(others) + 1)
    ):
        mem = set(mask) | {module.zero}
        closed = all(module.add[x][y] in mem for x in mem for y in mem) and all(
            module.act[r][x] in mem for x in mem for r in module.ring.elements()
        )
        if closed:
            found.append(tuple(sorted(mem)))
    return sorted(found, key=lambda t: (len(t), t))


def closure_enumerate_submodules(module):
    """Independent route: enumerate the closed sets of the span operator by
    breadth-first closure over single-element extensions."""
    start = span(module, [])
    found = {start}
    queue = [start]
    while queue:
        current = queue.pop()
        cur_set = set(current)
        for x in module.elements():
            if x in cur_set:
                continue
            nxt = span(module, current + (x,))
            if nxt not in found:
                found.add(nxt)
                queue.append(nxt)
    return sorted(found, key=lambda t: (len(t), t))


def test_regular_module_submodules_are_ideals(m6):
    subs = [s.members for s in all_submodules(m6)]
    assert subs == [(0,), (0, 3), (0, 2, 4), (0, 1, 2, 3, 4, 5)]


def test_regular_module_of_field_is_simple():
    m = regular_module(make_zmod(5))
    assert len(all_submodules(m)) == 2


def test_regular_module_z4():
    m = regular_module(make_zmod(4))
    assert len(all_submodules(m)) == 3


def test_cyclic_submodule_examples(m6):
    assert cyclic_submodule(m6, 2).members == (0, 2, 4)
    assert cyclic_submodule(m6, 0).members == (0,)
    assert cyclic_submodule(m6, 3).members == (0, 3)


def test_sum_intersect_examples(m6):
    k = submodule(m6, [0, 2, 4])
    l = submodule(m6, [0, 3])
    assert intersect_submodules(k, l).members == (0,)
    assert sum_submodules(k, submodule(m6, [0])).members == k.members
    assert sum_submodules(k, l).members == tuple(range(6))


def test_modular_law_samples(m6):
    subs = all_submodules(m6)
    for a in subs:
        for b in subs:
            for c in subs:
                if set(a.members) <= set(c.members):
                    left = intersect_submodules(c, sum_submodules(a, b))
                    right = sum_submodules(a, intersect_submodules(c, b))
                    assert left.members == right.members


def test_parent_mismatch_raises(m6):
    other = regular_module(make_zmod(4))
    with pytest.raises(DomainError):
        sum_submodules(submodule(m6, [0]), submodule(other, [0]))


def test_lattice_matches_brute_force_small():
    # literal subset scan on modules with at most 16 elements
    cases = [
        regular_module(make_zmod(6)),
        regular_module(make_zmod(8)),
        regular_module(make_zmod(12)),
        regular_module(make_product(make_zmod(2), make_zmod(2))),
        direct_sum(regular_module(make_zmod(2)), regular_module(make_zmod(2)))[0],
        direct_sum(regular_module(make_zmod(4)), regular_module(make_zmod(4)))[0],
    ]
    for m in cases:
        assert [s.members for s in all_submodules(m)] == brute_force_submodules(m)


def test_lattice_matches_closure_enumeration_medium():
    # closed-set enumeration on modules up to 24 elements
    m6 = regular_module(make_zmod(6))
    k6, _ = submodule_as_module(submodule(m6, [0, 2, 4]))
    m12 = regular_module(make_zmod(12))
    k12, _ = submodule_as_module(submodule(m12, [0, 6]))
    cases = [
        regular_module(make_zmod(24)),
        direct_sum(m6, k6)[0],
        direct_sum(m12, k12)[0],
    ]
    for m in cases:
        assert [s.members for s in all_submodules(m)] == closure_enumerate_submodules(m)


def test_z2_square_has_five_submodules():
    m, *_ = direct_sum(regular_module(make_zmod(2)), regular_module(make_zmod(2)))
    assert len(all_submodules(m)) == 5


def test_lattice_cap():
    m = regular_module(make_zmod(6))
    with pytest.raises(ResourceExceededError):
        all_submodules(m, Caps(max_module=4))


def test_quotient_module_examples(m6):
    q, eta = quotient_module(m6, submodule(m6, [0, 3]))
    assert q.size == 3
    assert eta.map[1] == eta.map[4]
    check_homomorphism(eta)

    q0, eta0 = quotient_module(m6, submodule(m6, [0]))
    assert q0.size == 6

    q2, _ = quotient_module(m6, submodule(m6, [0, 2, 4]))
    assert q2.size == 2


def test_direct_sum_projection_identities(m6):
    d, i1, i2, p1, p2 = direct_sum(m6, m6)
    assert d.size == 36
    assert compose(p1, i1).map == identity_hom(m6).map
    assert compose(p2, i2).map == identity_hom(m6).map
    # i1 p1 + i2 p2 = identity
    from usmod.modules import add_homs

    total = add_homs(compose(i1, p1), compose(i2, p2))
    assert total.map == identity_hom(d).map
    for h in (i1, i2, p1, p2):
        check_homomorphism(h)


def test_hom_enumerate_cyclic_source(m6):
    homs = hom_enumerate(m6, m6)
    assert len(homs) == 6  # x -> r x
    maps = {h.map for h in homs}
    assert identity_hom(m6).map in maps
    for r in range(6):
        assert scalar_hom(m6, r).map in maps


def test_hom_enumerate_zero_target(m6):
    z = zero_module(m6.ring)
    assert len(hom_enumerate(m6, z)) == 1


def test_hom_enumerate_coprime_orders(m6):
    k, _ = submodule_as_module(submodule(m6, [0, 2, 4]))
    l, _ = submodule_as_module(submodule(m6, [0, 3]))
    homs = hom_enumerate(k, l)
    assert len(homs) == 1 and homs[0].map == zero_hom(k, l).map


def test_hom_enumerate_cap():
    m, *_ = direct_sum(regular_module(make_zmod(6)), regular_module(make_zmod(6)))
    with pytest.raises(ResourceExceededError):
        hom_enumerate(m, m, cap=10)


def test_hom_enumeration_complete_against_brute_force():
    # every enumerated map is linear, and brute-force map search agrees on a
    # small instance: Z/4 -> Z/4 over Z/4 has exactly 4 maps
    m = regular_module(make_zmod(4))
    homs = hom_enumerate(m, m)
    for h in homs:
        check_homomorphism(h)
    brute = 0
    for images in itertools.product(range(4), repeat=4):
        try:
            check_homomorphism(make_hom(m, m, images, check=False) or make_hom(m, m, images))
            brute += 1
        except DomainError:
            continue
    assert len(homs) == brute == 4


def test_kernel_image_preimage(m6):
    _, eta = quotient_module(m6, submodule(m6, [0, 3]))
    assert kernel(eta).members == (0, 3)
    f2 = scalar_hom(m6, 2)
    assert image(f2).members == (0, 2, 4)
    assert preimage(f2, submodule(m6, [0, 3])).members == (0, 3)


def test_first_isomorphism_counts(m6):
    for f in hom_enumerate(m6, m6):
        assert image(f).size * kernel(f).size == m6.size


def test_preimage_image_adjunction(m6):
    rng = random.Random(7)
    subs = all_submodules(m6)
    homs = hom_enumerate(m6, m6)
    for _ in range(30):
        f = rng.choice(homs)
        q = rng.choice(subs)
        k = rng.choice(subs)
        assert set(image_of_submodule(f, preimage(f, q)).members) <= set(q.members)
        assert set(k.members) <= set(preimage(f, image_of_submodule(f, k)).members)


def test_annihilator_examples(m6, z6):
    assert annihilator(z6, submodule(m6, [0, 3])).members == (0, 2, 4)
    assert annihilator(z6, submodule(m6, [0, 2, 4])).members == (0, 3)
    assert annihilator(z6, submodule(m6, [0])).members == tuple(range(6))


def test_is_prime_module(z6, m6):
    k, _ = submodule_as_module(submodule(m6, [0, 2, 4]))
    assert is_prime_module(k)
    assert not is_prime_module(m6)
    v, *_ = direct_sum(regular_module(make_zmod(2)), regular_module(make_zmod(2)))
    assert is_prime_module(v)
    with pytest.raises(DomainError):
        is_prime_module(zero_module(z6))


def test_prime_module_cyclic_reduction_matches_lattice():
    # the cyclic-only decision agrees with the full-lattice definition
    m4 = regular_module(make_zmod(4))
    k4, _ = submodule_as_module(submodule(m4, [0, 2]))
    mods = [
        regular_module(make_zmod(6)),
        m4,
        regular_module(make_zmod(9)),
        direct_sum(regular_module(make_zmod(2)), regular_module(make_zmod(2)))[0],
        direct_sum(m4, k4)[0],
    ]
    for m in mods:
        ann_m = annihilator(m.ring, m).members
        full = all(
            annihilator(m.ring, sub).members == ann_m
            for sub in all_submodules(m)
            if not sub.is_zero()
        )
        assert is_prime_module(m) == full


def test_zero_divisors_examples(z6, m6):
    assert zero_divisors_on(z6, m6) == (0, 2, 3, 4)
    assert zero_divisors_on(z6, zero_module(z6)) == ()
    z4 = make_zmod(4)
    assert zero_divisors_on(z4, regular_module(z4)) == (0, 2)


def test_generating_set_irredundant(m6):
    gens = generating_set(m6)
    assert gens == (1,)
    d, *_ = direct_sum(m6, m6)
    gd = generating_set(d)
    assert len(gd) == 2
    assert span(d, gd) == tuple(d.elements())


def test_submodule_as_module_roundtrip(m6):
    k = submodule(m6, [0, 2, 4])
    kmod, incl = submodule_as_module(k)
    check_module_axioms(kmod)
    check_homomorphism(incl)
    assert image(incl).members == k.members


def test_module_axioms_of_constructions(z6, m6):
    check_module_axioms(m6)
    q, _ = quotient_module(m6, submodule(m6, [0, 3]))
    check_module_axioms(q)
    d, *_ = direct_sum(m6, m6)
    check_module_axioms(d)
    check_module_axioms(zero_module(z6))
