import pytest

from usmod.dsl import evaluate_assertions, parse_program
from usmod.errors import ConfigError

RUNNING_EXAMPLE = """
# running example over Z/6
ring R = zmod 6
mset S over R = closure {4}
module M over R = regular
sub K of M = gens {2}
sub L of M = gens {3}
assert u_s_essential(K, S)
assert essential(K) == false
assert u_s_torsion(L, S) == true
assert u_s_torsion(K, S) == false
"""


def test_parse_and_evaluate_running_example():
    env = parse_program(RUNNING_EXAMPLE)
    assert env.rings["R"].size == 6
    assert env.msets["S"].members == (1, 4)
    assert env.subs["K"].members == (0, 2, 4)
    results = evaluate_assertions(env)
    assert all(r.ok for r in results)
    torsion = [r for r in results if r.law == "u_s_torsion"][0]
    assert torsion.witness_s == "4"


def test_contract_statement_forms():
    # every statement form of the external interface parses as documented
    env = parse_program(
        """
ring R = zmod 6
ring R2 = zmod 6
ring T = product R R2
module M over R = regular
ring E = trivext R M
mset S over R = closure {4}
mset S2 over R = complement_prime {0,3}
module D = dsum M M
sub K of M = gens {2}
module Q = quot M K
hom f : M -> M = images {1: 3}
"""
    )
    assert env.rings["T"].size == 36
    assert env.rings["E"].size == 36
    assert env.msets["S2"].members == (1, 2, 4, 5)
    assert env.modules["Q"].size == 2
    assert env.homs["f"].map == (0, 3, 0, 3, 0, 3)


def test_parse_composite_rings():
    env = parse_program(
        """
ring A = zmod 2
ring B = zmod 3
ring P = product A B
module MA over A = regular
ring T = trivext A MA
"""
    )
    assert env.rings["P"].size == 6
    assert env.rings["T"].size == 4


def test_module_expressions():
    env = parse_program(
        """
ring R = zmod 6
module M over R = regular
module D = dsum M M
sub K of M = gens {3}
module Q = quot M K
module W = asmod K
"""
    )
    assert env.modules["D"].size == 36
    assert env.modules["Q"].size == 3
    assert env.modules["W"].size == 2


def test_hom_from_images():
    env = parse_program(
        """
ring R = zmod 6
module M over R = regular
sub K of M = gens {2}
module KM = asmod K
hom i : KM -> M = images {1: 2}
hom d : M -> M = images {1: 2}
assert u_s_mono(i, S) == true
mset S over R = closure {4}
"""
    )
    assert env.homs["i"].map == (0, 2, 4)
    assert env.homs["d"].map == (0, 2, 4, 0, 2, 4)


def test_hom_images_must_determine_map():
    with pytest.raises(ConfigError, match="determine"):
        parse_program(
            """
ring R = zmod 6
module M over R = regular
hom f : M -> M = images {2: 2}
"""
        )


def test_hom_images_must_be_linear():
    with pytest.raises(ConfigError, match="linear"):
        parse_program(
            """
ring R = zmod 6
module M over R = regular
hom f : M -> M = images {1: 3, 2: 2}
"""
        )


def test_parse_errors():
    with pytest.raises(ConfigError, match="line 1"):
        parse_program("frobnicate Q = zmod 6")
    with pytest.raises(ConfigError, match="unknown ring"):
        parse_program("mset S over R = closure {1}")
    with pytest.raises(ConfigError, match="bad set literal"):
        parse_program("ring R = zmod 6\nmodule M over R = regular\nsub K of M = gens {x}")


def test_assert_failure_reported_not_raised():
    env = parse_program(
        """
ring R = zmod 6
mset S over R = closure {4}
module M over R = regular
sub K of M = gens {2}
assert essential(K)
"""
    )
    results = evaluate_assertions(env)
    assert len(results) == 1
    assert results[0].verdict is False and not results[0].ok


def test_assert_envelope_roundtrip():
    env = parse_program(
        """
ring R = zmod 6
mset S over R = closure {4}
module M over R = regular
sub K of M = gens {2}
module KM = asmod K
hom i : KM -> M = images {1: 2}
assert u_s_preenvelope(i, S)
assert u_s_envelope(i, S)
assert u_s_injective(M, S)
assert u_s_iso_exists(KM, M, S)
"""
    )
    results = evaluate_assertions(env)
    assert all(r.ok for r in results), [r.to_json() for r in results]


def test_assert_json_fields():
    env = parse_program(
        """
ring R = zmod 6
mset S over R = closure {4}
module M over R = regular
sub L of M = gens {3}
assert u_s_torsion(L, S)
"""
    )
    payload = evaluate_assertions(env)[0].to_json()
    assert set(payload) >= {"verdict", "witness_s", "enumeration_complete", "law"}
    assert payload["verdict"] is True and payload["witness_s"] == "4"
