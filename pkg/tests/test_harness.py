import json
import subprocess
import sys

import pytest

from usmod.caps import Caps
from usmod.corpus import Bounds, Instance, build_instance, generate_corpus
from usmod.errors import ConfigError
from usmod.laws import LAWS_BY_ID, REGISTRY, run_laws, replay_result, tally
from usmod.report import render_report
from usmod.search import replay_hit, search_counterexamples
from usmod.witnesses import (
    collect_false_essential_witnesses,
    collect_refuted_reports,
    replay_essential_witness,
    replay_refuted_payload,
)


SMALL = Bounds(max_ring=8, max_instances=80)


@pytest.fixture(scope="module")
def small_corpus():
    return generate_corpus(7, SMALL)


@pytest.fixture(scope="module")
def small_results(small_corpus):
    return run_laws(small_corpus)


def test_corpus_determinism():
    a = generate_corpus(42, SMALL)
    b = generate_corpus(42, SMALL)
    assert [i.key() for i in a] == [i.key() for i in b]
    c = generate_corpus(43, SMALL)
    assert [i.key() for i in a] != [i.key() for i in c]


def test_corpus_pins_running_example(small_corpus):
    first = small_corpus[0]
    assert first.ring == ("zmod", 6)
    assert first.mset == ("closure", (4,))
    keys = {(i.ring, i.mset, i.module, i.submodule) for i in small_corpus}
    assert (("zmod", 6), ("closure", (4,)), ("regular",), (2,)) in keys


def test_corpus_respects_bounds():
    corpus = generate_corpus(1, Bounds(max_ring=2, max_instances=20))
    for inst in corpus:
        built = build_instance(inst)
        assert built.ring.size == 2


def test_bounds_validated():
    with pytest.raises(ConfigError):
        generate_corpus(1, Bounds(max_ring=100), Caps(max_ring=64))


def test_instance_roundtrip(small_corpus):
    for inst in small_corpus[:20]:
        again = Instance.from_json(json.loads(json.dumps(inst.to_json())))
        assert again == inst
        built = build_instance(again)
        assert built.module.size >= 1


def test_registry_covers_expected_laws():
    expected = {
        "sigma-shortcut",
        "torsion-submodule-uniform",
        "uniform-noetherian",
        "definition-via-torsion",
        "element-criterion",
        "essential-element-criterion",
        "regular-set-degeneration",
        "torsion-ambient-essential",
        "max-ideal-upgrade",
        "prime-upgrade",
        "prime-spectrum-equivalence",
        "transitivity-meet",
        "transport",
        "direct-sum-pair",
        "direct-sum-many",
        "complement",
        "inclusion-characterization",
        "essential-mono-characterization",
        "mono-composition",
        "twisted-transfer",
        "envelope-essential-image",
        "preenvelope-characterization",
        "envelope-uniqueness",
        "preenvelope-summand",
        "envelope-three-way",
        "envelope-properties",
        "envelope-direct-sum",
        "prime-classical-envelope-sum",
        "uniform-extension-bounded",
        "running-example",
        "running-example-envelope",
    }
    assert expected <= set(LAWS_BY_ID)


def test_no_law_violated_on_small_corpus(small_results):
    t = tally(small_results)
    violated = {k: v for k, v in t.items() if v["violated"]}
    assert violated == {}
    # every law produced at least one non-skip verdict somewhere
    assert all(t[law.law_id]["holds"] > 0 for law in REGISTRY), t


def test_law_filter(small_corpus):
    res = run_laws(small_corpus, ["element-criterion"])
    assert res and all(r.law_id == "element-criterion" for r in res)


def test_results_replay(small_results):
    # holds-verdicts replay identically from the serialized instance
    sample = [r for r in small_results if r.verdict == "holds"][:25]
    for r in sample:
        assert replay_result(r.to_json()) == "holds"


def test_search_finds_running_example_fast():
    hits = search_counterexamples(
        "u-S-essential-not-essential", Bounds(max_ring=12), seed=0, limit=5
    )
    assert len(hits) >= 5
    keys = {h.instance.key() for h in hits}
    assert len(keys) == len(hits)
    for h in hits:
        built = build_instance(h.instance)
        assert built.ring.size <= 12
        assert replay_hit(json.loads(json.dumps(h.to_json())))


def test_search_shrinks_within_family():
    hits = search_counterexamples(
        "u-S-essential-not-essential", Bounds(max_ring=12), seed=0, limit=5
    )
    for h in hits:
        assert h.instance.ring[0] == "zmod"


def test_impossible_claim_returns_empty():
    hits = search_counterexamples(
        "essential-not-u-S-essential",
        Bounds(max_ring=8, max_instances=120),
        seed=0,
        limit=1,
        time_budget=60,
    )
    assert hits == []


def test_law_violation_hunts_empty():
    for law_id in ("element-criterion", "complement", "transitivity-meet"):
        hits = search_counterexamples(
            f"paper-law-{law_id}",
            Bounds(max_ring=8, max_instances=60),
            seed=0,
            limit=1,
            time_budget=60,
        )
        assert hits == [], law_id


def test_unknown_claim():
    with pytest.raises(ConfigError):
        search_counterexamples("no-such-claim")


def test_false_essential_witnesses_replay(small_corpus):
    payloads = collect_false_essential_witnesses(small_corpus[:40])
    assert payloads, "corpus should contain some false verdicts"
    for p in payloads:
        assert replay_essential_witness(json.loads(json.dumps(p)))


def test_refuted_reports_replay():
    corpus = generate_corpus(5, Bounds(max_ring=9, max_instances=150))
    payloads = collect_refuted_reports(corpus, limit=4)
    assert payloads, "expected at least one refutation in the corpus"
    for p in payloads:
        assert replay_refuted_payload(json.loads(json.dumps(p)))


def test_report_formats(small_results):
    js = render_report(small_results, "json", seed=7, caps=Caps())
    payload = json.loads(js)
    assert payload["tool"] == "usmod" and payload["seed"] == 7
    assert all(law["violated"] == 0 for law in payload["laws"])

    xml = render_report(small_results, "junit-xml")
    assert xml.startswith("<?xml") and "<testsuite " in xml

    md = render_report(small_results, "markdown-summary")
    assert "| law |" in md and "Total violated: 0" in md


def test_report_determinism(small_corpus):
    r1 = run_laws(small_corpus, ["element-criterion", "complement"])
    r2 = run_laws(small_corpus, ["element-criterion", "complement"])
    js1 = json.loads(render_report(r1, "json", seed=7))
    js2 = json.loads(render_report(r2, "json", seed=7))
    assert js1 == js2


def test_cli_smoke(tmp_path):
    program = tmp_path / "ex.usm"
    program.write_text(
        "ring R = zmod 6\n"
        "mset S over R = closure {4}\n"
        "module M over R = regular\n"
        "sub K of M = gens {2}\n"
        "assert u_s_essential(K, S)\n"
        "assert essential(K) == false\n"
    )
    proc = subprocess.run(
        [sys.executable, "-m", "usmod.cli", "check", str(program)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "2/2 assertions passed" in proc.stdout

    proc = subprocess.run(
        [
            sys.executable, "-m", "usmod.cli", "laws",
            "--max-ring", "6", "--max-instances", "25",
            "--report", str(tmp_path / "report.json"), "--format", "json",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["violations"] == []

    proc = subprocess.run(
        [
            sys.executable, "-m", "usmod.cli", "search",
            "--claim", "u-S-essential-not-essential", "--count", "2",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    lines = [l for l in proc.stdout.splitlines() if l.strip()]
    assert len(lines) == 2


def test_cli_caps_env(tmp_path):
    program = tmp_path / "ex.usm"
    program.write_text("ring R = zmod 6\nmodule M over R = regular\n")
    proc = subprocess.run(
        [sys.executable, "-m", "usmod.cli", "check", str(program)],
        capture_output=True,
        text=True,
        env={"USMOD_CAPS": "ring=4", "PATH": "/usr/bin:/bin"},
    )
    # Z/6 exceeds the overridden cap... ring construction itself has no cap,
    # but product/extension paths do; a plain zmod parse still succeeds.
    assert proc.returncode == 0

    proc = subprocess.run(
        [sys.executable, "-m", "usmod.cli", "laws", "--max-ring", "12"],
        capture_output=True,
        text=True,
        env={"USMOD_CAPS": "ring=bogus", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 2
    assert "config-error" in proc.stderr
