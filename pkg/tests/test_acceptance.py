"""Acceptance suite: one test per criterion, summarised at the end of the run.

Run on its own with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import json
import random
import time

import numpy as np
import pytest

import oracles
from corpus import CORPUS
from moufang.cli import main
from moufang.constructions import E1, E2, E3, build
from moufang.errors import NotNilpotent
from moufang.loop import check_identity2, check_identity3, is_associative, is_cml, quotient, whole
from moufang.multgroup import (
    inner_mapping_group,
    inner_mappings_are_automorphisms_check,
    multiplication_group,
)
from moufang.perm import (
    Permutation,
    PermutationGroup,
    center,
    centralizer_in,
    check_identity1,
    is_p_group,
    nilpotency_class_group,
    quotient_is_p_group_check,
)
from moufang.structure import (
    associator_hom_check,
    bruck_slaby_check,
    centralizer,
    loop_center,
    maximal_subloops,
    min_generators_certificate,
    nilpotency_class_loop,
    omega_report,
    order3_normal_central_check,
    remak_check,
    special_rank,
)

TOTAL_BUDGET_S = 300.0
_CLOCK = {}

criterion = pytest.mark.criterion


@pytest.fixture(scope="module", autouse=True)
def _module_clock():
    _CLOCK["start"] = time.perf_counter()
    yield


FIXTURES = [
    "cyclic(2)",
    "cyclic(3)",
    "cyclic(9)",
    "elementary_abelian_3(2)",
    "elementary_abelian_3(3)",
    "product(cyclic(3),cyclic(9))",
    "cml81",
    "product(cml81,cyclic(3))",
]


@criterion(1, "cml81 certified: CML, non-associative with witness, exponent 3, order 81, < 2 s")
def test_criterion_01_fixture_certification():
    t0 = time.perf_counter()
    L = build("cml81", certify=False)
    cml = is_cml(L)
    assoc = is_associative(L)
    exponent = L.exponent()
    elapsed = time.perf_counter() - t0
    assert cml.passed and cml.mode == "exhaustive" and cml.count == 81**3
    assert assoc.failed
    a, b, c = assoc.counterexample
    assert L.mul(L.mul(a, b), c) != L.mul(a, L.mul(b, c))
    assert exponent == 3 and L.order == 81
    assert elapsed < 2.0, f"{elapsed:.2f} s"


@criterion(2, "Bruck-Slaby on cml81: exhaustive over <= 3 generators, class 2 attained, < 60 s")
def test_criterion_02_bruck_slaby():
    L = build("cml81")
    t0 = time.perf_counter()
    rep = bruck_slaby_check(L, 3)
    elapsed = time.perf_counter() - t0
    assert rep.passed and rep.mode == "exhaustive"
    assert rep.count == 81 + 81 * 80 // 2 + 81 * 80 * 79 // 6
    assert rep.details["max_class_by_size"][3] == 2
    assert nilpotency_class_loop(L) == 2
    assert elapsed < 60.0, f"{elapsed:.1f} s"


@criterion(3, "identities (3) and (2) exhaustive on cml81; (1) exhaustive on S4 and on 1e6 samples of M(cml81)")
def test_criterion_03_identities():
    L = build("cml81")
    rep3 = check_identity3(L)
    assert rep3.passed and rep3.mode == "exhaustive" and rep3.count == 81**3
    rep2 = check_identity2(L)
    assert rep2.passed and rep2.mode == "exhaustive" and rep2.count == 81**4
    s4 = PermutationGroup([Permutation.from_cycles(4, (0, 1, 2, 3)), Permutation.from_cycles(4, (0, 1))])
    assert s4.order() == 24
    rep1 = check_identity1(s4)
    assert rep1.passed and rep1.mode == "exhaustive" and rep1.count == 24**4
    M = multiplication_group(L)
    rep1s = check_identity1(M, samples=10**6, seed=42)
    assert rep1s.passed and rep1s.mode == "sampled" and rep1s.count == 10**6 and rep1s.seed == 42


@criterion(4, "L/Z(L) has exponent 3 and order 27 for cml81; exponent 3 for the order-243 product")
def test_criterion_04_center_quotient():
    L = build("cml81")
    Q, _ = quotient(L, loop_center(L))
    assert Q.order == 27 and Q.exponent() == 3
    P = build("product(cml81,cyclic(3))")
    QP, _ = quotient(P, loop_center(P))
    assert QP.exponent() == 3


@criterion(5, "M(cml81): transitive of degree 81, |M| = 81|I|, nilpotent, nontrivial centre, M/C a 3-group, 3-power order")
def test_criterion_05_multiplication_group():
    L = build("cml81")
    M = multiplication_group(L)
    I = inner_mapping_group(L)
    assert M.degree == 81 and M.is_transitive()
    assert M.order() == 81 * I.order()
    assert nilpotency_class_group(M) >= 1
    C = center(M)
    assert C.order() > 1
    assert quotient_is_p_group_check(M, C, 3).passed
    assert is_p_group(M, 3)


@criterion(6, "associator map x -> (x,e1,e2) is a homomorphism with kernel Z_L({e1,e2}); Remak identities on {e1,e2,e3}")
def test_criterion_06_lemma3_machinery():
    L = build("cml81")
    rep = associator_hom_check(L, E1, E2)
    assert rep.passed
    kernel = {x for x in range(81) if L.associator(x, E1, E2) == L.identity}
    assert kernel == set(centralizer(L, None, [E1, E2]).members)
    remak = remak_check(L, [E1, E2, E3])
    assert remak.passed
    assert remak.details["centralizer_order"] == centralizer(L, None, [E1, E2, E3]).order


@criterion(7, "every CML fixture of order > 1 has a nontrivial centre; Z(cml81) has order 3")
def test_criterion_07_nontrivial_center():
    for spec in FIXTURES:
        L = build(spec)
        assert L.order > 1 and loop_center(L).order > 1, spec
    assert loop_center(build("cml81")).order == 3


@criterion(8, "maximal subloops of cml81 normal of index 3; inner-mapping generators are automorphisms; order-3 normal elements central")
def test_criterion_08_lemma4_facts():
    L = build("cml81")
    maximal = maximal_subloops(L)
    assert maximal
    assert all(L.order // s.order == 3 for s in maximal)
    T = L.table.tolist()
    assert all(oracles.is_normal_subloop(T, s.members) for s in maximal)
    assert inner_mappings_are_automorphisms_check(L).passed
    assert order3_normal_central_check(L).passed


@criterion(9, "special rank of cml81 is 3 with a two-sided certificate; omega report d = 3 with all conditions; rank(Z3^k) = k")
def test_criterion_09_rank():
    L = build("cml81")
    rep = special_rank(L)
    assert rep.special_rank == 3
    cert = min_generators_certificate(L, rep.witness_subloop, rep.witness_min_generators, rep.witness_generators)
    assert cert.passed
    whole_cert = min_generators_certificate(L, whole(L), 3, omega_report(L).generators)
    assert whole_cert.passed
    omega = omega_report(L)
    assert omega.min_generators == 3
    assert len(omega.conditions) == 5 and all(omega.conditions.values())
    for k in range(1, 5):
        assert special_rank(build(f"elementary_abelian_3({k})")).special_rank == k


@criterion(10, "permutation-group kernel agrees exactly with brute-force oracles on a corpus of >= 10 groups")
def test_criterion_10_group_oracles():
    assert len(CORPUS) >= 10
    rng = random.Random(10)
    for case in CORPUS:
        G = PermutationGroup([Permutation(g) for g in case.gens], degree=case.degree)
        assert G.order() <= 10**4
        assert G.order() == len(case.elements), case
        pts = list(range(case.degree))
        probes = [tuple(rng.sample(pts, len(pts))) for _ in range(50)] + list(case.elements)[:50]
        for p in probes:
            assert G.member(Permutation(p)) == (p in case.elements), case
        assert {g.images for g in center(G).elements()} == case.center, case
        S = [Permutation(p) for p in case.probe]
        got = {g.images for g in centralizer_in(G, S).elements()}
        assert got == oracles.group_centralizer(case.elements, case.probe), case
        if case.nilpotency_class is None:
            with pytest.raises(NotNilpotent):
                nilpotency_class_group(G)
        else:
            assert nilpotency_class_group(G) == case.nilpotency_class, case


def _strip_timing(text):
    out = []
    for line in text.splitlines():
        rec = json.loads(line)
        rec.pop("timing_ms", None)
        out.append(json.dumps(rec))
    return "\n".join(out)


@criterion(11, "verify twice with the same seed gives byte-identical JSON (timing excluded)")
def test_criterion_11_determinism(capsys):
    runs = []
    for _ in range(2):
        code = main(["verify", "cml81", "--json", "--rank", "--seed", "7"])
        out = capsys.readouterr().out
        assert code == 0
        runs.append(out)
    assert _strip_timing(runs[0]) == _strip_timing(runs[1])
    untimed = []
    for _ in range(2):
        main(["verify", "cyclic(9)", "--json", "--rank", "--no-timing", "--seed", "7"])
        untimed.append(capsys.readouterr().out.encode())
    assert untimed[0] == untimed[1]


def test_acceptance_total_runtime():
    elapsed = time.perf_counter() - _CLOCK["start"]
    assert elapsed < TOTAL_BUDGET_S, f"{elapsed:.0f} s"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
