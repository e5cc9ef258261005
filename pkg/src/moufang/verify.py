"""The verification suite: one named check per structural claim, run on a finite loop."""

import itertools

from .errors import BudgetError, CheckViolation, NotCML
from .loop import DEFAULT_SAMPLES, DEFAULT_SEED, check_identity2, check_identity3, default_budget, is_cml
from .multgroup import (
    inner_mapping_crosscheck,
    inner_mappings_are_automorphisms_check,
    mult_group_center_nontrivial_check,
    mult_group_center_quotient_check,
    mult_group_nilpotent_check,
    multiplication_group,
    transitivity_check,
)
from .perm import check_identity1
from .report import CheckReport, failure, skipped, timed_check
from .structure import (
    associator_hom_check,
    bruck_slaby_check,
    center_nontrivial_check,
    center_quotient_exponent_check,
    centralizer,
    maximal_subloops,
    min_generators,
    min_generators_certificate,
    omega_report,
    order3_normal_central_check,
    remak_check,
    special_rank,
)

BUDGET_PREFIX = "budget exceeded"
RANK_ONLY = ("lemma4.maximal-subloops-normal", "rank.special-rank")


@timed_check
def _associator_hom_all(L, gens):
    name = "lemma3.associator-homomorphism"
    pairs = list(itertools.combinations(gens, 2))
    if not pairs:
        return CheckReport(name, details={"pairs": 0})
    total = 0
    reps = []
    for a, b in pairs:
        rep = associator_hom_check(L, a, b)
        if not rep.passed:
            return rep
        total += rep.count
        reps.append(rep.details)
    return CheckReport(name, count=total, details={"pairs": reps})


@timed_check
def _centralizer_closure(L, gens):
    name = "centralizer.subloop-closure"
    sets = [list(p) for p in itertools.combinations(gens, 2)] + [list(gens), list(range(L.order))]
    orders = []
    for M in sets:
        try:
            orders.append(centralizer(L, None, M).order)
        except CheckViolation as exc:
            return failure(name, exc.witness, details={"set": M})
    return CheckReport(name, count=len(sets), details={"centralizer_orders": orders})


@timed_check
def _maximal_normal(L):
    name = "lemma4.maximal-subloops-normal"
    try:
        subs = maximal_subloops(L)
    except CheckViolation as exc:
        return failure(name, exc.witness)
    indices = sorted({L.order // s.order for s in subs})
    return CheckReport(name, count=len(subs), details={"maximal_subloops": len(subs), "indices": indices})


@timed_check
def _rank(L):
    rep = special_rank(L)
    cert = min_generators_certificate(L, rep.witness_subloop, rep.witness_min_generators, rep.witness_generators)
    cert.name = "rank.special-rank"
    cert.details.update({
        "special_rank": rep.special_rank,
        "subloops": rep.subloop_count,
        "witness_order": rep.witness_subloop.order,
        "witness_generators": list(rep.witness_generators),
    })
    return cert


@timed_check
def _omega(L, gens, rank):
    name = "theorem.omega-equivalence"
    rep = omega_report(L, [[], list(gens), list(gens[:1])], rank=rank)
    stm = rep.statements()
    details = rep.to_dict()
    if len(set(stm.values())) != 1:
        return failure(name, tuple(k for k, v in stm.items() if not v), details=details)
    return CheckReport(name, count=len(rep.centralizers), details=details)


def suite(L, budget=None, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES, rank=False):
    """Ordered (name, thunk) pairs for every check."""
    budget = default_budget() if budget is None else budget

    def gens():
        return list(min_generators(L)[1])

    checks = {
        "cml.defining-identity": lambda: is_cml(L),
        "eq1.commutator-identity": lambda: check_identity1(multiplication_group(L), budget, seed, samples),
        "eq2.associator-expansion": lambda: check_identity2(L, budget, seed, samples),
        "eq3.associator-symmetries": lambda: check_identity3(L),
        "lemma1.bruck-slaby": lambda: bruck_slaby_check(L, 3, seed, samples),
        "lemma1-0.mult-group-nilpotent": lambda: mult_group_nilpotent_check(L),
        "lemma2.quotient-exponent-3": lambda: center_quotient_exponent_check(L),
        "lemma2-0.mult-group-quotient-3-group": lambda: mult_group_center_quotient_check(L),
        "lemma3.associator-homomorphism": lambda: _associator_hom_all(L, gens()),
        "lemma3.remak-embedding": lambda: remak_check(L, gens()),
        "lemma4.inner-mappings-automorphisms": lambda: inner_mappings_are_automorphisms_check(L),
        "lemma4.maximal-subloops-normal": lambda: _maximal_normal(L),
        "lemma4.order3-normal-central": lambda: order3_normal_central_check(L),
        "lemma5.center-nontrivial": lambda: center_nontrivial_check(L),
        "lemma5-0.mult-group-center-nontrivial": lambda: mult_group_center_nontrivial_check(L),
        "multgroup.inner-mapping-crosscheck": lambda: inner_mapping_crosscheck(L),
        "multgroup.transitive-orbit-stabilizer": lambda: transitivity_check(L),
        "rank.special-rank": lambda: _rank(L),
        "centralizer.subloop-closure": lambda: _centralizer_closure(L, gens()),
        "theorem.omega-equivalence": lambda: _omega(L, gens(), rank),
    }
    return sorted(checks.items())


def run_suite(L, budget=None, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES, rank=False, only=None):
    """Run the suite and return the list of reports, ordered by check name."""
    reports = []
    cml = L.cml_report.passed
    for name, thunk in suite(L, budget, seed, samples, rank):
        if only and not any(name.startswith(o) for o in only):
            continue
        if name in RANK_ONLY and not rank:
            reports.append(skipped(name, "subloop lattice not requested (use --rank)"))
            continue
        if not cml and name != "cml.defining-identity":
            reports.append(skipped(name, "not a commutative Moufang loop"))
            continue
        try:
            rep = thunk()
        except BudgetError as exc:
            rep = skipped(name, f"{BUDGET_PREFIX}: {exc}")
        except NotCML:
            rep = skipped(name, "not a commutative Moufang loop")
        except CheckViolation as exc:
            rep = failure(name, exc.witness, details={"error": str(exc)})
        rep.name = name
        reports.append(rep)
    return reports


def exit_code(reports):
    if any(r.failed for r in reports):
        return 1
    if any(r.skipped and (r.reason or "").startswith(BUDGET_PREFIX) for r in reports):
        return 3
    return 0
