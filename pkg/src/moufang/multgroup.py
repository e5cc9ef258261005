"""Translations, the multiplication group and the inner mapping group of a loop."""

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, NotNilpotent
from .loop import FiniteLoop
from .perm import (
    ENUM_THRESHOLD,
    Permutation,
    PermutationGroup,
    batch_compose,
    batch_inverse,
    center,
    is_p_group,
    nilpotency_class_group,
    quotient_is_p_group_check,
)
from .report import CheckReport, failure, timed_check


@dataclass(frozen=True)
class TranslationMap:
    loop: FiniteLoop
    element: int
    perm: Permutation


def left_translation(L, x):
    """``L(x)``: the permutation ``y -> x*y``."""
    return TranslationMap(L, int(x), Permutation._trusted(tuple(L.table[x].tolist())))


def multiplication_group(L):
    """The group generated by all left translations, identity point first in the base."""
    G = L.__dict__.get("_mult_group")
    if G is None:
        gens = [left_translation(L, x).perm for x in L.elements]
        G = PermutationGroup(gens, degree=L.order, base=(L.identity,))
        G.bsgs()
        L.__dict__["_mult_group"] = G
    return G


def inner_mapping_group(L):
    """Stabilizer of the identity point in the multiplication group."""
    return multiplication_group(L).stabilizer_chain_tail(1)


def inner_mapping_generators(L):
    return inner_mapping_group(L).strong_generators()


@timed_check
def inner_mapping_crosscheck(L):
    """Every ``L(x,y) = L(xy)^-1 L(x) L(y)`` lies in the extracted stabilizer."""
    name = "multgroup.inner-mapping-crosscheck"
    I = inner_mapping_group(L)
    T = L.table
    n = L.order
    x, y = np.divmod(np.arange(n * n), n)
    # Apply L(y), then L(x), then L(xy)^-1: z -> xy \ (x (y z)).
    maps = batch_compose(batch_compose(T[y], T[x]), batch_inverse(T[T[x, y]]))
    bad = np.flatnonzero(I.index_of(maps) < 0)
    if bad.size:
        i = bad[0]
        return failure(name, (int(x[i]), int(y[i])), count=n * n)
    return CheckReport(name, count=n * n, details={"inner_order": I.order()})


@timed_check
def inner_mappings_are_automorphisms_check(L):
    """Each strong generator of I(L) satisfies ``phi(xy) == phi(x) phi(y)``."""
    L.require_cml()
    name = "lemma4.inner-mappings-automorphisms"
    T = L.table
    gens = inner_mapping_generators(L)
    for k, phi in enumerate(gens):
        f = np.asarray(phi.images)
        bad = np.argwhere(f[T] != T[f[:, None], f[None, :]])
        if bad.size:
            return failure(name, (k, *bad[0].tolist()), details={"generator": list(phi.images)})
    return CheckReport(name, count=len(gens) * L.order**2, details={"generators": len(gens)})


@dataclass
class MultGroupInvariants:
    order: int
    degree: int
    transitive: bool
    inner_order: int
    center_order: object = None
    nilpotency_class: object = None
    is_3_group: bool = False
    quotient_3_group: object = None
    errors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "order": self.order,
            "degree": self.degree,
            "transitive": self.transitive,
            "inner_order": self.inner_order,
            "center_order": self.center_order,
            "nilpotency_class": self.nilpotency_class,
            "is_3_group": self.is_3_group,
            "quotient_by_center_3_group": self.quotient_3_group,
            "errors": dict(self.errors),
        }


def mult_group_invariants(L, threshold=ENUM_THRESHOLD):
    """Aggregate group-theoretic data of ``M(L)``; oversized items are recorded, not raised."""
    M = multiplication_group(L)
    inv = MultGroupInvariants(
        order=M.order(),
        degree=M.degree,
        transitive=M.is_transitive(),
        inner_order=inner_mapping_group(L).order(),
        is_3_group=is_p_group(M, 3),
    )
    try:
        C = center(M, threshold)
        inv.center_order = C.order()
        inv.quotient_3_group = quotient_is_p_group_check(M, C, 3, threshold).passed
    except BudgetError as exc:
        inv.errors["center"] = str(exc)
    try:
        inv.nilpotency_class = nilpotency_class_group(M, threshold)
    except NotNilpotent:
        inv.nilpotency_class = "not nilpotent"
    except BudgetError as exc:
        inv.errors["nilpotency_class"] = str(exc)
    return inv


@timed_check
def transitivity_check(L):
    """``M(L)`` is transitive and ``|M(L)| == |L| * |I(L)|``."""
    name = "multgroup.transitive-orbit-stabilizer"
    M = multiplication_group(L)
    I = inner_mapping_group(L)
    orbit = M.orbit(L.identity)
    details = {"order": M.order(), "inner_order": I.order(), "orbit": len(orbit)}
    if len(orbit) != L.order:
        missing = sorted(set(range(L.order)) - set(orbit))
        return failure(name, (missing[0],), details=details)
    if M.order() != L.order * I.order():
        return failure(name, (M.order(), I.order()), details=details)
    return CheckReport(name, count=L.order, details=details)


@timed_check
def mult_group_nilpotent_check(L, threshold=ENUM_THRESHOLD):
    name = "lemma1-0.mult-group-nilpotent"
    M = multiplication_group(L)
    try:
        cls = nilpotency_class_group(M, threshold)
    except NotNilpotent as exc:
        return failure(name, (M.order(),), details={"error": str(exc)})
    return CheckReport(name, count=M.order(), details={"order": M.order(), "class": cls})


@timed_check
def mult_group_center_quotient_check(L, threshold=ENUM_THRESHOLD):
    name = "lemma2-0.mult-group-quotient-3-group"
    M = multiplication_group(L)
    C = center(M, threshold)
    rep = quotient_is_p_group_check(M, C, 3, threshold, name=name)
    rep.details["center_order"] = C.order()
    return rep


@timed_check
def mult_group_center_nontrivial_check(L, threshold=ENUM_THRESHOLD):
    name = "lemma5-0.mult-group-center-nontrivial"
    M = multiplication_group(L)
    C = center(M, threshold)
    if M.order() > 1 and C.order() == 1:
        return failure(name, (M.order(), C.order()))
    return CheckReport(name, count=M.order(), details={"center_order": C.order()})
