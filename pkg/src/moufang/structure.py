"""Structure of commutative Moufang loops.

Centre, centralizers, the upper central series, the subloop lattice with
minimal generator counts (special rank), and the checks that tie the
associator map, its kernels and the inner mappings together.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (
    BudgetExceeded,
    ClosureViolation,
    NormalityViolation,
    NotCentrallyNilpotent,
)
from .loop import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    MAX_TENSOR,
    Subloop,
    close_mask,
    coset_labels,
    generate,
    is_normal,
    quotient,
    trivial,
    whole,
)
from .report import SAMPLED, CheckReport, failure, skipped, timed_check

LATTICE_MAX_ORDER = 243
SUBSET_EXHAUSTIVE_LIMIT = 10**6


def _centralizing_mask(L, M):
    """Elements ``x`` with ``(x, y, z) == e`` for all ``y, z`` in ``M``."""
    n, e = L.order, L.identity
    M = np.asarray(sorted(set(int(m) for m in M)), dtype=np.int64)
    if M.size == 0:
        return np.ones(n, dtype=bool)
    if n**3 <= MAX_TENSOR:
        A = L.associators
        return (A[:, M[:, None], M[None, :]] == e).all(axis=(1, 2))
    T, D = L.table, L.ldiv
    y, z = M[:, None], M[None, :]
    yz, out = T[y, z], np.empty(n, dtype=bool)
    for x in range(n):
        out[x] = (D[T[x, yz], T[T[x, y], z]] == e).all()
    return out


def loop_center(L):
    """``Z(L)``: elements whose associators with every pair vanish."""
    L.require_cml()
    return Subloop.from_mask(L, _centralizing_mask(L, range(L.order)))


def centralizer(L, H=None, M=()):
    """``Z_H(M) = {x in H : x*yz == xy*z for all y, z in M}``.

    The result is asserted to be closed; a violation raises
    :class:`ClosureViolation` with the offending pair.
    """
    L.require_cml()
    H = whole(L) if H is None else H
    mask = H.mask & _centralizing_mask(L, M)
    sub = Subloop.from_mask(L, mask)
    idx = sub.index_array
    prods = L.table[np.ix_(idx, idx)]
    bad = np.argwhere(~mask[prods])
    if bad.size:
        i, j = bad[0]
        raise ClosureViolation("centralizer is not closed", (int(idx[i]), int(idx[j])))
    return sub


@dataclass
class LoopCentralSeries:
    chain: List[Subloop]
    nilpotency_class: Optional[int] = None

    @property
    def orders(self):
        return [s.order for s in self.chain]


def upper_central_series_loop(L):
    """``Z_{i+1}`` is the preimage of the centre of ``L / Z_i``."""
    L.require_cml()
    chain = [trivial(L)]
    for _ in range(L.order):
        cur = chain[-1]
        if cur.order == L.order:
            break
        Q, proj = quotient(L, cur)
        nxt = proj.preimage(loop_center(Q))
        if nxt == cur:
            break
        chain.append(nxt)
    done = chain[-1].order == L.order
    return LoopCentralSeries(chain, len(chain) - 1 if done else None)


def nilpotency_class_loop(L):
    series = upper_central_series_loop(L)
    if series.nilpotency_class is None:
        raise NotCentrallyNilpotent(f"upper central series stalls at order {series.orders[-1]}")
    return series.nilpotency_class


class _ClosureCache:
    """Memoised closures of ``S + {x}``; subloops are referred to by integer ids."""

    def __init__(self, L):
        self.L = L
        self.masks = []
        self.keys = []
        self.ids = {}
        self.ext = {}
        e = np.zeros(L.order, dtype=bool)
        e[L.identity] = True
        self.trivial = self.intern(close_mask(L, e))

    def intern(self, mask):
        k = tuple(np.flatnonzero(mask).tolist())
        i = self.ids.get(k)
        if i is None:
            i = self.ids[k] = len(self.keys)
            self.keys.append(k)
            self.masks.append(mask)
        return i

    def extend(self, sid, x):
        got = self.ext.get((sid, x))
        if got is None:
            mask = self.masks[sid]
            if mask[x]:
                got = sid
                self.ext[(sid, x)] = got
            else:
                m = mask.copy()
                m[x] = True
                got = self.intern(close_mask(self.L, m, fresh=[x]))
                # <S, x> == <S, xs> for every s in S.
                for y in self.L.table[x, list(self.keys[sid])].tolist():
                    self.ext[(sid, y)] = got
        return got


def _random_subsets(rng, n, k, count):
    out = np.empty((0, k), dtype=np.int64)
    while out.shape[0] < count:
        draw = rng.integers(0, n, size=(count, k))
        srt = np.sort(draw, axis=1)
        ok = (np.diff(srt, axis=1) != 0).all(axis=1) if k > 1 else np.ones(count, bool)
        out = np.concatenate([out, draw[ok]])
    return out[:count]


@timed_check
def bruck_slaby_check(L, max_gens=3, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES):
    """Subloops generated by ``k <= max_gens`` elements have class ``<= max(1, k-1)``."""
    L.require_cml()
    name = "lemma1.bruck-slaby"
    n = L.order
    cache = _ClosureCache(L)
    classes = {}

    def class_of(sid):
        c = classes.get(sid)
        if c is None:
            sub, _ = Subloop(L, cache.keys[sid]).as_loop()
            c = classes[sid] = nilpotency_class_loop(sub)
        return c

    sampled = False
    rng = np.random.default_rng(seed)
    checked = 0
    worst = {}
    for k in range(1, max_gens + 1):
        if math.comb(n, k) <= SUBSET_EXHAUSTIVE_LIMIT:
            subsets = itertools.combinations(range(n), k)
        else:
            sampled = True
            subsets = map(tuple, _random_subsets(rng, n, k, samples).tolist())
        bound = max(1, k - 1)
        top = 0
        for subset in subsets:
            key = cache.trivial
            for x in subset:
                key = cache.extend(key, x)
            c = class_of(key)
            checked += 1
            if c > bound:
                return failure(name, subset, details={"class": c, "bound": bound},
                               mode=SAMPLED if sampled else "exhaustive",
                               seed=seed if sampled else None, count=checked)
            top = max(top, c)
        worst[k] = top
    details = {
        "max_class_by_size": worst,
        "distinct_subloops": len(cache.keys),
        "loop_class": nilpotency_class_loop(L),
    }
    if sampled:
        return CheckReport(name, mode=SAMPLED, seed=seed, count=checked, details=details)
    return CheckReport(name, count=checked, details=details)


# -- subloop lattice and rank --------------------------------------------------


@dataclass
class SubloopLattice:
    subloops: List[Subloop]
    min_gens: List[int]
    generators: List[tuple]


def subloop_lattice(L):
    """All subloops with their minimal generator counts, found breadth-first.

    Level ``k`` holds the subloops generated by exactly ``k`` elements; each
    is reached by adjoining one element to a level ``k-1`` subloop.
    """
    cached = L.__dict__.get("_lattice")
    if cached is not None:
        return cached
    if L.order > LATTICE_MAX_ORDER:
        raise BudgetExceeded(f"subloop enumeration is limited to order {LATTICE_MAX_ORDER}")
    cache = _ClosureCache(L)
    found = {cache.trivial: (0, ())}
    frontier = [cache.trivial]
    while frontier:
        nxt = []
        for key in frontier:
            k, gens = found[key]
            for x in range(L.order):
                new = cache.extend(key, x)
                if new not in found:
                    found[new] = (k + 1, gens + (x,))
                    nxt.append(new)
        frontier = nxt
    ids = list(found)
    lat = SubloopLattice(
        subloops=[Subloop(L, cache.keys[i]) for i in ids],
        min_gens=[found[i][0] for i in ids],
        generators=[found[i][1] for i in ids],
    )
    L.__dict__["_lattice"] = lat
    return lat


def all_subloops(L):
    return list(subloop_lattice(L).subloops)


def min_generators(L, H=None):
    """Least number of elements of ``H`` generating ``H``; returns ``(count, generators)``.

    Breadth-first over generated subloops.  While extending a subloop ``S``,
    an element lying in an extension already produced from ``S`` is skipped:
    anything it can reach, that larger extension reaches as well.
    """
    whole_loop = H is None or H.order == L.order
    if whole_loop and "_min_gens" in L.__dict__:
        return L.__dict__["_min_gens"]
    H = whole(L) if H is None else H
    cache = _ClosureCache(L)
    target = cache.intern(H.mask)
    result = None
    if cache.trivial == target:
        result = (0, ())
    found = {cache.trivial: ()}
    frontier = [cache.trivial]
    while result is None and frontier:
        nxt = []
        for sid in frontier:
            covered = cache.masks[sid].copy()
            for x in H.members:
                if covered[x]:
                    continue
                new = cache.extend(sid, x)
                covered |= cache.masks[new]
                if new in found:
                    continue
                found[new] = found[sid] + (x,)
                if new == target:
                    result = (len(found[new]), found[new])
                    break
                nxt.append(new)
            if result is not None:
                break
        frontier = nxt
    if result is None:
        raise AssertionError("subloop does not generate itself")
    if whole_loop:
        L.__dict__["_min_gens"] = result
    return result


@timed_check
def min_generators_certificate(L, H, count, gens):
    """Two-sided certificate: ``gens`` generate ``H`` and no smaller subset of ``H`` does."""
    name = "rank.min-generators-certificate"
    if len(gens) != count or generate(L, gens) != H:
        return failure(name, tuple(gens), details={"side": "upper"})
    checked = 0
    if count > 0:
        for sub in itertools.combinations(H.members, count - 1):
            checked += 1
            if generate(L, sub) == H:
                return failure(name, sub, details={"side": "lower"})
    return CheckReport(name, count=checked, details={"min_generators": count})


@dataclass
class RankReport:
    special_rank: int
    witness_subloop: Subloop
    subloop_count: int
    witness_generators: tuple = ()
    witness_min_generators: int = 0


def special_rank(L):
    """Maximum over subloops of the minimal generator count (1 for the trivial loop)."""
    lat = subloop_lattice(L)
    best = max(range(len(lat.subloops)), key=lambda i: lat.min_gens[i])
    d = lat.min_gens[best]
    return RankReport(
        special_rank=max(1, d),
        witness_subloop=lat.subloops[best],
        subloop_count=len(lat.subloops),
        witness_generators=lat.generators[best],
        witness_min_generators=d,
    )


def maximal_subloops(L):
    """Proper subloops contained in no larger proper subloop; each must be normal."""
    subs = [s for s in all_subloops(L) if s.order < L.order]
    if not subs:
        return []
    M = np.array([s.mask for s in subs], dtype=np.int64)
    inter = M @ M.T
    sizes = M.sum(axis=1)
    contained = (inter == sizes[:, None]) & (sizes[None, :] > sizes[:, None])
    maximal = [s for s, row in zip(subs, contained) if not row.any()]
    for s in maximal:
        if not is_normal(L, s):
            raise NormalityViolation("maximal subloop is not normal", s.members)
    return maximal


# -- lemma-level checks ------------------------------------------------------------


@timed_check
def order3_normal_central_check(L):
    """An order-3 element generating a normal subloop is central."""
    L.require_cml()
    name = "lemma4.order3-normal-central"
    Z = loop_center(L)
    hits = []
    orders = L.element_orders
    for a in np.flatnonzero(orders == 3).tolist():
        if is_normal(L, generate(L, [a])):
            hits.append(a)
            if a not in Z:
                return failure(name, (a,), details={"normal_generators": hits})
    return CheckReport(name, count=int((orders == 3).sum()), details={"normal_generators": hits})


def _associator_column(L, a, b):
    """``x -> (x, a, b)`` for every ``x``."""
    T = L.table
    return L.ldiv[T[:, T[a, b]], T[T[:, a], b]].astype(np.int64)


@timed_check
def associator_hom_check(L, a, b):
    """``x -> (x,a,b)`` is a homomorphism into the centre with kernel ``Z_L({a,b})``."""
    L.require_cml()
    name = "lemma3.associator-homomorphism"
    Z = loop_center(L)
    phi = _associator_column(L, a, b)
    outside = np.flatnonzero(~Z.mask[phi])
    if outside.size:
        return skipped(name, f"associator ({int(outside[0])},{a},{b}) is not central",
                       details={"a": a, "b": b})
    T = L.table
    bad = np.argwhere(phi[T] != T[phi[:, None], phi[None, :]])
    if bad.size:
        return failure(name, tuple(bad[0].tolist()), details={"a": a, "b": b, "failed": "homomorphism"})
    kernel = phi == L.identity
    cent = centralizer(L, None, [a, b]).mask
    diff = np.flatnonzero(kernel != cent)
    if diff.size:
        return failure(name, (int(diff[0]),), details={"a": a, "b": b, "failed": "kernel"})
    return CheckReport(name, count=L.order**2, details={
        "a": a, "b": b,
        "image_order": len(set(phi.tolist())),
        "kernel_order": int(kernel.sum()),
    })


@timed_check
def remak_check(L, gens):
    """Kernel intersection and coset embedding for the pairwise associator maps."""
    L.require_cml()
    name = "lemma3.remak-embedding"
    gens = sorted(set(int(g) for g in gens))
    cls = nilpotency_class_loop(L)
    if cls > 2:
        return skipped(name, f"class {cls} > 2: associators need not be central")
    pairs = list(itertools.combinations(gens, 2))
    ZA = centralizer(L, None, gens)
    inter = np.ones(L.order, dtype=bool)
    kernel = np.ones(L.order, dtype=bool)
    parts = []
    for a, b in pairs:
        Zi = centralizer(L, None, (a, b))
        inter &= Zi.mask
        kernel &= _associator_column(L, a, b) == L.identity
        parts.append(coset_labels(L, Zi)[0])
    for label, mask in (("intersection", inter), ("combined-kernel", kernel)):
        diff = np.flatnonzero(mask != ZA.mask)
        if diff.size:
            return failure(name, (int(diff[0]),), details={"failed": label})
    # x Z_L(A) -> (x Z_L(A_i))_i must be well defined and injective.
    base = coset_labels(L, ZA)[0]
    image = {}
    for x in range(L.order):
        tup = tuple(int(p[x]) for p in parts)
        prev = image.setdefault(int(base[x]), tup)
        if prev != tup:
            return failure(name, (x,), details={"failed": "well-defined"})
    if len(set(image.values())) != len(image):
        return failure(name, tuple(gens), details={"failed": "injective"})
    return CheckReport(name, count=L.order * max(1, len(pairs)), details={
        "pairs": len(pairs),
        "centralizer_order": ZA.order,
        "quotient_order": len(image),
    })


@dataclass
class OmegaReport:
    order: int
    min_generators: int
    generators: tuple
    special_rank: Optional[int]
    mult_group_order: int
    centralizers: list = field(default_factory=list)

    @property
    def conditions(self):
        # For finite loops every finiteness condition holds.
        return {
            "finite": True,
            "finitely_generated": True,
            "finite_rank": True,
            "maximum_condition": True,
            "minimum_condition": True,
        }

    def statements(self):
        """The four equivalent statements, instantiated for every requested subloop."""
        out = {"loop": True, "mult_group": self.mult_group_order > 0}
        out["subloop_centralizer"] = all(c["loop_centralizer_order"] > 0 for c in self.centralizers)
        out["subgroup_centralizer"] = all(c["group_centralizer_order"] > 0 for c in self.centralizers)
        return out

    def to_dict(self):
        return {
            "order": self.order,
            "min_generators": self.min_generators,
            "generators": list(self.generators),
            "special_rank": self.special_rank,
            "mult_group_order": self.mult_group_order,
            "conditions": self.conditions,
            "statements": self.statements(),
            "centralizers": self.centralizers,
        }


def omega_report(L, subloop_gens=None, rank=True):
    """Finiteness data of ``L`` and the centralizers of the requested subloops.

    ``subloop_gens`` is a list of generator lists; by default the trivial
    subloop and a minimal generating set of ``L`` are used.
    """
    from .multgroup import left_translation, multiplication_group
    from .perm import centralizer_in

    L.require_cml()
    d, gens = min_generators(L)
    if subloop_gens is None:
        subloop_gens = [[], list(gens)]
    M = multiplication_group(L)
    rep = OmegaReport(
        order=L.order,
        min_generators=d,
        generators=gens,
        special_rank=special_rank(L).special_rank if rank else None,
        mult_group_order=M.order(),
    )
    for hg in subloop_gens:
        H = generate(L, hg)
        ZH = centralizer(L, None, H.members)
        N = [left_translation(L, h).perm for h in hg]
        CN = centralizer_in(M, N)
        rep.centralizers.append({
            "generators": list(hg),
            "subloop_order": H.order,
            "loop_centralizer_order": ZH.order,
            "group_centralizer_order": CN.order(),
        })
    return rep


@timed_check
def center_quotient_exponent_check(L):
    """``L / Z(L)`` is a 3-loop whose exponent divides 3."""
    name = "lemma2.quotient-exponent-3"
    Q, _ = quotient(L, loop_center(L))
    exp = Q.exponent()
    order = Q.order
    while order % 3 == 0:
        order //= 3
    details = {"quotient_order": Q.order, "exponent": exp}
    if 3 % exp or order != 1:
        return failure(name, (Q.order, exp), details=details)
    return CheckReport(name, count=Q.order, details=details)


@timed_check
def center_nontrivial_check(L):
    """A finite CML of order > 1 has a centre larger than the identity."""
    name = "lemma5.center-nontrivial"
    Z = loop_center(L)
    if L.order > 1 and Z.order == 1:
        return failure(name, (L.order, Z.order))
    return CheckReport(name, count=L.order, details={"center_order": Z.order})
