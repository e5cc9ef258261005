"""Permutation groups with a deterministic Schreier-Sims stabilizer chain.

Points are ``0 .. d-1`` and products act left factor first:
``(p * q)(i) == q(p(i))``.  Element-wise algorithms (centres, centralizers,
central series) run on the enumerated element array and are bounded by
``ENUM_THRESHOLD``.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional

import numpy as np

from .errors import DegreeMismatch, InputError, NotNilpotent, TooLarge
from .loop import DEFAULT_SAMPLES, DEFAULT_SEED, default_budget
from .report import SAMPLED, CheckReport, failure, timed_check

ENUM_THRESHOLD = 10**6
CAYLEY_THRESHOLD = 8192
_CHUNK_CELLS = 4_000_000


def _mul(p, q):
    return tuple([q[i] for i in p])


def _inv(p):
    r = [0] * len(p)
    for i, j in enumerate(p):
        r[j] = i
    return tuple(r)


class Permutation:
    """A bijection of ``range(degree)`` stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def _trusted(cls, images):
        p = cls.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, degree):
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree, *cycles):
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        return Permutation._trusted(_mul(self.images, other.images))

    def __invert__(self):
        return Permutation._trusted(_inv(self.images))

    def __pow__(self, k):
        if k < 0:
            return (~self) ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def order(self):
        return math.lcm(*[len(c) for c in self.cycles()] or [1])

    def cycles(self):
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [i], self.images[i]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation<{cyc or '()'}; degree {self.degree}>"

    def to_text(self):
        return " ".join(map(str, self.images))


def compose(p, q):
    return p * q


def inv(p):
    return ~p


def conjugate(a, b):
    """``a^b = b^-1 a b``."""
    return ~b * a * b


def commutator(a, b):
    """``[a, b] = a^-1 b^-1 a b``."""
    return ~a * ~b * a * b


# -- batched permutation arithmetic on (rows, degree) integer arrays --------


def batch_compose(P, Q):
    """Row-wise ``P[r] * Q[r]`` (apply ``P`` first)."""
    return np.take_along_axis(Q, P, axis=1)


def batch_inverse(P):
    out = np.empty_like(P)
    np.put_along_axis(out, P, np.broadcast_to(np.arange(P.shape[1], dtype=P.dtype), P.shape), axis=1)
    return out


def batch_commutator(A, B):
    Ai, Bi = batch_inverse(A), batch_inverse(B)
    return batch_compose(batch_compose(batch_compose(Ai, Bi), A), B)


def batch_conjugate(A, B):
    return batch_compose(batch_compose(batch_inverse(B), A), B)


def batch_power(P, k):
    out = P
    for _ in range(k - 1):
        out = batch_compose(out, P)
    return out


# -- stabilizer chain ---------------------------------------------------------


class _Level:
    __slots__ = ("base", "gens", "orbit", "trans", "tinv", "tested")

    def __init__(self, base, identity):
        self.base = base
        self.gens = []
        self.orbit = [base]
        self.trans = {base: identity}
        self.tinv = {base: identity}
        self.tested = set()

    def add_gen(self, s):
        self.gens.append(s)
        old = len(self.orbit)
        for p in self.orbit[:old]:
            self._visit(p, s)
        i = old
        while i < len(self.orbit):
            p = self.orbit[i]
            for g in self.gens:
                self._visit(p, g)
            i += 1

    def _visit(self, p, s):
        q = s[p]
        if q not in self.trans:
            u = _mul(self.trans[p], s)
            self.trans[q] = u
            self.tinv[q] = _inv(u)
            self.orbit.append(q)


class StabilizerChain:
    """Base, strong generators and transversals built by Schreier-Sims.

    Deterministic: generators are absorbed in the order given and new base
    points are the lowest points moved by the residue that needs them.
    """

    def __init__(self, degree, base_prefix=()):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.levels = [_Level(b, self.identity) for b in base_prefix]

    @property
    def base(self):
        return [lvl.base for lvl in self.levels]

    @property
    def order(self):
        return math.prod(len(lvl.orbit) for lvl in self.levels)

    def sift(self, h, start=0):
        for k in range(start, len(self.levels)):
            lvl = self.levels[k]
            beta = h[lvl.base]
            u = lvl.tinv.get(beta)
            if u is None:
                return h, k
            if beta != lvl.base:
                h = _mul(h, u)
        return h, len(self.levels)

    def contains(self, g):
        h, _ = self.sift(g)
        return h == self.identity

    def _new_level(self, r):
        b = next(i for i, j in enumerate(r) if i != j)
        self.levels.append(_Level(b, self.identity))

    def add_generator(self, g):
        """Absorb ``g``; return False when it was already a member."""
        h, j = self.sift(g)
        if h == self.identity:
            return False
        if j == len(self.levels):
            self._new_level(h)
        for k in range(j + 1):
            self.levels[k].add_gen(h)
        self._complete(j)
        self.__dict__.pop("tables", None)
        return True

    def _complete(self, i):
        levels = self.levels
        while i >= 0:
            lvl = levels[i]
            residue = None
            for p in lvl.orbit:
                up = lvl.trans[p]
                for gi, s in enumerate(lvl.gens):
                    if (p, gi) in lvl.tested:
                        continue
                    lvl.tested.add((p, gi))
                    h = _mul(_mul(up, s), lvl.tinv[s[p]])
                    if h == self.identity:
                        continue
                    r, j = self.sift(h, i + 1)
                    if r != self.identity:
                        residue = (r, j)
                        break
                if residue:
                    break
            if residue is None:
                i -= 1
                continue
            r, j = residue
            if j == len(levels):
                self._new_level(r)
            for k in range(i + 1, j + 1):
                levels[k].add_gen(r)
            i = j

    @cached_property
    def tables(self):
        """Numpy transversal tables for vectorised sifting and enumeration."""
        d = self.degree
        dtype = np.int16 if d < 2**15 else np.int32
        out = []
        sizes = [len(lvl.orbit) for lvl in self.levels]
        for k, lvl in enumerate(self.levels):
            pos = np.full(d, -1, dtype=np.int64)
            pos[lvl.orbit] = np.arange(len(lvl.orbit))
            U = np.array([lvl.trans[p] for p in lvl.orbit], dtype=dtype).reshape(-1, d)
            Ui = np.array([lvl.tinv[p] for p in lvl.orbit], dtype=dtype).reshape(-1, d)
            stride = math.prod(sizes[k + 1:])
            out.append((lvl.base, pos, U, Ui, stride))
        return out

    def index_of(self, P):
        """Enumeration index of each row of ``P``, or -1 for non-members."""
        P = np.asarray(P)
        idx = np.zeros(P.shape[0], dtype=np.int64)
        ok = np.ones(P.shape[0], dtype=bool)
        H = P
        for base, pos, _, Ui, stride in self.tables:
            c = pos[H[:, base]]
            ok &= c >= 0
            c = np.where(c < 0, 0, c)
            idx += c * stride
            H = Ui[c[:, None], H]
        ok &= (H == np.arange(self.degree)).all(axis=1)
        return np.where(ok, idx, -1)

    def index_of_base_images(self, BI):
        """Enumeration index of members given only their images of the base points."""
        idx = np.zeros(BI.shape[0], dtype=np.int64)
        H = BI
        for k, (_, pos, _, Ui, stride) in enumerate(self.tables):
            c = pos[H[:, k]]
            idx += c * stride
            H = Ui[c[:, None], H]
        return idx

    def _build(self, codes):
        """Elements ``u_l * ... * u_1`` for per-level transversal codes."""
        rows = codes[0].shape[0] if codes else 0
        dtype = np.int16 if self.degree < 2**15 else np.int32
        G = np.broadcast_to(np.arange(self.degree, dtype=dtype), (rows, self.degree))
        for (_, _, U, _, _), c in reversed(list(zip(self.tables, codes))):
            G = U[c[:, None], G]
        return np.ascontiguousarray(G)

    def element_at(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        if not self.levels:
            return np.broadcast_to(np.arange(self.degree), (len(indices), self.degree)).copy()
        codes = [(indices // stride) % U.shape[0] for _, _, U, _, stride in self.tables]
        return self._build(codes)

    def random_elements(self, rng, count):
        if not self.levels:
            return np.broadcast_to(np.arange(self.degree), (count, self.degree)).copy()
        codes = [rng.integers(0, U.shape[0], size=count) for _, _, U, _, _ in self.tables]
        return self._build(codes)

    def strong_generators(self):
        seen, out = set(), []
        for lvl in self.levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out


def schreier_sims(degree, generators, base_prefix=()):
    chain = StabilizerChain(degree, base_prefix)
    for g in generators:
        chain.add_generator(tuple(g))
    return chain


class PermutationGroup:
    """A permutation group given by generators; the BSGS is built lazily."""

    def __init__(self, generators, degree=None, base=()):
        generators = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if degree is None:
            if not generators:
                raise ValueError("degree is required for a group without generators")
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a degree-{degree} group")
        self.degree = degree
        self.generators = generators
        self._base_prefix = tuple(base)

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, gens={len(self.generators)})"

    @classmethod
    def _from_chain(cls, chain, generators):
        G = cls([Permutation._trusted(g) for g in generators], degree=chain.degree)
        G.__dict__["chain"] = chain
        return G

    @classmethod
    def from_element_array(cls, degree, E):
        """The group generated by the rows of ``E``, with a lean generating set.

        Rows are absorbed greedily: a row becomes a generator only if the
        group built so far does not already contain it.
        """
        chain = StabilizerChain(degree)
        gens = []
        E = np.asarray(E)
        pending = np.ones(E.shape[0], dtype=bool)
        pending &= ~(E == np.arange(degree)).all(axis=1)
        while pending.any():
            i = int(np.flatnonzero(pending)[0])
            g = tuple(E[i].tolist())
            chain.add_generator(g)
            gens.append(g)
            rest = np.flatnonzero(pending)
            pending[rest[chain.index_of(E[rest]) >= 0]] = False
        return cls._from_chain(chain, gens)

    @cached_property
    def chain(self):
        return schreier_sims(self.degree, [g.images for g in self.generators], self._base_prefix)

    def bsgs(self):
        self.chain
        return self

    @property
    def base(self):
        return self.chain.base

    def strong_generators(self):
        return [Permutation._trusted(g) for g in self.chain.strong_generators()]

    def lean_generators(self):
        """A generating set: the strong generators of the first level."""
        if not self.chain.levels:
            return []
        return [Permutation._trusted(g) for g in self.chain.levels[0].gens]

    def transversal_sizes(self):
        return [len(lvl.orbit) for lvl in self.chain.levels]

    def order(self):
        return self.chain.order

    def __len__(self):
        return self.order()

    def member(self, p):
        p = p.images if isinstance(p, Permutation) else tuple(p)
        if len(p) != self.degree:
            return False
        return self.chain.contains(p)

    __contains__ = member

    def stabilizer_chain_tail(self, k):
        """The stabilizer of the first ``k`` base points, sharing this chain."""
        sub = StabilizerChain(self.degree)
        sub.levels = self.chain.levels[k:]
        gens = sub.levels[0].gens if sub.levels else []
        return PermutationGroup._from_chain(sub, gens)

    def index_of(self, P):
        return self.chain.index_of(P)

    def element_array(self, threshold=ENUM_THRESHOLD):
        n = self.order()
        if n > threshold:
            raise TooLarge(n, threshold)
        return self.chain.element_at(np.arange(n))

    def elements(self, threshold=ENUM_THRESHOLD):
        return [Permutation._trusted(tuple(r)) for r in self.element_array(threshold).tolist()]

    def random_elements(self, rng, count):
        return self.chain.random_elements(rng, count)

    def cayley_table(self, threshold=CAYLEY_THRESHOLD):
        """``table[i, j]`` is the index of ``element(i) * element(j)``."""
        cached = self.__dict__.get("_cayley")
        if cached is not None:
            return cached
        n = self.order()
        if n > threshold:
            raise TooLarge(n, threshold)
        E = self.element_array()
        BI = E[:, self.chain.base]
        k = BI.shape[1]
        dtype = np.int16 if n < 2**15 else np.int32
        table = np.empty((n, n), dtype=dtype)
        step = max(1, _CHUNK_CELLS // max(1, n * max(k, 1)))
        cols = np.arange(n)[None, :, None]
        for lo in range(0, n, step):
            blk = BI[lo:lo + step]
            prod = E[cols, blk[:, None, :]].reshape(-1, k)
            table[lo:lo + step] = self.chain.index_of_base_images(prod).reshape(-1, n)
        table.setflags(write=False)
        self.__dict__["_cayley"] = table
        return table

    def orbit(self, point):
        seen, todo = {point}, [point]
        for p in todo:
            for g in self.generators:
                q = g.images[p]
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return sorted(seen)

    def is_transitive(self):
        return len(self.orbit(0)) == self.degree

    def is_abelian(self):
        gs = self.generators
        return all(a * b == b * a for i, a in enumerate(gs) for b in gs[i + 1:])

    def is_subgroup_of(self, other):
        return all(other.member(g) for g in self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, PermutationGroup)
            and self.degree == other.degree
            and self.order() == other.order()
            and self.is_subgroup_of(other)
        )

    __hash__ = None


def parse_permutation(line):
    """One line of space-separated images."""
    try:
        return Permutation([int(t) for t in line.split()])
    except ValueError as exc:
        raise InputError(f"bad permutation {line!r}: {exc}") from None


def format_permutation(p):
    return p.to_text()


def parse_group(text):
    """Degree line followed by one permutation per line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty group file")
    try:
        degree = int(lines[0])
    except ValueError:
        raise InputError(f"bad degree line {lines[0]!r}") from None
    gens = [parse_permutation(ln) for ln in lines[1:]]
    for g in gens:
        if g.degree != degree:
            raise InputError(f"permutation of degree {g.degree} in a degree-{degree} group")
    return PermutationGroup(gens, degree=degree)


def format_group(G):
    return "\n".join([str(G.degree)] + [format_permutation(g) for g in G.generators]) + "\n"


def order(G):
    return G.order()


def member(G, p):
    return G.member(p)


def elements(G, threshold=ENUM_THRESHOLD):
    return G.elements(threshold)


def _as_array(perms, degree):
    if not perms:
        return np.empty((0, degree), dtype=np.int64)
    return np.array([p.images for p in perms], dtype=np.int64)


def _commuting_mask(E, S):
    mask = np.ones(E.shape[0], dtype=bool)
    for s in S:
        s = np.asarray(s.images, dtype=E.dtype)
        mask &= (s[E] == E[:, s]).all(axis=1)
    return mask


def centralizer_in(G, S, threshold=ENUM_THRESHOLD):
    """Elements of ``G`` commuting with every permutation in ``S``."""
    for s in S:
        if s.degree != G.degree:
            raise DegreeMismatch(f"degree {s.degree} element against a degree-{G.degree} group")
    E = G.element_array(threshold)
    return PermutationGroup.from_element_array(G.degree, E[_commuting_mask(E, S)])


def center(G, threshold=ENUM_THRESHOLD):
    C = G.__dict__.get("_center")
    if C is None:
        C = G.__dict__["_center"] = centralizer_in(G, G.lean_generators(), threshold)
    return C


@dataclass
class GroupSeries:
    chain: List[PermutationGroup]
    terminated: bool
    nilpotency_class: Optional[int] = None
    orders: List[int] = field(default_factory=list)


def upper_central_series_group(G, threshold=ENUM_THRESHOLD):
    """``C_{i+1} = {g : [g, x] in C_i for every generator x}`` until stable."""
    E = G.element_array(threshold)
    N = E.shape[0]
    gens = [np.broadcast_to(np.asarray(x.images, dtype=E.dtype), E.shape) for x in G.lean_generators()]
    mask = np.zeros(N, dtype=bool)
    mask[G.index_of(np.arange(G.degree)[None, :])[0]] = True
    masks = [mask]
    while True:
        nxt = np.ones(N, dtype=bool)
        for X in gens:
            nxt &= mask[G.index_of(batch_commutator(E, X))]
        if nxt.sum() == mask.sum():
            break
        mask = nxt
        masks.append(mask)
        if mask.all():
            break
    chain = [PermutationGroup.from_element_array(G.degree, E[m]) for m in masks]
    done = bool(masks[-1].all())
    return GroupSeries(
        chain=chain,
        terminated=True,
        nilpotency_class=len(masks) - 1 if done else None,
        orders=[int(m.sum()) for m in masks],
    )


def nilpotency_class_group(G, threshold=ENUM_THRESHOLD):
    series = upper_central_series_group(G, threshold)
    if series.nilpotency_class is None:
        raise NotNilpotent(f"upper central series stalls at order {series.orders[-1]} < {G.order()}")
    return series.nilpotency_class


def is_p_group(G, p):
    n = G.order()
    while n % p == 0:
        n //= p
    return n == 1


@timed_check
def quotient_is_p_group_check(G, Z, p, threshold=ENUM_THRESHOLD, name="group.quotient-p-group"):
    """Every ``g`` in ``G`` has some ``g**(p**k)`` inside the normal subgroup ``Z``."""
    E = G.element_array(threshold)
    index = max(1, G.order() // max(1, Z.order()))
    kmax = 0
    while p**kmax < index:
        kmax += 1
    pending = np.ones(E.shape[0], dtype=bool)
    P = E
    for _ in range(kmax + 1):
        pending &= Z.index_of(P) < 0
        if not pending.any():
            return CheckReport(name, count=E.shape[0], details={"p": p, "max_k": kmax})
        P = batch_power(P, p)
    bad = int(np.flatnonzero(pending)[0])
    return failure(name, (bad,), count=E.shape[0], details={"p": p, "element": E[bad].tolist()})


def _identity1_sides(X, Y, Z, T):
    lhs = batch_commutator(batch_compose(X, Y), batch_compose(Z, T))
    a = batch_conjugate(batch_commutator(X, T), Y)
    b = batch_commutator(Y, T)
    c = batch_conjugate(batch_commutator(X, Z), batch_compose(Y, T))
    d = batch_conjugate(batch_commutator(Y, Z), T)
    rhs = batch_compose(batch_compose(batch_compose(a, b), c), d)
    return lhs, rhs


@timed_check
def check_identity1(G, budget=None, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES, threshold=ENUM_THRESHOLD):
    """``[xy, zt] == [x,t]^y [y,t] [x,z]^(yt) [y,z]^t`` on quadruples of ``G``."""
    name = "eq1.commutator-identity"
    budget = default_budget() if budget is None else budget
    n = G.order()
    chunk = max(1, _CHUNK_CELLS // max(1, G.degree))
    if n**4 <= budget and n <= threshold:
        E = G.element_array(threshold).astype(np.int64)
        total = n**4
        for start in range(0, total, chunk):
            flat = np.arange(start, min(total, start + chunk))
            qi = np.unravel_index(flat, (n, n, n, n))
            lhs, rhs = _identity1_sides(*(E[q] for q in qi))
            bad = np.flatnonzero((lhs != rhs).any(axis=1))
            if bad.size:
                return failure(name, tuple(int(q[bad[0]]) for q in qi))
        return CheckReport(name, count=total, details={"group_order": n})
    rng = np.random.default_rng(seed)
    if n <= CAYLEY_THRESHOLD:
        return _identity1_sampled_table(G, rng, seed, samples)
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        quad = [G.random_elements(rng, k).astype(np.int64) for _ in range(4)]
        lhs, rhs = _identity1_sides(*quad)
        bad = np.flatnonzero((lhs != rhs).any(axis=1))
        if bad.size:
            i = bad[0]
            witness = tuple(int(G.index_of(q[i:i + 1])[0]) for q in quad)
            return failure(name, witness, mode=SAMPLED, seed=seed, count=done + k)
        done += k
    return CheckReport(name, mode=SAMPLED, seed=seed, count=samples, details={"group_order": n})


def _identity1_sampled_table(G, rng, seed, samples):
    # Uniform element indices; arithmetic through the group's Cayley table.
    name = "eq1.commutator-identity"
    n = G.order()
    m = G.cayley_table()
    one = int(G.index_of(np.arange(G.degree)[None, :])[0])
    inv = np.argmax(m == one, axis=1)

    def comm(a, b):
        return m[m[m[inv[a], inv[b]], a], b]

    def conj(a, b):
        return m[m[inv[b], a], b]

    x, y, z, t = rng.integers(0, n, size=(4, samples))
    lhs = comm(m[x, y], m[z, t])
    rhs = m[m[m[conj(comm(x, t), y), comm(y, t)], conj(comm(x, z), m[y, t])], conj(comm(y, z), t)]
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        i = bad[0]
        return failure(name, (x[i], y[i], z[i], t[i]), mode=SAMPLED, seed=seed, count=samples)
    return CheckReport(name, mode=SAMPLED, seed=seed, count=samples, details={"group_order": n})
