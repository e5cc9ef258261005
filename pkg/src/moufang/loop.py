"""Finite loops stored as dense Cayley tables.

Elements are plain integers ``0 .. n-1``; the identity is whatever index
the table says it is.  All heavy checks are vectorised over numpy slabs so
the exhaustive triple and quadruple scans stay at desk scale for loops of
a few hundred elements.
"""

import math
import os
from functools import cached_property, reduce
from pathlib import Path

import numpy as np

from .errors import (
    BudgetExceeded,
    InputError,
    NoIdentity,
    NotCML,
    NotLatinSquare,
    NotNormal,
    SizeOverflow,
)
from .report import SAMPLED, CheckReport, failure, timed_check

MAX_ORDER = 2048
DEFAULT_BUDGET = 10**8
DEFAULT_SAMPLES = 10**6
DEFAULT_SEED = 42
# Largest associator tensor kept in memory (entries).
MAX_TENSOR = 2**26


def default_budget():
    """Exhaustive-check budget, overridable through ``MOUFANG_BUDGET``."""
    raw = os.environ.get("MOUFANG_BUDGET")
    return int(float(raw)) if raw else DEFAULT_BUDGET


class FiniteLoop:
    """An immutable loop given by its Cayley table.

    Build instances with :func:`validate`; the constructor trusts its input.
    """

    def __init__(self, table, identity):
        table = np.array(table, dtype=np.int32)
        table.setflags(write=False)
        self.table = table
        self.identity = int(identity)

    @property
    def order(self):
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteLoop(order={self.order}, identity={self.identity})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteLoop)
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.identity, self.table.tobytes()))

    @property
    def elements(self):
        return range(self.order)

    @cached_property
    def ldiv(self):
        """``ldiv[a, b]`` is the unique ``x`` with ``a*x == b``."""
        n = self.order
        out = np.empty((n, n), dtype=np.int32)
        out[np.arange(n)[:, None], self.table] = np.arange(n)[None, :]
        out.setflags(write=False)
        return out

    @cached_property
    def inverses(self):
        inv = self.ldiv[:, self.identity].copy()
        inv.setflags(write=False)
        return inv

    def mul(self, a, b):
        return int(self.table[a, b])

    def left_div(self, a, b):
        return int(self.ldiv[a, b])

    def inverse(self, a):
        return int(self.inverses[a])

    def power(self, a, k):
        """Left-normed power ``a*(a*(...*a))`` with ``k`` factors."""
        x = self.identity
        for _ in range(k):
            x = int(self.table[a, x])
        return x

    def element_order(self, a):
        e = self.identity
        x = int(self.table[a, e])
        k = 1
        while x != e:
            x = int(self.table[a, x])
            k += 1
        return k

    @cached_property
    def element_orders(self):
        # The order of a is the cycle length of the identity under L(a).
        n, e, T = self.order, self.identity, self.table
        orders = np.zeros(n, dtype=np.int64)
        x = T[:, e].copy()
        k = 1
        pending = np.ones(n, dtype=bool)
        while pending.any():
            hit = pending & (x == e)
            orders[hit] = k
            pending &= ~hit
            x = T[np.arange(n), x]
            k += 1
        orders.setflags(write=False)
        return orders

    def exponent(self):
        return int(reduce(math.lcm, (int(k) for k in set(self.element_orders.tolist())), 1))

    def associator(self, a, b, c):
        """The element ``(a,b,c)`` with ``ab*c == (a*bc)*(a,b,c)``."""
        T = self.table
        return int(self.ldiv[T[a, T[b, c]], T[T[a, b], c]])

    def associator_slab(self, a):
        """All associators ``(a, y, z)`` as an ``n x n`` array."""
        T = self.table
        return self.ldiv[T[a][T], T[T[a]]]

    @cached_property
    def associators(self):
        """The full ``n x n x n`` associator tensor."""
        n = self.order
        if n**3 > MAX_TENSOR:
            raise BudgetExceeded(f"associator tensor for order {n} exceeds {MAX_TENSOR} entries")
        dtype = np.int16 if n < 2**15 else np.int32
        A = np.empty((n, n, n), dtype=dtype)
        for a in range(n):
            A[a] = self.associator_slab(a)
        A.setflags(write=False)
        return A

    @cached_property
    def cml_report(self):
        return is_cml(self)

    def require_cml(self):
        if not self.cml_report.passed:
            raise NotCML(self.cml_report)


def validate(table):
    """Check the loop axioms and return a :class:`FiniteLoop`."""
    try:
        arr = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"table is not an integer matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"table must be a non-empty square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise InputError(f"table entries must lie in [0, {n})")
    full = np.arange(n)
    for kind, mat in (("row", arr), ("column", arr.T)):
        srt = np.sort(mat, axis=1)
        bad = np.flatnonzero((srt != full).any(axis=1))
        if bad.size:
            i = int(bad[0])
            missing = np.setdiff1d(full, mat[i])
            raise NotLatinSquare(kind, i, int(missing[0]))
    ids = np.flatnonzero((arr == full).all(axis=1) & (arr.T == full).all(axis=1))
    if ids.size == 0:
        raise NoIdentity()
    return FiniteLoop(arr, int(ids[0]))


def parse_table(text):
    """Parse the Cayley-table text format (size line, then ``n`` rows)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty table file")
    try:
        n = int(lines[0][0])
        rows = [[int(tok) for tok in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise InputError(f"non-integer token: {exc}") from None
    if n > MAX_ORDER:
        raise SizeOverflow(f"table of order {n} exceeds the maximum order {MAX_ORDER}")
    if len(lines[0]) != 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"expected {n} rows of {n} entries after the size line")
    return validate(rows)


def format_table(L):
    rows = "\n".join(" ".join(map(str, row)) for row in L.table.tolist())
    return f"{L.order}\n{rows}\n"


def load_loop(path):
    return parse_table(Path(path).read_text())


def save_loop(L, path):
    Path(path).write_text(format_table(L))


class Subloop:
    """A closed subset of a parent loop, kept as a sorted member tuple."""

    def __init__(self, parent, members):
        self.parent = parent
        self.members = tuple(sorted(int(m) for m in members))

    @classmethod
    def from_mask(cls, parent, mask):
        return cls(parent, np.flatnonzero(mask).tolist())

    @property
    def order(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return bool(self.mask[x])

    def __eq__(self, other):
        return (
            isinstance(other, Subloop)
            and self.members == other.members
            and (self.parent is other.parent or self.parent == other.parent)
        )

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"Subloop(order={self.order}, of {self.parent!r})"

    def __le__(self, other):
        return set(self.members) <= set(other.members)

    @cached_property
    def index_array(self):
        return np.array(self.members, dtype=np.int64)

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def is_closed(self):
        idx = self.index_array
        sub = np.ix_(idx, idx)
        P = self.parent
        return bool(self.mask[P.table[sub]].all() and self.mask[P.ldiv[sub]].all())

    def as_loop(self):
        """The subloop as a standalone loop plus the embedding into the parent."""
        idx = self.index_array
        relabel = np.full(self.parent.order, -1, dtype=np.int64)
        relabel[idx] = np.arange(len(idx))
        table = relabel[self.parent.table[np.ix_(idx, idx)]]
        sub = FiniteLoop(table, relabel[self.parent.identity])
        return sub, LoopMorphism(sub, self.parent, idx)


class LoopMorphism:
    """A map between loops given by its image table."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.map = np.asarray(images, dtype=np.int64)

    def __call__(self, x):
        return int(self.map[x])

    def check(self):
        """Exhaustively verify ``f(xy) == f(x) f(y)``."""
        f = self.map
        lhs = f[self.source.table]
        rhs = self.target.table[f[:, None], f[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return failure("morphism.multiplicative", bad[0].tolist())
        return CheckReport("morphism.multiplicative", count=self.source.order**2)

    def kernel(self):
        return Subloop(self.source, np.flatnonzero(self.map == self.target.identity).tolist())

    def preimage(self, sub):
        return Subloop(self.source, np.flatnonzero(sub.mask[self.map]).tolist())

    def image(self):
        return Subloop(self.target, np.unique(self.map).tolist())


# -- closure and derived structures ------------------------------------------


def close_mask(L, mask, fresh=None):
    """Smallest subloop mask containing ``mask`` and the identity.

    Worklist closure under multiplication; in a finite loop a multiplicatively
    closed set is closed under both divisions too.  When the caller knows the
    set is already closed apart from the elements ``fresh``, only products
    involving those are formed.
    """
    mask = mask.copy()
    mask[L.identity] = True
    T = L.table
    cur = np.flatnonzero(mask)
    new = cur if fresh is None else np.asarray(fresh, dtype=np.int64)
    while new.size:
        prods = np.concatenate([T[np.ix_(new, cur)].ravel(), T[np.ix_(cur, new)].ravel()])
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        cur = np.flatnonzero(mask)
    return mask


def generate(L, gens):
    mask = np.zeros(L.order, dtype=bool)
    mask[list(gens)] = True
    return Subloop.from_mask(L, close_mask(L, mask))


def whole(L):
    return Subloop(L, range(L.order))


def trivial(L):
    return Subloop(L, [L.identity])


def is_normal(L, H):
    """Whether ``H`` is a normal subloop of ``L``.

    For commutative loops this is invariance under the inner mapping group
    generators.  That group is built from left translations only, which is
    not enough in general, so other loops are checked against the coset
    conditions ``xH = Hx``, ``x(yH) = (xy)H`` and ``(Hx)y = H(xy)``.
    """
    from .multgroup import inner_mapping_group

    if H.order in (1, L.order):
        return True
    idx = H.index_array
    if not is_commutative(L).passed:
        return _normal_by_cosets(L, idx)
    for phi in inner_mapping_group(L).generators:
        if not H.mask[np.asarray(phi.images)[idx]].all():
            return False
    return True


def _normal_by_cosets(L, idx):
    T = L.table
    left = np.sort(T[:, idx], axis=1)
    right = np.sort(T[idx, :].T, axis=1)
    if (left != right).any():
        return False
    for x in range(L.order):
        if (np.sort(T[x][left], axis=1) != left[T[x]]).any():
            return False
        if (np.sort(T[right, x], axis=1) != right[T[:, x]]).any():
            return False
    return True


def coset_labels(L, H):
    """Label each element by its left coset ``xH``; raise if not a congruence.

    Labels are ordered by the smallest member of each coset.  A subloop whose
    left cosets partition ``L`` compatibly with multiplication is exactly a
    normal subloop, so this doubles as the normality guard for quotients.
    """
    T = L.table
    idx = H.index_array
    keys = T[:, idx].min(axis=1)
    bad = np.argwhere(keys[T[:, idx]] != keys[:, None])
    if bad.size:
        x, j = bad[0]
        raise NotNormal(f"cosets of H do not partition L: {int(x)}H and {int(T[x, idx[j]])}H overlap")
    reps, labels = np.unique(keys, return_inverse=True)
    labels = labels.reshape(-1)
    prod = labels[T]
    q = prod[np.ix_(reps, reps)]
    bad = np.argwhere(q[labels[:, None], labels[None, :]] != prod)
    if bad.size:
        x, y = bad[0]
        raise NotNormal(f"coset product not well defined at ({int(x)}, {int(y)})")
    return labels, reps, q


def quotient(L, H):
    """The quotient loop ``L/H`` and the projection morphism."""
    labels, reps, q = coset_labels(L, H)
    Q = FiniteLoop(q, labels[L.identity])
    return Q, LoopMorphism(L, Q, labels)


def direct_product(L1, L2, max_order=MAX_ORDER):
    """Componentwise product; element ``(i, j)`` has index ``i * |L2| + j``."""
    n1, n2 = L1.order, L2.order
    if n1 * n2 > max_order:
        raise SizeOverflow(f"product order {n1 * n2} exceeds maximum {max_order}")
    T = L1.table[:, None, :, None] * n2 + L2.table[None, :, None, :]
    return FiniteLoop(T.reshape(n1 * n2, n1 * n2), L1.identity * n2 + L2.identity)


# -- identity checks -------------------------------------------------------------


@timed_check
def is_commutative(L):
    bad = np.argwhere(L.table != L.table.T)
    if bad.size:
        return failure("loop.commutative", bad[0].tolist())
    return CheckReport("loop.commutative", count=L.order**2)


@timed_check
def is_associative(L):
    T = L.table
    for a in range(L.order):
        bad = np.argwhere(T[T[a]] != T[a][T])
        if bad.size:
            return failure("loop.associative", (a, *bad[0].tolist()))
    return CheckReport("loop.associative", count=L.order**3)


@timed_check
def is_cml(L):
    """Commutativity plus ``x^2 * yz == xy * xz`` over all triples."""
    name = "cml.defining-identity"
    comm = is_commutative(L)
    if not comm.passed:
        return failure(name, comm.counterexample, details={"failed": "commutativity"})
    T = L.table
    for x in range(L.order):
        row = T[x]
        lhs = T[T[x, x]][T]
        rhs = T[row[:, None], row[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return failure(name, (x, *bad[0].tolist()), details={"failed": "moufang"})
    return CheckReport(name, count=L.order**3)


@timed_check
def check_identity3(L):
    """``(x,y,z) == (y^-1,x,z) == (y,x,z)^-1 == (y,z,x)`` for all triples."""
    L.require_cml()
    name = "eq3.associator-symmetries"
    A = L.associators
    inv = L.inverses
    sides = (
        np.transpose(A[inv], (1, 0, 2)),
        inv[np.transpose(A, (1, 0, 2))],
        np.transpose(A, (2, 0, 1)),
    )
    for which, other in enumerate(sides, start=1):
        bad = np.argwhere(A != other)
        if bad.size:
            return failure(name, bad[0].tolist(), details={"form": which})
    return CheckReport(name, count=L.order**3)


def _expansion_rhs(L, A, x, y, u, v):
    """Right side of the associator expansion of ``(xy,u,v)``, left-normed."""
    T = L.table
    p = A[x, u, v]
    q = A[p, x, y]
    r = A[y, u, v]
    s = A[r, y, x]
    return T[T[T[p, q], r], s]


@timed_check
def check_identity2(L, budget=None, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES):
    """``(xy,u,v) == (x,u,v)((x,u,v),x,y)(y,u,v)((y,u,v),y,x)``.

    Exhaustive when ``n**4`` fits the budget, otherwise a seeded sample.
    """
    L.require_cml()
    name = "eq2.associator-expansion"
    budget = default_budget() if budget is None else budget
    n, T, A = L.order, L.table, L.associators
    if n**4 <= budget:
        y = np.arange(n)[:, None, None]
        u = np.arange(n)[None, :, None]
        v = np.arange(n)[None, None, :]
        for x in range(n):
            lhs = A[T[x][y], u, v]
            rhs = _expansion_rhs(L, A, x, y, u, v)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                return failure(name, (x, *bad[0].tolist()))
        return CheckReport(name, count=n**4)
    rng = np.random.default_rng(seed)
    done = 0
    while done < samples:
        k = min(200_000, samples - done)
        x, y, u, v = rng.integers(0, n, size=(4, k))
        lhs = A[T[x, y], u, v]
        rhs = _expansion_rhs(L, A, x, y, u, v)
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = bad[0]
            return failure(name, (x[i], y[i], u[i], v[i]), mode=SAMPLED, seed=seed, count=done + k)
        done += k
    return CheckReport(name, mode=SAMPLED, seed=seed, count=samples)
