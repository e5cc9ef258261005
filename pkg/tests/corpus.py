"""Permutation groups with brute-force reference data."""

from functools import cached_property

import oracles
from oracles import cycle


def _regular(table):
    """Right-regular representation: g acts by x -> x*g, so products compose left first."""
    n = len(table)
    return [tuple(table[x][g] for x in range(n)) for g in range(n)]


def _quaternion_table():
    # Elements 0..7 = 1, -1, i, -i, j, -j, k, -k.
    units = {"1": (1, "1"), "i": (1, "i"), "j": (1, "j"), "k": (1, "k")}
    rule = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for u in units for s in (1, -1)]
    pos = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = rule[(u1, u2)]
            row.append(pos[(s * s1 * s2, u)])
        table.append(row)
    return table


class Case:
    def __init__(self, name, degree, gens):
        self.name = name
        self.degree = degree
        self.gens = [tuple(g) for g in gens]

    def __repr__(self):
        return self.name

    @cached_property
    def elements(self):
        return oracles.group_closure(self.gens, self.degree)

    @cached_property
    def center(self):
        return oracles.group_center(self.elements, self.gens)

    @cached_property
    def nilpotency_class(self):
        return oracles.group_nilpotency_class(self.elements, self.gens)

    @property
    def probe(self):
        """A subset to centralize: the first generator and its square."""
        if not self.gens:
            return []
        g = self.gens[0]
        return [g, oracles.pmul(g, g)]


def _dihedral(n):
    rot = cycle(n, tuple(range(n)))
    ref = tuple((-i) % n for i in range(n))
    return Case(f"D{n}", n, [rot, ref])


def _abelian_mult_group(name, table):
    """The multiplication group of an abelian group loop: its left translations."""
    return Case(name, len(table), [tuple(row) for row in table])


CORPUS = [
    Case("trivial", 3, []),
    Case("C5", 5, [cycle(5, (0, 1, 2, 3, 4))]),
    Case("C12", 12, [cycle(12, tuple(range(12)))]),
    _dihedral(4),
    _dihedral(5),
    _dihedral(6),
    _dihedral(8),
    Case("S3", 3, [cycle(3, (0, 1, 2)), cycle(3, (0, 1))]),
    Case("S4", 4, [cycle(4, (0, 1, 2, 3)), cycle(4, (0, 1))]),
    Case("S5", 5, [cycle(5, (0, 1, 2, 3, 4)), cycle(5, (0, 1))]),
    Case("A4", 4, [cycle(4, (0, 1, 2)), cycle(4, (1, 2, 3))]),
    Case("A5", 5, [cycle(5, (0, 1, 2)), cycle(5, (2, 3, 4))]),
    Case("Q8", 8, _regular(_quaternion_table())),
    Case("S3xC3", 6, [cycle(6, (0, 1, 2)), cycle(6, (0, 1)), cycle(6, (3, 4, 5))]),
    _abelian_mult_group("M(Z9)", oracles.cyclic_table(9)),
    _abelian_mult_group("M(Z3xZ3)", oracles.product_table(oracles.cyclic_table(3), oracles.cyclic_table(3))),
    _abelian_mult_group("M(Z2xZ4)", oracles.product_table(oracles.cyclic_table(2), oracles.cyclic_table(4))),
    _abelian_mult_group(
        "M(Z3^3)",
        oracles.product_table(
            oracles.product_table(oracles.cyclic_table(3), oracles.cyclic_table(3)), oracles.cyclic_table(3)
        ),
    ),
]

BY_NAME = {c.name: c for c in CORPUS}
