"""Built-in loops: cyclic groups, elementary abelian 3-groups, the order-81 CML and products.

Construction specs are small strings, e.g. ``cyclic(9)``, ``elementary_abelian_3(2)``,
``cml81`` or ``product(cml81, cyclic(3))``.
"""

import itertools
import re
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InputError, NotCML, SizeOverflow
from .loop import MAX_ORDER, FiniteLoop, direct_product, validate

KINDS = ("cyclic", "elementary_abelian_3", "cml81", "product")

# Standard generators of cml81 under the lexicographic indexing of GF(3)^4.
E1, E2, E3, E4 = 27, 9, 3, 1


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int = 0
    factors: Optional[Tuple["ConstructionSpec", "ConstructionSpec"]] = None

    @property
    def order(self):
        if self.kind == "cyclic":
            return self.n
        if self.kind == "elementary_abelian_3":
            return 3**self.n
        if self.kind == "cml81":
            return 81
        a, b = self.factors
        return a.order * b.order

    def __str__(self):
        if self.kind == "cml81":
            return "cml81"
        if self.kind == "product":
            return f"product({self.factors[0]}, {self.factors[1]})"
        return f"{self.kind}({self.n})"


def cyclic(n):
    return ConstructionSpec("cyclic", n)


def elementary_abelian_3(k):
    return ConstructionSpec("elementary_abelian_3", k)


def product(a, b):
    return ConstructionSpec("product", factors=(a, b))


CML81 = ConstructionSpec("cml81")

_ALIASES = {"z": "cyclic", "c": "cyclic", "ea3": "elementary_abelian_3", "e3": "elementary_abelian_3"}


def parse_spec(text):
    """Parse a construction spec string into a :class:`ConstructionSpec`."""
    pos = 0
    src = text.replace(" ", "")

    def expr():
        nonlocal pos
        m = re.match(r"[A-Za-z_][A-Za-z_0-9]*", src[pos:])
        if not m:
            raise InputError(f"bad construction spec {text!r} at offset {pos}")
        word = m.group(0)
        pos += len(word)
        short = re.fullmatch(r"([A-Za-z]+)(\d+)", word)
        if word == "cml81":
            return CML81
        if short and short.group(1).lower() in _ALIASES and not src[pos:].startswith("("):
            return ConstructionSpec(_ALIASES[short.group(1).lower()], int(short.group(2)))
        kind = _ALIASES.get(word.lower(), word)
        if kind not in KINDS or not src[pos:].startswith("("):
            raise InputError(f"unknown construction {word!r}; expected one of {', '.join(KINDS)}")
        pos += 1
        if kind == "product":
            a = expr()
            if not src[pos:].startswith(","):
                raise InputError(f"product needs two factors in {text!r}")
            pos += 1
            b = expr()
            spec = product(a, b)
        else:
            m = re.match(r"\d+", src[pos:])
            if not m:
                raise InputError(f"{kind} needs an integer argument in {text!r}")
            pos += len(m.group(0))
            spec = ConstructionSpec(kind, int(m.group(0)))
        if not src[pos:].startswith(")"):
            raise InputError(f"missing ')' in {text!r}")
        pos += 1
        return spec

    spec = expr()
    if pos != len(src):
        raise InputError(f"trailing characters in construction spec {text!r}")
    return spec


def _cyclic_table(n):
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def cml81_table():
    """(a,b,c,d)(a',b',c',d') = (a+a', b+b', c+c', d+d'+(a-a')(bc'-b'c)) over GF(3)."""
    pts = np.array(list(itertools.product(range(3), repeat=4)))
    a, b, c, d = (pts[:, i] for i in range(4))
    s = (pts[:, None, :] + pts[None, :, :]) % 3
    twist = (a[:, None] - a[None, :]) * (b[:, None] * c[None, :] - b[None, :] * c[:, None])
    s[..., 3] = (d[:, None] + d[None, :] + twist) % 3
    return s @ np.array([27, 9, 3, 1])


def coords(x):
    """GF(3)^4 coordinates of a cml81 element index."""
    return tuple(int(v) for v in np.base_repr(x, 3).zfill(4))


def index(coord):
    a, b, c, d = coord
    return 27 * a + 9 * b + 3 * c + d


def build(spec, max_order=MAX_ORDER, certify=True):
    """Build a loop from a spec (string or :class:`ConstructionSpec`).

    With ``certify`` every result is checked to be a commutative Moufang loop.
    """
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.order > max_order:
        raise SizeOverflow(f"{spec} has order {spec.order} > {max_order}")
    if spec.order < 1:
        raise InputError(f"{spec} has no elements")
    if spec.kind == "cyclic":
        L = FiniteLoop(_cyclic_table(spec.n), 0)
    elif spec.kind == "elementary_abelian_3":
        L = FiniteLoop(np.zeros((1, 1), dtype=int), 0)
        for _ in range(spec.n):
            L = direct_product(L, FiniteLoop(_cyclic_table(3), 0), max_order)
    elif spec.kind == "cml81":
        L = validate(cml81_table())
    else:
        a, b = spec.factors
        L = direct_product(build(a, max_order, False), build(b, max_order, False), max_order)
    if certify and not L.cml_report.passed:
        raise NotCML(L.cml_report)
    return L
