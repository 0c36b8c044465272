"""Simple root systems in simple-root coordinates with an exact bilinear form.

Every root is a tuple of ints giving its coefficients over the simple roots.
The form is normalized so that short roots have squared length 2; long roots
have squared length 4 (types B, C, F) or 6 (type G).

Labelings follow Bourbaki, with two points worth stating explicitly:

* D_r: the chain is alpha_1 ... alpha_{r-2}, and both alpha_{r-1} and
  alpha_r hang off alpha_{r-2}.
* G2: alpha_1 is the long simple root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DegeneratePair,
    DegenerateString,
    InternalInvariantViolation,
    InvalidType,
    NotARoot,
    ShapeError,
)

Root = tuple[int, ...]

_FAMILIES = "ABCDEFG"


# -- small vector helpers -------------------------------------------------

def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def scale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def height(v: Sequence) -> int:
    return sum(v)


def is_positive(v: Sequence) -> bool:
    """True for a nonzero vector whose nonzero entries are all positive."""
    return any(v) and all(x >= 0 for x in v)


# -- types ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SystemType:
    """Isomorphism class of a simple root system, e.g. ``SystemType("D", 4)``.

    Low-rank coincidences are folded into one name: C2 becomes B2 and
    B1/C1 become A1. D_r for r <= 3 is rejected since A1xA1 is not simple
    and D3 is A3.
    """

    family: str
    rank: int

    def __post_init__(self):
        fam = str(self.family).upper()
        if fam not in _FAMILIES or len(fam) != 1:
            raise InvalidType(f"unknown family {self.family!r}")
        if isinstance(self.rank, bool) or not isinstance(self.rank, int):
            raise InvalidType(f"rank must be an integer, got {self.rank!r}")
        n = self.rank
        if fam in "BC" and n == 1:
            fam = "A"
        elif fam == "C" and n == 2:
            fam = "B"
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 3,
            "D": n >= 4,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[fam]
        if not ok:
            hint = " (D3 is A3; construct that instead)" if (fam, n) == ("D", 3) else ""
            raise InvalidType(f"no simple root system {fam}{n}{hint}")
        object.__setattr__(self, "family", fam)

    @classmethod
    def parse(cls, text: str) -> "SystemType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", str(text))
        if not m:
            raise InvalidType(f"cannot parse system type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _dynkin(stype: SystemType) -> tuple[list[int], list[tuple[int, int]]]:
    """Squared lengths of the simple roots and the (0-based) diagram edges."""
    fam, n = stype.family, stype.rank
    chain = [(i, i + 1) for i in range(n - 1)]
    if fam == "A":
        return [2] * n, chain
    if fam == "B":
        return [4] * (n - 1) + [2], chain
    if fam == "C":
        return [2] * (n - 1) + [4], chain
    if fam == "D":
        return [2] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if fam == "E":
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
        return [2] * n, [(i, j) for i, j in edges if j < n]
    if fam == "F":
        return [4, 4, 2, 2], chain
    return [6, 2], chain


class RootSystem:
    """Immutable root system of a simple type.

    Use :func:`build_root_system` rather than the constructor; it caches.
    """

    def __init__(self, stype: SystemType):
        self.stype = stype
        self.rank = n = stype.rank
        lengths, edges = _dynkin(stype)
        form = [[0] * n for _ in range(n)]
        for i in range(n):
            form[i][i] = lengths[i]
        for i, j in edges:
            form[i][j] = form[j][i] = -max(lengths[i], lengths[j]) // 2
        self.form: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in form)
        cartan = []
        for i in range(n):
            row = []
            for j in range(n):
                c = Fraction(2 * form[i][j], form[i][i])
                if c.denominator != 1:
                    raise InternalInvariantViolation("non-integral Cartan entry")
                row.append(int(c))
            cartan.append(tuple(row))
        self.cartan: tuple[tuple[int, ...], ...] = tuple(cartan)
        self.simples: tuple[Root, ...] = tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n)
        )
        self.positives: tuple[Root, ...] = self._generate_positives()
        self.negatives: tuple[Root, ...] = tuple(neg(r) for r in self.positives)
        self.roots: frozenset[Root] = frozenset(self.positives) | frozenset(self.negatives)
        self._pos_index = {r: i for i, r in enumerate(self.positives)}
        # cache B*alpha for every root so pairings are a single dot product
        self._dual = {r: self._apply_form(r) for r in self.roots}
        self.highest_long, self.highest_short = self._highest()

    # -- construction helpers
    def _apply_form(self, v: Sequence) -> tuple:
        return tuple(sum(self.form[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank))

    def _generate_positives(self) -> tuple[Root, ...]:
        n = self.rank
        found = set(self.simples)
        level = list(self.simples)
        while level:
            nxt = set()
            for beta in level:
                for i, alpha in enumerate(self.simples):
                    down = 0
                    v = sub(beta, alpha)
                    while v in found:
                        down += 1
                        v = sub(v, alpha)
                    pairing = sum(self.cartan[i][j] * beta[j] for j in range(n))
                    up = down - pairing
                    if up > 0:
                        cand = add(beta, alpha)
                        if cand not in found:
                            nxt.add(cand)
            found |= nxt
            level = sorted(nxt)
        return tuple(sorted(found, key=lambda r: (height(r), r)))

    def _highest(self) -> tuple[Root, Root]:
        lengths = {self.norm2(r) for r in self.positives}
        long_len, short_len = max(lengths), min(lengths)
        hl = max((r for r in self.positives if self.norm2(r) == long_len), key=lambda r: (height(r), r))
        hs = max((r for r in self.positives if self.norm2(r) == short_len), key=lambda r: (height(r), r))
        for d in (hl, hs):
            if any(self.inner(d, a) < 0 for a in self.simples):
                raise InternalInvariantViolation(f"highest root {d} is not dominant")
        return hl, hs

    # -- queries
    def is_root(self, v: Sequence) -> bool:
        return tuple(v) in self.roots

    def check_root(self, v: Sequence) -> Root:
        v = tuple(v)
        if len(v) != self.rank:
            raise ShapeError(f"expected a vector of length {self.rank}, got {len(v)}")
        if v not in self.roots:
            raise NotARoot(f"{v} is not a root of {self.stype}")
        return v

    def positive_index(self, r: Root) -> int:
        return self._pos_index[r]

    def inner(self, u: Sequence, v: Sequence):
        """The form on two coordinate vectors (no validation)."""
        du = self._dual.get(u)
        if du is None:
            du = self._apply_form(u)
        return sum(a * b for a, b in zip(du, v))

    def norm2(self, u: Sequence):
        return self.inner(u, u)

    def is_long(self, r: Root) -> bool:
        return self.norm2(r) == self.norm2(self.highest_long)

    def __repr__(self) -> str:
        return f"RootSystem({self.stype})"

    def __reduce__(self):
        return (build_root_system, (self.stype,))


@lru_cache(maxsize=None)
def build_root_system(stype: SystemType | str) -> RootSystem:
    if isinstance(stype, str):
        stype = SystemType.parse(stype)
    return RootSystem(stype)


def all_types(max_rank: int = 8) -> list[SystemType]:
    """Every canonical simple type of rank at most ``max_rank``."""
    out = []
    for fam, lo in (("A", 1), ("B", 2), ("C", 3), ("D", 4)):
        out += [SystemType(fam, n) for n in range(lo, max_rank + 1)]
    out += [SystemType("E", n) for n in (6, 7, 8) if n <= max_rank]
    if max_rank >= 4:
        out.append(SystemType("F", 4))
    if max_rank >= 2:
        out.append(SystemType("G", 2))
    return out


def _vec(rs: RootSystem, v: Sequence) -> tuple:
    v = tuple(v)
    if len(v) != rs.rank:
        raise ShapeError(f"expected a vector of length {rs.rank}, got {len(v)}")
    return v


def form_value(rs: RootSystem, a: Sequence, b: Sequence):
    """The positive definite form on root coordinates; exact int or Fraction."""
    return rs.inner(_vec(rs, a), _vec(rs, b))


def cartan_int(rs: RootSystem, a: Sequence, b: Sequence) -> int:
    """``2<a,b>/<a,a>`` for a root ``a`` and any lattice vector ``b``."""
    a = rs.check_root(a)
    b = _vec(rs, b)
    val = Fraction(2 * rs.inner(a, b), rs.norm2(a))
    if val.denominator != 1:
        raise InternalInvariantViolation(f"2<{a},{b}>/<{a},{a}> = {val} is not an integer")
    return int(val)


def root_string(rs: RootSystem, alpha: Sequence, beta: Sequence) -> tuple[int, int]:
    """Return ``(p, q)`` with ``beta - p*alpha .. beta + q*alpha`` the alpha-string."""
    alpha, beta = rs.check_root(alpha), rs.check_root(beta)
    if beta == alpha or beta == neg(alpha):
        raise DegenerateString("the string of a root through itself is not defined")
    p = 0
    while sub(beta, scale(p + 1, alpha)) in rs.roots:
        p += 1
    q = 0
    while add(beta, scale(q + 1, alpha)) in rs.roots:
        q += 1
    return p, q


def is_strongly_orthogonal(rs: RootSystem, a: Sequence, b: Sequence) -> bool:
    a, b = rs.check_root(a), rs.check_root(b)
    if a == b or a == neg(b):
        raise DegeneratePair("strong orthogonality needs two roots other than +-each other")
    return add(a, b) not in rs.roots and sub(a, b) not in rs.roots


def pairwise_strongly_orthogonal(rs: RootSystem, roots: Iterable[Root]) -> bool:
    roots = list(roots)
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            if add(a, b) in rs.roots or sub(a, b) in rs.roots:
                return False
    return True


def dominant_roots(rs: RootSystem) -> tuple[Root, Root]:
    """``(highest_long, highest_short)``; both equal when simply laced."""
    return rs.highest_long, rs.highest_short


def to_json(rs: RootSystem) -> dict:
    return {
        "type": str(rs.stype),
        "cartan": [list(r) for r in rs.cartan],
        "positives": [list(r) for r in rs.positives],
        "roots": [list(r) for r in rs.positives + rs.negatives],
    }
