"""Dynkin diagram automorphisms and the folded root systems they fix."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantViolation, NoOuter, NotAFolding, PreconditionViolated
from .rootsys import RootSystem, SystemType, build_root_system, is_positive
from .weyl import LatticeMap, recognize, simple_basis


@dataclass(frozen=True, order=True)
class DiagramAut:
    """Permutation of the simple roots; ``perm[i-1]`` is the image of node ``i``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise PreconditionViolated(f"{perm} is not a permutation of 1..{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "DiagramAut":
        return cls(tuple(range(1, n + 1)))

    @property
    def rank(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def is_identity(self) -> bool:
        return self.perm == tuple(range(1, self.rank + 1))

    def compose(self, other: "DiagramAut") -> "DiagramAut":
        """``self`` after ``other``."""
        return DiagramAut(tuple(self.perm[other.perm[i] - 1] for i in range(self.rank)))

    def inverse(self) -> "DiagramAut":
        inv = [0] * self.rank
        for i, p in enumerate(self.perm):
            inv[p - 1] = i + 1
        return DiagramAut(tuple(inv))

    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur.compose(self)
            k += 1
        return k

    def orbits(self) -> list[tuple[int, ...]]:
        """Orbits on 1-based node labels, each listed from its smallest node."""
        seen, out = set(), []
        for i in range(1, self.rank + 1):
            if i in seen:
                continue
            orb, j = [], i
            while j not in seen:
                seen.add(j)
                orb.append(j)
                j = self(j)
            out.append(tuple(orb))
        return out


def _preserves_cartan(rs: RootSystem, perm: tuple[int, ...]) -> bool:
    a = rs.cartan
    return all(a[perm[i] - 1][perm[j] - 1] == a[i][j] for i in range(rs.rank) for j in range(rs.rank))


def check_aut(rs: RootSystem, nu: DiagramAut) -> DiagramAut:
    if nu.rank != rs.rank or not _preserves_cartan(rs, nu.perm):
        raise PreconditionViolated(f"{nu.perm} is not a diagram automorphism of {rs.stype}")
    return nu


def diagram_automorphisms(rs: RootSystem) -> list[DiagramAut]:
    """All Cartan-preserving permutations, identity first then lexicographic."""
    n, a = rs.rank, rs.cartan
    found = []

    def extend(prefix: list[int], used: set[int]):
        i = len(prefix)
        if i == n:
            found.append(DiagramAut(tuple(p + 1 for p in prefix)))
            return
        for c in range(n):
            if c in used or a[c][c] != a[i][i]:
                continue
            if all(a[c][prefix[j]] == a[i][j] and a[prefix[j]][c] == a[j][i] for j in range(i)):
                prefix.append(c)
                used.add(c)
                extend(prefix, used)
                prefix.pop()
                used.discard(c)

    extend([], set())
    found.sort()
    return found


def induced_lattice_map(rs: RootSystem, nu: DiagramAut) -> LatticeMap:
    check_aut(rs, nu)
    cols = [rs.simples[nu(i + 1) - 1] for i in range(rs.rank)]
    return LatticeMap.from_columns(cols)


def standard_flip(rs: RootSystem) -> DiagramAut:
    """The usual order-2 automorphism of A_n (n > 1), D_r or E6."""
    fam, n = rs.stype.family, rs.rank
    if fam == "A" and n > 1:
        return DiagramAut(tuple(range(n, 0, -1)))
    if fam == "D":
        return DiagramAut(tuple(range(1, n - 1)) + (n, n - 1))
    if fam == "E" and n == 6:
        return DiagramAut((6, 2, 5, 4, 3, 1))
    raise NoOuter(f"{rs.stype} has no nontrivial diagram automorphism")


def triality(rs: RootSystem) -> DiagramAut:
    """Order-3 rotation of D4 sending node 1 to 3, 3 to 4 and 4 to 1."""
    if rs.stype != SystemType("D", 4):
        raise NoOuter("triality exists only for D4")
    return DiagramAut((3, 2, 4, 1))


# -- folding --------------------------------------------------------------

@dataclass(frozen=True)
class FoldedSystem:
    """Restricted roots on the fixed subspace of a diagram automorphism."""

    roots: frozenset
    simples: tuple
    stype: SystemType
    restrictions: frozenset  # every restricted root, doubles included


def restrict(rs: RootSystem, nu: DiagramAut, v) -> tuple:
    """Average of ``v`` over its orbit under ``nu``."""
    m = induced_lattice_map(rs, nu)
    k = nu.order()
    total = [Fraction(0)] * rs.rank
    cur = tuple(v)
    for _ in range(k):
        total = [t + c for t, c in zip(total, cur)]
        cur = m(cur)
    return tuple(t / k for t in total)


def fold(rs: RootSystem, nu: DiagramAut) -> FoldedSystem:
    if check_aut(rs, nu).is_identity():
        raise NotAFolding("the identity automorphism does not fold anything")
    restricted = frozenset(restrict(rs, nu, r) for r in rs.roots)
    # non-reduced doubles (A_{2n}) are dropped in favour of the shorter root
    reduced = frozenset(v for v in restricted if tuple(x / 2 for x in v) not in restricted)
    simples = simple_basis(v for v in reduced if is_positive(v))
    gram = [[rs.inner(a, b) for b in simples] for a in simples]
    comps = recognize(gram)
    if len(comps) != 1:
        raise InternalInvariantViolation("folded system is not irreducible")
    return FoldedSystem(reduced, simples, comps[0][0], restricted)


def folded_fixed_type(rs: RootSystem, nu: DiagramAut) -> SystemType:
    return fold(rs, nu).stype


def min_outer_fixed_rank(stype: SystemType | str) -> int:
    rs = build_root_system(stype)
    ranks = [folded_fixed_type(rs, nu).rank for nu in diagram_automorphisms(rs) if not nu.is_identity()]
    if not ranks:
        raise NoOuter(f"{rs.stype} has no nontrivial diagram automorphism")
    return min(ranks)


@dataclass(frozen=True)
class FoldingRecord:
    source: SystemType
    order: int
    fixed_type: SystemType
    column: str


def folding_table(max_rank: int = 8) -> list[FoldingRecord]:
    """Reference folding outcomes for every source type up to ``max_rank``."""
    rows = []
    for n in range(1, max_rank // 2 + 1):
        rows.append(FoldingRecord(SystemType("A", 2 * n), 2, SystemType("B", n), "a_{2n} (k=2) -> b_n"))
    for n in range(2, (max_rank + 1) // 2 + 1):
        rows.append(FoldingRecord(SystemType("A", 2 * n - 1), 2, SystemType("C", n), "a_{2n-1} (k=2) -> c_n"))
    for n in range(4, max_rank + 1):
        rows.append(FoldingRecord(SystemType("D", n), 2, SystemType("B", n - 1), "d_n (k=2) -> b_{n-1}"))
    if max_rank >= 4:
        rows.append(FoldingRecord(SystemType("D", 4), 3, SystemType("G", 2), "d_4 (k=3) -> g_2"))
    if max_rank >= 6:
        rows.append(FoldingRecord(SystemType("E", 6), 2, SystemType("F", 4), "e_6 (k=2) -> f_4"))
    rows.sort(key=lambda r: (r.source, r.order))
    return rows
