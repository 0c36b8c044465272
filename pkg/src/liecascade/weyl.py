"""Weyl group elements as words and integer matrices on root coordinates."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    InternalInvariantViolation,
    NotARoot,
    NotWeyl,
    PreconditionViolated,
    ShapeError,
)
from .rootsys import Root, RootSystem, SystemType, height, is_positive, neg, sub

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WeylWord:
    """Product of simple reflections ``s_{l[0]} s_{l[1]} ...`` (1-based letters).

    Acting on a vector, the rightmost letter is applied first.
    """

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(x < 1 for x in letters):
            raise ShapeError(f"Weyl word letters are 1-based, got {letters}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "WeylWord") -> "WeylWord":
        """Concatenation; as maps, ``(u + v)(x) == u(v(x))``."""
        return WeylWord(self.letters + other.letters)

    def inverse(self) -> "WeylWord":
        return WeylWord(self.letters[::-1])


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix acting on column vectors of root coordinates.

    Column ``j`` holds the image of the ``j``-th simple root.
    """

    matrix: Matrix

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if any(len(row) != len(m) for row in m):
            raise ShapeError("lattice maps are square")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int) -> "LatticeMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "LatticeMap":
        n = len(columns)
        return cls(tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    def __call__(self, v: Sequence) -> tuple:
        if len(v) != self.rank:
            raise ShapeError(f"vector of length {len(v)} for a rank {self.rank} map")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """``self`` after ``other``."""
        cols = [self(other.column(j)) for j in range(self.rank)]
        return LatticeMap.from_columns(cols)

    __matmul__ = compose

    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row))

    def power(self, k: int) -> "LatticeMap":
        out = LatticeMap.identity(self.rank)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def order(self, bound: int = 10_000) -> int:
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = cur @ self
        raise InternalInvariantViolation(f"lattice map has order above {bound}")

    def inverse(self) -> "LatticeMap":
        return self.power(self.order() - 1)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


# -- reflections ----------------------------------------------------------

def _coeff(num, den):
    c = Fraction(num, den) if not isinstance(num, Fraction) else num / den
    return int(c) if c.denominator == 1 else c


def reflect(rs: RootSystem, alpha: Sequence[int], beta: Sequence) -> tuple:
    """``s_alpha(beta) = beta - (2<beta,alpha>/<alpha,alpha>) alpha``."""
    alpha = tuple(alpha)
    if alpha not in rs.roots:
        raise NotARoot(f"{alpha} is not a root of {rs.stype}")
    beta = tuple(beta)
    if len(beta) != rs.rank:
        raise ShapeError(f"expected a vector of length {rs.rank}")
    c = _coeff(2 * rs.inner(alpha, beta), rs.norm2(alpha))
    return tuple(b - c * a for a, b in zip(alpha, beta))


def simple_reflect(rs: RootSystem, i: int, v: Sequence) -> tuple:
    """Reflection in the ``i``-th simple root (0-based)."""
    c = sum(rs.cartan[i][j] * v[j] for j in range(rs.rank))
    out = list(v)
    out[i] -= c
    return tuple(out)


def reflection_map(rs: RootSystem, alpha: Sequence[int]) -> LatticeMap:
    return LatticeMap.from_columns([reflect(rs, alpha, e) for e in rs.simples])


def reflection_product(rs: RootSystem, roots: Iterable[Sequence[int]]) -> LatticeMap:
    """``s_{r0} s_{r1} ...`` for the given roots, leftmost applied last."""
    out = LatticeMap.identity(rs.rank)
    for r in roots:
        out = out @ reflection_map(rs, r)
    return out


def _check_word(rs: RootSystem, w: WeylWord) -> None:
    if any(x > rs.rank for x in w.letters):
        raise ShapeError(f"letter out of range 1..{rs.rank} in {w.letters}")


def word_to_map(rs: RootSystem, w: WeylWord) -> LatticeMap:
    _check_word(rs, w)
    cols = [apply(rs, w, e) for e in rs.simples]
    return LatticeMap.from_columns(cols)


def apply(rs: RootSystem, w: Union[WeylWord, LatticeMap], v: Sequence) -> tuple:
    """Apply a word (right to left) or a matrix to a root or rational vector."""
    v = tuple(v)
    if len(v) != rs.rank:
        raise ShapeError(f"expected a vector of length {rs.rank}")
    if isinstance(w, LatticeMap):
        return w(v)
    _check_word(rs, w)
    for letter in reversed(w.letters):
        v = simple_reflect(rs, letter - 1, v)
    return v


def dominant_representative(rs: RootSystem, beta: Sequence[int]) -> tuple[Root, WeylWord]:
    """Greedy ascent to the dominant element of ``beta``'s orbit.

    At each step the smallest index ``i`` with ``<beta, alpha_i> < 0`` is used.
    """
    beta = rs.check_root(beta)
    applied = []
    while True:
        for i, a in enumerate(rs.simples):
            if rs.inner(beta, a) < 0:
                beta = simple_reflect(rs, i, beta)
                applied.append(i + 1)
                break
        else:
            return beta, WeylWord(tuple(reversed(applied)))


def orbit(rs: RootSystem, beta: Sequence[int]) -> frozenset[Root]:
    beta = rs.check_root(beta)
    seen = {beta}
    todo = deque([beta])
    while todo:
        v = todo.popleft()
        for i in range(rs.rank):
            u = simple_reflect(rs, i, v)
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return frozenset(seen)


# -- membership and factorization ----------------------------------------

def is_root_isometry(rs: RootSystem, m: LatticeMap) -> bool:
    """True iff ``m`` maps the root set onto itself and preserves the form."""
    if m.rank != rs.rank:
        return False
    images = [m(e) for e in rs.simples]
    for i in range(rs.rank):
        for j in range(i, rs.rank):
            if rs.inner(images[i], images[j]) != rs.form[i][j]:
                return False
    return all(m(r) in rs.roots for r in rs.positives)


def weyl_decompose(rs: RootSystem, m: LatticeMap) -> tuple[WeylWord, tuple[int, ...]]:
    """Split an automorphism of the root system as ``word o perm``.

    Returns a reduced word ``w`` and a diagram permutation ``perm`` (1-based
    images) with ``m == word_to_map(w) @ perm_map``. Right multiplication by
    simple reflections strips every simple root that ``m`` sends negative;
    what survives preserves the positive roots and so permutes the simples.
    """
    if not is_root_isometry(rs, m):
        raise NotWeyl("map does not permute the roots isometrically")
    u = m
    stripped = []
    while True:
        for i in range(rs.rank):
            if not is_positive(u.column(i)):
                u = u @ reflection_map(rs, rs.simples[i])
                stripped.append(i)
                break
        else:
            break
    perm = []
    for j in range(rs.rank):
        col = u.column(j)
        if sorted(col) != [0] * (rs.rank - 1) + [1]:
            raise InternalInvariantViolation("descent did not end on a diagram permutation")
        perm.append(col.index(1))
    # m = perm o s_{i_k} ... s_{i_1}; move perm to the right by conjugation
    letters = tuple(perm[i] + 1 for i in reversed(stripped))
    return WeylWord(letters), tuple(p + 1 for p in perm)


def is_weyl_element(rs: RootSystem, m: LatticeMap) -> bool:
    try:
        _, perm = weyl_decompose(rs, m)
    except NotWeyl:
        return False
    return perm == tuple(range(1, rs.rank + 1))


def involution_factorization(rs: RootSystem, m: LatticeMap) -> list[Root] | None:
    """Mutually perpendicular roots whose reflections multiply to ``m``.

    Returns ``None`` when ``m`` is not an involution. Roots are picked
    greedily from the (-1)-eigenspace, highest first.
    """
    if not is_weyl_element(rs, m):
        raise NotWeyl("map is not an element of the Weyl group")
    if not (m @ m).is_identity():
        return None
    candidates = sorted(
        (r for r in rs.positives if m(r) == neg(r)), key=lambda r: (-height(r), tuple(-x for x in r))
    )
    chosen: list[Root] = []
    for r in candidates:
        if all(rs.inner(r, c) == 0 for c in chosen):
            chosen.append(r)
    if reflection_product(rs, chosen) != m:
        raise InternalInvariantViolation("greedy factorization does not recompose")
    return chosen


# -- subsystems -----------------------------------------------------------

@dataclass(frozen=True)
class Component:
    stype: SystemType
    simples: tuple[Root, ...]


@dataclass(frozen=True)
class Subsystem:
    roots: frozenset
    simples: tuple
    components: tuple[Component, ...]

    @property
    def positives(self) -> tuple:
        return tuple(sorted((r for r in self.roots if is_positive(r)), key=lambda r: (sum(r), r)))


def simple_basis(positives: Iterable[tuple]) -> tuple:
    """Positive roots that are not a sum of two positive roots of the set."""
    pos = sorted(set(positives), key=lambda r: (sum(r), r))
    pos_set = set(pos)
    out = []
    for r in pos:
        if not any(sub(r, a) in pos_set for a in pos if a != r):
            out.append(r)
    return tuple(out)


def recognize(gram: Sequence[Sequence]) -> list[tuple[SystemType, list[int]]]:
    """Identify the irreducible components of a simple system from its Gram matrix.

    Returns ``(type, node indices)`` per component, ordered by smallest index.
    """
    n = len(gram)
    bond = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and gram[i][j] != 0:
                a = Fraction(2 * gram[i][j]) / gram[i][i]
                b = Fraction(2 * gram[i][j]) / gram[j][j]
                bond[i][j] = int(a * b)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        todo = [start]
        seen[start] = True
        while todo:
            v = todo.pop()
            comp.append(v)
            for u in range(n):
                if bond[v][u] and not seen[u]:
                    seen[u] = True
                    todo.append(u)
        comp.sort()
        out.append((_component_type(comp, bond, gram), comp))
    return out


def _component_type(nodes: list[int], bond, gram) -> SystemType:
    r = len(nodes)
    edges = [(i, j) for i in nodes for j in nodes if i < j and bond[i][j]]
    if len(edges) != r - 1:
        raise InternalInvariantViolation("component diagram is not a tree")
    deg = {v: sum(1 for e in edges if v in e) for v in nodes}
    mult = {e: bond[e[0]][e[1]] for e in edges}
    if 3 in mult.values():
        return SystemType("G", 2)
    doubles = [e for e, k in mult.items() if k == 2]
    if doubles:
        if r == 2:
            return SystemType("B", 2)
        i, j = doubles[0]
        if r == 4 and deg[i] == 2 and deg[j] == 2:
            return SystemType("F", 4)
        end = i if deg[i] == 1 else j
        other = j if end == i else i
        return SystemType("B" if gram[end][end] < gram[other][other] else "C", r)
    branch = [v for v in nodes if deg[v] == 3]
    if not branch:
        return SystemType("A", r)
    b = branch[0]
    arms = []
    for start in (u for u in nodes if bond[b][u]):
        length, prev, cur = 1, b, start
        while True:
            nxt = [u for u in nodes if bond[cur][u] and u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return SystemType("D", r)
    return {(1, 2, 2): SystemType("E", 6), (1, 2, 3): SystemType("E", 7), (1, 2, 4): SystemType("E", 8)}[tuple(arms)]


def subsystem_from_roots(rs: RootSystem, roots: Iterable[Root]) -> Subsystem:
    roots = frozenset(roots)
    simples = simple_basis(r for r in roots if is_positive(r))
    gram = [[rs.inner(a, b) for b in simples] for a in simples]
    comps = tuple(
        Component(t, tuple(simples[i] for i in idx)) for t, idx in recognize(gram)
    )
    return Subsystem(roots, simples, comps)


def perp_subsystem(rs: RootSystem, delta: Sequence[int]) -> Subsystem:
    """Roots perpendicular to ``delta`` with their simple basis and types."""
    delta = rs.check_root(delta)
    return subsystem_from_roots(rs, (r for r in rs.roots if rs.inner(r, delta) == 0))


def chevalley_check(rs: RootSystem, m: LatticeMap, delta: Sequence[int]) -> bool:
    """Whether ``m`` lies in the group generated by reflections perpendicular to ``delta``.

    Descent inside the perpendicular subsystem: strip simple roots of the
    subsystem that ``m`` sends negative; ``m`` is in the reflection group
    exactly when what is left is the identity.
    """
    delta = rs.check_root(delta)
    if m(delta) != delta:
        raise PreconditionViolated(f"map does not fix {delta}")
    if not is_root_isometry(rs, m):
        raise NotWeyl("map does not permute the roots isometrically")
    sub_ = perp_subsystem(rs, delta)
    u = m
    while True:
        for g in sub_.simples:
            if not is_positive(u(g)):
                u = u @ reflection_map(rs, g)
                break
        else:
            return u.is_identity()


# -- enumeration at desk scale --------------------------------------------

MAX_ENUMERATION_RANK = 6


def enumerate_weyl_group(rs: RootSystem) -> list[LatticeMap]:
    """All elements of the Weyl group, breadth first from the identity."""
    if rs.rank > MAX_ENUMERATION_RANK:
        raise PreconditionViolated(f"refusing to enumerate W({rs.stype}) above rank {MAX_ENUMERATION_RANK}")
    gens = [reflection_map(rs, a) for a in rs.simples]
    start = LatticeMap.identity(rs.rank)
    seen = {start}
    order = [start]
    todo = deque([start])
    while todo:
        g = todo.popleft()
        for s in gens:
            h = s @ g
            if h not in seen:
                seen.add(h)
                order.append(h)
                todo.append(h)
    return order


def single_descent_violations(rs: RootSystem) -> list[tuple[int, LatticeMap]]:
    """Elements sending exactly one simple root negative that are not its reflection.

    Scans the whole Weyl group; an empty list confirms that such an element
    is always the reflection in that simple root.
    """
    bad = []
    for w in enumerate_weyl_group(rs):
        negatives = [i for i in range(rs.rank) if not is_positive(w.column(i))]
        if len(negatives) == 1:
            i = negatives[0]
            if w != reflection_map(rs, rs.simples[i]):
                bad.append((i + 1, w))
    return bad
