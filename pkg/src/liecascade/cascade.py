"""Strongly orthogonal root sets, chain cascades and the normal form for them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import exact
from .diagram import DiagramAut, check_aut, induced_lattice_map, standard_flip
from .errors import (
    CounterexampleFound,
    InternalInvariantViolation,
    InvalidCount,
    InvalidIndex,
    PreconditionViolated,
    ShapeError,
)
from .rootsys import (
    Root,
    RootSystem,
    SystemType,
    build_root_system,
    cartan_int,
    height,
    is_positive,
    is_strongly_orthogonal,
    pairwise_strongly_orthogonal,
)
from .weyl import WeylWord, apply


@dataclass(frozen=True)
class OrthoSet:
    """Ordered tuple of distinct positive roots, pairwise strongly orthogonal.

    Build through :meth:`of`, which validates against a root system.
    """

    roots: tuple[Root, ...] = ()

    @classmethod
    def of(cls, rs: RootSystem, roots: Iterable[Sequence[int]]) -> "OrthoSet":
        roots = tuple(rs.check_root(r) for r in roots)
        if len(set(roots)) != len(roots):
            raise PreconditionViolated("repeated root")
        if not all(is_positive(r) for r in roots):
            raise PreconditionViolated("roots must be positive")
        if not pairwise_strongly_orthogonal(rs, roots):
            raise PreconditionViolated(f"{roots} is not pairwise strongly orthogonal")
        return cls(roots)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def as_set(self) -> frozenset:
        return frozenset(self.roots)

    def sorted(self) -> tuple[Root, ...]:
        return tuple(sorted(self.roots, key=lambda r: (-height(r), r)))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.roots]


@dataclass(frozen=True)
class RationalSubspace:
    """Subspace of the coordinate space, stored by a canonical integer basis."""

    basis: tuple[tuple[int, ...], ...]
    ambient: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "RationalSubspace":
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in vectors):
            raise ShapeError(f"vectors must have length {ambient}")
        return cls(tuple(exact.row_space_basis(vectors, ambient)), ambient)

    @classmethod
    def full(cls, n: int) -> "RationalSubspace":
        return cls.span([tuple(int(i == j) for j in range(n)) for i in range(n)], n)

    @classmethod
    def zero(cls, n: int) -> "RationalSubspace":
        return cls((), n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return exact.in_span(self.basis, v)


def omega_from_subspace(rs: RootSystem, s: RationalSubspace) -> tuple[Root, ...]:
    """Positive roots vanishing on ``s`` (pairing through the form)."""
    return tuple(r for r in rs.positives if all(rs.inner(r, x) == 0 for x in s.basis))


def vanishing_subspace(rs: RootSystem, roots: Iterable[Root]) -> RationalSubspace:
    """Common kernel of the given roots, viewed as functionals via the form."""
    rows = [rs._apply_form(r) for r in roots]
    return RationalSubspace(tuple(exact.kernel(rows, rs.rank)), rs.rank)


def decomposition_dims(rs: RootSystem, roots: Sequence[Root]) -> tuple[int, int]:
    """``(dim span(roots), dim common kernel)``; they add up to the rank."""
    return exact.rank(roots), vanishing_subspace(rs, roots).dim


# -- parabolic bookkeeping --------------------------------------------------

def _support(v: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(v) if x)


def _components(rs: RootSystem, nodes: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected pieces of a set of 0-based diagram nodes, sorted."""
    nodes = set(nodes)
    out = []
    while nodes:
        start = min(nodes)
        comp, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for u in list(nodes):
                if u not in comp and rs.cartan[v][u]:
                    comp.add(u)
                    todo.append(u)
        nodes -= comp
        out.append(tuple(sorted(comp)))
    out.sort()
    return out


def _highest_in(rs: RootSystem, comp: Sequence[int]) -> Root:
    comp = set(comp)
    return max((r for r in rs.positives if _support(r) <= comp), key=lambda r: (height(r), r))


def kostant_cascade(rs: RootSystem) -> OrthoSet:
    """Highest root, then highest roots of the perpendicular components, recursively."""
    out = []
    queue = _components(rs, range(rs.rank))
    while queue:
        comp = queue.pop(0)
        theta = _highest_in(rs, comp)
        out.append(theta)
        queue += _components(rs, (i for i in comp if rs.inner(theta, rs.simples[i]) == 0))
    return OrthoSet.of(rs, out)


def parity(rs: RootSystem, omega: Iterable[Root], beta: Sequence[int]) -> int:
    """``sum over alpha in omega of 2<alpha,beta>/<alpha,alpha>``."""
    return sum(cartan_int(rs, a, beta) for a in omega)


# -- normal form -----------------------------------------------------------

def _orbit_generator(rs: RootSystem, orbit: tuple[int, ...]) -> tuple[int, ...]:
    """Longest element of the parabolic subgroup on one orbit of simple nodes.

    Commutes with the automorphism because the orbit is stable under it.
    """
    idx = [i - 1 for i in orbit]
    orth = all(rs.cartan[a][b] == 0 for a in idx for b in idx if a != b)
    if orth:
        return tuple(orbit)
    if len(orbit) == 2:
        i, j = orbit
        return (i, j, i)
    raise InternalInvariantViolation(f"unexpected orbit shape {orbit}")


def commuting_generators(rs: RootSystem, nu: DiagramAut) -> list[WeylWord]:
    """One Weyl word per orbit of ``nu`` on the simple nodes."""
    return [WeylWord(_orbit_generator(rs, o)) for o in nu.orbits()]


def normal_form(rs: RootSystem, omega: OrthoSet, nu: DiagramAut) -> tuple[WeylWord, OrthoSet]:
    """Move ``omega`` to its standard position by words commuting with ``nu``.

    The root of largest height (then largest coefficients) in the current
    component is raised to that component's dominant root by orbit
    generators; the remaining roots then live in the perpendicular
    parabolic, which is handled the same way.
    """
    check_aut(rs, nu)
    m = induced_lattice_map(rs, nu)
    for r in omega:
        if m(r) != r:
            raise PreconditionViolated(f"{r} is not fixed by the diagram automorphism")
    orbit_of = {}
    for o in nu.orbits():
        for i in o:
            orbit_of[i - 1] = o
    current = [tuple(r) for r in omega]
    applied: list[tuple[int, ...]] = []
    queue = [(tuple(range(rs.rank)), list(range(len(current))))]
    while queue:
        comp, members = queue.pop(0)
        if not members:
            continue
        cset = set(comp)
        j = max(members, key=lambda k: (height(current[k]), current[k]))
        while True:
            for i in comp:
                if rs.inner(current[j], rs.simples[i]) < 0:
                    orb = orbit_of[i]
                    if not set(o - 1 for o in orb) <= cset:
                        raise InternalInvariantViolation("component is not stable under the automorphism")
                    gen = WeylWord(_orbit_generator(rs, orb))
                    current = [apply(rs, gen, r) for r in current]
                    applied.append(gen.letters)
                    break
            else:
                break
        top = current[j]
        perp = [i for i in comp if rs.inner(top, rs.simples[i]) == 0]
        rest = [k for k in members if k != j]
        for sub in _components(rs, perp):
            inside = [k for k in rest if _support(current[k]) <= set(sub)]
            queue.append((sub, inside))
            rest = [k for k in rest if k not in inside]
        if rest:
            raise InternalInvariantViolation("a root escaped the perpendicular parabolic")
    letters = tuple(x for gen in reversed(applied) for x in gen)
    return WeylWord(letters), OrthoSet.of(rs, current)


# -- standard chains -------------------------------------------------------

def a_series_root(n: int, t: int) -> Root:
    """``alpha_t + ... + alpha_{n-t+1}`` in A_n."""
    return tuple(int(t <= i + 1 <= n - t + 1) for i in range(n))


def a_series_chain(n: int, m: int) -> OrthoSet:
    if not 1 <= m <= (n + 1) // 2:
        raise InvalidCount(f"need 1 <= m <= {(n + 1) // 2} for A{n}, got {m}")
    rs = build_root_system(SystemType("A", n))
    return OrthoSet.of(rs, [a_series_root(n, t) for t in range(1, m + 1)])


def d_series_root(r: int, t: int) -> Root:
    """``alpha_t + 2(alpha_{t+1} + ... + alpha_{r-2}) + alpha_{r-1} + alpha_r``."""
    if not 1 <= t <= r - 2:
        raise InvalidIndex(f"index {t} out of range 1..{r - 2}")
    out = [0] * r
    out[t - 1] = 1
    for i in range(t, r - 2):
        out[i] = 2
    out[r - 2] = out[r - 1] = 1
    return tuple(out)


def d_series_chain(r: int, odd_indices: Sequence[int]) -> OrthoSet:
    for t in odd_indices:
        if t % 2 == 0 or not 1 <= t <= r - 2:
            raise InvalidIndex(f"indices must be odd and at most {r - 2}, got {t}")
    rs = build_root_system(SystemType("D", r))
    return OrthoSet.of(rs, [d_series_root(r, t) for t in odd_indices])


def d_form1(r: int, m: int) -> OrthoSet:
    """``{delta_1, alpha_1, delta_3, alpha_3, ..., delta_m, alpha_m}``."""
    if m % 2 == 0 or not 1 <= m <= r - 2:
        raise InvalidIndex(f"m must be odd and at most {r - 2}, got {m}")
    rs = build_root_system(SystemType("D", r))
    roots = []
    for t in range(1, m + 1, 2):
        roots += [d_series_root(r, t), rs.simples[t - 1]]
    return OrthoSet.of(rs, roots)


def d_form2_index(r: int) -> int:
    return r - 2 if r % 2 else r - 3


def d_form2(r: int) -> OrthoSet:
    """``{delta_1, delta_3, ..., delta_k}`` with ``k`` the largest odd index."""
    return d_series_chain(r, range(1, d_form2_index(r) + 1, 2))


@dataclass(frozen=True)
class DForm:
    kind: str  # "Form1" or "Form2"
    index: int
    word: WeylWord
    normal: OrthoSet


def interior_parity_ok(rs: RootSystem, omega: Iterable[Root]) -> bool:
    """Parity is even on every simple root fixed by the flip, alpha_1..alpha_{r-2}."""
    omega = list(omega)
    return all(parity(rs, omega, rs.simples[i]) % 2 == 0 for i in range(rs.rank - 2))


def classify_d_normal_form(rs: RootSystem, omega: OrthoSet, nu: DiagramAut | None = None) -> DForm:
    """Normalize a flip-fixed set in D_r and name which standard form it reached."""
    if rs.stype.family != "D":
        raise PreconditionViolated("classification is for type D")
    r = rs.rank
    flip = standard_flip(rs)
    if nu is None:
        nu = flip
    if nu != flip:
        raise PreconditionViolated(f"expected the flip {flip.perm}, got {nu.perm}")
    if not len(omega):
        raise PreconditionViolated("set must be nonempty")
    if not interior_parity_ok(rs, omega):
        raise PreconditionViolated("parity is odd on an interior simple root")
    word, normal = normal_form(rs, omega, nu)
    got = normal.as_set()
    for m in range(1, r - 1, 2):
        if got == d_form1(r, m).as_set():
            return DForm("Form1", m, word, normal)
    if got == d_form2(r).as_set():
        return DForm("Form2", d_form2_index(r), word, normal)
    raise CounterexampleFound(
        f"normal form {sorted(got)} matches neither standard form",
        witness={"input": [list(x) for x in omega], "normal": [list(x) for x in normal]},
    )


# -- exhaustion ------------------------------------------------------------

def strongly_orthogonal_subsets(rs: RootSystem, candidates: Iterable[Root]) -> list[tuple[Root, ...]]:
    """Every nonempty subset of ``candidates`` that is pairwise strongly orthogonal."""
    cands = list(candidates)
    adj = {
        a: {b for b in cands if b != a and is_strongly_orthogonal(rs, a, b)}
        for a in cands
    }
    out: list[tuple[Root, ...]] = []

    def grow(current: list[Root], rest: list[Root]) -> None:
        if current:
            out.append(tuple(current))
        for i, a in enumerate(rest):
            grow(current + [a], [b for b in rest[i + 1:] if b in adj[a]])

    grow([], cands)
    return out


@dataclass(frozen=True)
class DExhaustion:
    rank: int
    subsets: int
    eligible: int
    form1: int
    form2: int
    counterexamples: tuple

    @property
    def ok(self) -> bool:
        return not self.counterexamples and self.form1 + self.form2 == self.eligible

    def to_json(self) -> dict:
        return {
            "type": f"D{self.rank}",
            "subsets": self.subsets,
            "eligible": self.eligible,
            "form1": self.form1,
            "form2": self.form2,
            "counterexamples": [[list(r) for r in c] for c in self.counterexamples],
        }


def d_normal_form_exhaustion(r: int) -> DExhaustion:
    """Classify every flip-fixed strongly orthogonal subset of positive roots in D_r.

    Subsets failing :func:`interior_parity_ok` are counted but not classified.
    """
    rs = build_root_system(SystemType("D", r))
    flip = standard_flip(rs)
    m = induced_lattice_map(rs, flip)
    fixed = [x for x in rs.positives if m(x) == x]
    subsets = strongly_orthogonal_subsets(rs, fixed)
    eligible = form1 = form2 = 0
    bad = []
    for sub in subsets:
        if not interior_parity_ok(rs, sub):
            continue
        eligible += 1
        try:
            kind = classify_d_normal_form(rs, OrthoSet.of(rs, sub), flip).kind
        except CounterexampleFound:
            bad.append(sub)
            continue
        if kind == "Form1":
            form1 += 1
        else:
            form2 += 1
    return DExhaustion(r, len(subsets), eligible, form1, form2, tuple(bad))
