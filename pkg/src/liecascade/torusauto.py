"""Finite-order automorphisms of the root lattice and the data they cut out.

A :class:`TorusAut` is ``w o nu`` with ``w`` in the Weyl group and ``nu`` a
diagram automorphism. A commuting pair of them determines a joint fixed
subspace and the set of roots vanishing on it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import exact
from .cascade import RationalSubspace, omega_from_subspace, parity
from .diagram import DiagramAut, check_aut, diagram_automorphisms, induced_lattice_map
from .errors import (
    IncompleteCoefficients,
    InternalInvariantViolation,
    NotCommuting,
    NotInvolution,
    PreconditionViolated,
    UnsupportedType,
)
from .rootsys import (
    Root,
    RootSystem,
    SystemType,
    build_root_system,
    cartan_int,
    is_positive,
    neg,
    pairwise_strongly_orthogonal,
)
from .weyl import (
    MAX_ENUMERATION_RANK,
    LatticeMap,
    enumerate_weyl_group,
    WeylWord,
    reflection_product,
    simple_reflect,
    weyl_decompose,
    word_to_map,
)


@dataclass(frozen=True)
class TorusAut:
    weyl_part: LatticeMap
    diag_part: DiagramAut
    compiled: LatticeMap
    order: int

    @property
    def inner(self) -> bool:
        """Torus-level proxy for an inner automorphism: trivial diagram part."""
        return self.diag_part.is_identity()

    def __call__(self, v: Sequence) -> tuple:
        return self.compiled(v)


def torus_aut(
    rs: RootSystem,
    word: WeylWord | Sequence[int] = (),
    reflections: Iterable[Sequence[int]] = (),
    nu: DiagramAut | Sequence[int] | None = None,
) -> TorusAut:
    """Build ``word o (product of reflections) o nu``."""
    if not isinstance(word, WeylWord):
        word = WeylWord(tuple(word))
    if nu is None:
        nu = DiagramAut.identity(rs.rank)
    elif not isinstance(nu, DiagramAut):
        nu = DiagramAut(tuple(nu))
    check_aut(rs, nu)
    w = word_to_map(rs, word) @ reflection_product(rs, reflections)
    compiled = w @ induced_lattice_map(rs, nu)
    return TorusAut(w, nu, compiled, compiled.order())


def torus_aut_from_map(rs: RootSystem, m: LatticeMap) -> TorusAut:
    """Factor an automorphism of the root system into Weyl and diagram parts."""
    word, perm = weyl_decompose(rs, m)
    nu = DiagramAut(perm)
    w = word_to_map(rs, word)
    if w @ induced_lattice_map(rs, nu) != m:
        raise InternalInvariantViolation("factorization does not recompose")
    return TorusAut(w, nu, m, m.order())


def _fix_rows(m: LatticeMap) -> list[tuple[int, ...]]:
    n = m.rank
    return [tuple(m.matrix[i][j] - int(i == j) for j in range(n)) for i in range(n)]


def fixed_subspace(a: TorusAut | LatticeMap) -> RationalSubspace:
    m = a.compiled if isinstance(a, TorusAut) else a
    return RationalSubspace(tuple(exact.kernel(_fix_rows(m), m.rank)), m.rank)


@dataclass(frozen=True)
class PairSetup:
    sigma1: TorusAut
    sigma2: TorusAut
    s: RationalSubspace
    omega_plus: tuple[Root, ...]

    @property
    def omega(self) -> frozenset:
        return frozenset(self.omega_plus) | frozenset(neg(r) for r in self.omega_plus)


def joint_fixed_subspace(maps: Iterable[LatticeMap]) -> RationalSubspace:
    maps = list(maps)
    rows = [row for m in maps for row in _fix_rows(m)]
    n = maps[0].rank
    return RationalSubspace(tuple(exact.kernel(rows, n)), n)


def make_pair(rs: RootSystem, sigma1: TorusAut, sigma2: TorusAut) -> PairSetup:
    a, b = sigma1.compiled, sigma2.compiled
    if a @ b != b @ a:
        raise NotCommuting("sigma1 and sigma2 do not commute")
    if sigma1.order > 2:
        raise NotInvolution(f"sigma1 has order {sigma1.order}")
    s = joint_fixed_subspace([a, b])
    return PairSetup(sigma1, sigma2, s, omega_from_subspace(rs, s))


def check_property_star(p: PairSetup) -> bool:
    """Whether sigma2 negates every root vanishing on the joint fixed space."""
    return all(p.sigma2(r) == neg(r) for r in p.omega_plus)


class ReflectionOrder(NamedTuple):
    length: int
    verified: bool
    period: int


def reflection_order(a: TorusAut | LatticeMap, alpha: Sequence[int], rs: RootSystem | None = None) -> ReflectionOrder:
    """Length of the independent run ``alpha, a(alpha), ...`` and whether it closes on ``-alpha``."""
    m = a.compiled if isinstance(a, TorusAut) else a
    alpha = tuple(alpha) if rs is None else rs.check_root(alpha)
    images = [alpha]
    nxt = m(alpha)
    while exact.rank(images + [nxt]) == len(images) + 1:
        images.append(nxt)
        nxt = m(nxt)
    length = len(images)
    verified = nxt == neg(alpha)
    period, cur = 1, m(alpha)
    while cur != alpha:
        cur = m(cur)
        period += 1
    if verified and period != 2 * length:
        raise InternalInvariantViolation(f"period {period} is not twice {length}")
    return ReflectionOrder(length, verified, period)


def orbit_hypotheses(rs: RootSystem, a: TorusAut | LatticeMap, alpha: Sequence[int]) -> bool:
    """The hypotheses under which the independent run must close on ``-alpha``.

    All images are roots, the first ``length`` of them are pairwise strongly
    orthogonal, and ``a`` fixes no nonzero vector of their span.
    """
    m = a.compiled if isinstance(a, TorusAut) else a
    alpha = rs.check_root(alpha)
    length = reflection_order(m, alpha).length
    images, cur = [], alpha
    for _ in range(length):
        if cur not in rs.roots:
            return False
        images.append(cur)
        cur = m(cur)
    # remaining images cycle through the same finite orbit
    seen, cur = set(images), alpha
    while True:
        cur = m(cur)
        if cur not in rs.roots:
            return False
        if cur == alpha:
            break
        seen.add(cur)
    if len(set(images)) != length or not _pairwise_so(rs, images):
        return False
    moved = [tuple(m(v)[i] - v[i] for i in range(rs.rank)) for v in images]
    return exact.rank(moved) == length


def _pairwise_so(rs: RootSystem, roots: Sequence[Root]) -> bool:
    for i, x in enumerate(roots):
        for y in roots[i + 1:]:
            if y == x or y == neg(x):
                return False
    return pairwise_strongly_orthogonal(rs, roots)


def signed_permutation_map(perm: Sequence[int], signs: Sequence[int]) -> LatticeMap:
    """Weyl element of B_n sending ``e_i`` to ``signs[i] e_{perm[i]}`` (0-based perm).

    Coordinates are simple roots with ``alpha_i = e_i - e_{i+1}`` and
    ``alpha_n = e_n``, so ``e_i = alpha_i + ... + alpha_n``.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)) or len(signs) != n or any(x not in (1, -1) for x in signs):
        raise PreconditionViolated("need a permutation of 0..n-1 and n signs of +-1")

    def image_of_e(i: int) -> list[int]:
        e = [0] * n
        e[perm[i]] = signs[i]
        return e

    columns = []
    for j in range(n):
        e = image_of_e(j)
        if j + 1 < n:
            e = [a - b for a, b in zip(e, image_of_e(j + 1))]
        columns.append(tuple(sum(e[: k + 1]) for k in range(n)))
    return LatticeMap.from_columns(columns)


class ReflectionOrderReport(NamedTuple):
    n: int
    elements: int
    pairs: int
    satisfying: int
    failures: tuple


def reflection_order_sweep(n: int) -> ReflectionOrderReport:
    """Every signed permutation of B_n against every root meeting the run hypotheses.

    A failure is a pair where :func:`reflection_order` is not verified or its
    period is not twice the run length.
    """
    rs = build_root_system(SystemType("B", n))
    elements = satisfying = 0
    failures = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            full = signed_permutation_map(perm, signs)
            table = {r: full(r) for r in rs.roots}
            m = lambda v, table=table, full=full: table.get(tuple(v)) or full(v)
            elements += 1
            for alpha in rs.roots:
                if not orbit_hypotheses(rs, m, alpha):
                    continue
                satisfying += 1
                try:
                    res = reflection_order(m, alpha)
                    ok = res.verified and res.period == 2 * res.length
                except InternalInvariantViolation:
                    ok = False
                if not ok:
                    failures.append((perm, signs, alpha))
    return ReflectionOrderReport(n, elements, elements * len(rs.roots), satisfying, tuple(failures))


class RankBound(NamedTuple):
    lhs: int
    rhs: int
    equality: bool


def rank_bound(p: PairSetup) -> RankBound:
    """``dim s`` against ``dim Fix(sigma1) - |omega+|``."""
    lhs = p.s.dim
    rhs = fixed_subspace(p.sigma1).dim - len(p.omega_plus)
    return RankBound(lhs, rhs, lhs == rhs)


# -- sign calculus -----------------------------------------------------------

def _no_g2(rs: RootSystem) -> None:
    if rs.stype.family == "G":
        raise UnsupportedType("the reflection-lift sign rule excludes G2")


def lift_sign(rs: RootSystem, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """``(-1) ** (2<alpha,beta>/<alpha,alpha>)``."""
    _no_g2(rs)
    return -1 if cartan_int(rs, alpha, beta) % 2 else 1


def lifts_to_involution(rs: RootSystem, omega: Iterable[Root]) -> bool:
    """Parity is even on every positive root."""
    _no_g2(rs)
    omega = list(omega)
    return all(parity(rs, omega, b) % 2 == 0 for b in rs.positives)


def odd_parity_witness(rs: RootSystem, omega: Iterable[Root]) -> Root | None:
    omega = list(omega)
    for b in rs.positives:
        if parity(rs, omega, b) % 2:
            return b
    return None


@dataclass(frozen=True)
class SignDescriptor:
    """How the torus element acts on a root space, in units of ``i*pi``.

    ``parity`` classifies the phase exponent itself: ``even`` (+1), ``odd``
    (-1) or ``half`` (a quarter turn, +-i). ``square_parity`` classifies the
    doubled exponent, i.e. the action of the square. Both read
    ``x-dependent`` when the linear part does not vanish on the root.
    """

    parity: str
    square_parity: str
    exponent: Fraction
    square_exponent: int
    functional: Fraction


def torus_sign_action(
    rs: RootSystem,
    omega: Iterable[Root],
    m_coeffs: Mapping[Root, int],
    x: Sequence,
    beta: Sequence[int],
    nu: DiagramAut | None = None,
) -> SignDescriptor:
    omega = [tuple(r) for r in omega]
    missing = [r for r in omega if r not in m_coeffs]
    if missing:
        raise IncompleteCoefficients(f"no coefficient for {missing}")
    if any(m_coeffs[r] % 2 == 0 for r in omega):
        raise PreconditionViolated("coefficients on omega must be odd")
    x = tuple(Fraction(v) for v in x)
    if len(x) != rs.rank:
        raise PreconditionViolated(f"x must have length {rs.rank}")
    if any(rs.inner(r, x) != 0 for r in omega):
        raise PreconditionViolated("x must vanish on every root of omega")
    if nu is not None and induced_lattice_map(rs, nu)(x) != tuple(-v for v in x):
        raise PreconditionViolated("x must be negated by the diagram automorphism")
    beta = rs.check_root(beta)
    exponent = sum((Fraction(m_coeffs[a] * rs.inner(a, beta), rs.norm2(a)) for a in omega), Fraction(0))
    square = 2 * exponent
    if square.denominator != 1:
        raise InternalInvariantViolation("doubled exponent is not an integer")
    functional = Fraction(rs.inner(beta, x))
    if functional != 0:
        return SignDescriptor("x-dependent", "x-dependent", exponent, int(square), functional)
    if exponent.denominator != 1:
        kind = "half"
    else:
        kind = "odd" if exponent.numerator % 2 else "even"
    return SignDescriptor(kind, "odd" if int(square) % 2 else "even", exponent, int(square), functional)


# -- property-star sweep -----------------------------------------------------

SKIP_REASONS = ("not_strongly_orthogonal", "sigma1_moves_omega", "not_adapted", "no_sign_character")


def _sign(chi: Sequence[int], v: Sequence[int]) -> int:
    s = 1
    for c, x in zip(chi, v):
        if x % 2:
            s *= c
    return s


def sign_character(rs: RootSystem, b: LatticeMap, omega_plus: Sequence[Root]) -> tuple[int, ...] | None:
    """A character of the root lattice into +-1 that is -1 on ``omega_plus`` and ``b``-invariant.

    When ``sigma1`` is trivial on the torus it is conjugation by a torus
    element, which acts on each root space by such a character; it must be -1
    on the vanishing roots and, since ``sigma1`` commutes with ``sigma2``,
    invariant under ``b``. Returns the values on the simple roots, or None.
    """
    for chi in product((1, -1), repeat=rs.rank):
        if any(_sign(chi, r) != -1 for r in omega_plus):
            continue
        if all(_sign(chi, b(e)) == c for e, c in zip(rs.simples, chi)):
            return tuple(chi)
    return None


def _automorphism_group(rs: RootSystem) -> list[LatticeMap]:
    diag = [induced_lattice_map(rs, nu) for nu in diagram_automorphisms(rs)]
    return [w @ d for w in enumerate_weyl_group(rs) for d in diag]


def involution_candidates(rs: RootSystem, auts: Sequence[LatticeMap] | None = None) -> list[LatticeMap]:
    """Automorphisms ``w o nu`` of order at most 2 with ``w`` an involution commuting with ``nu``."""
    out = []
    for a in auts if auts is not None else _automorphism_group(rs):
        if not (a @ a).is_identity():
            continue
        t = torus_aut_from_map(rs, a)
        nm = induced_lattice_map(rs, t.diag_part)
        if (t.weyl_part @ t.weyl_part).is_identity() and t.weyl_part @ nm == nm @ t.weyl_part:
            out.append(a)
    return out


@dataclass(frozen=True)
class StarFailure:
    sigma1: LatticeMap
    sigma2: LatticeMap
    omega_plus: tuple[Root, ...]
    culprit: Root

    def to_json(self) -> dict:
        return {
            "sigma1": [list(r) for r in self.sigma1.matrix],
            "sigma2": [list(r) for r in self.sigma2.matrix],
            "omega_plus": [list(r) for r in self.omega_plus],
            "culprit": list(self.culprit),
        }


@dataclass(frozen=True)
class StarReport:
    stype: str
    max_order: int
    checked: int
    skipped: dict
    failures: tuple[StarFailure, ...]

    @property
    def failed(self) -> int:
        return len(self.failures)

    def to_json(self, limit: int | None = None) -> dict:
        fails = self.failures if limit is None else self.failures[:limit]
        return {
            "type": self.stype,
            "max_order": self.max_order,
            "checked": self.checked,
            "skipped": sum(self.skipped.values()),
            "skipped_by_reason": dict(self.skipped),
            "failed": self.failed,
            "failures": [f.to_json() for f in fails],
        }


def _sweep_chunk(args) -> tuple[int, dict, list[StarFailure]]:
    stype, max_order, sigma1s = args
    rs = build_root_system(stype)
    auts = [b for b in _automorphism_group(rs) if b.order() <= max_order]
    checked, skipped, failures = 0, dict.fromkeys(SKIP_REASONS, 0), []
    fast = [exact.int_matrix(b.matrix) for b in auts]
    for a in sigma1s:
        adapted = not omega_from_subspace(rs, fixed_subspace(a))
        fa = exact.int_matrix(a.matrix)
        trivial = a.is_identity()
        for b, fb in zip(auts, fast):
            if fa * fb != fb * fa:
                continue
            om = omega_from_subspace(rs, joint_fixed_subspace([a, b]))
            if not pairwise_strongly_orthogonal(rs, om):
                skipped["not_strongly_orthogonal"] += 1
            elif any(a(r) != r for r in om):
                skipped["sigma1_moves_omega"] += 1
            elif not adapted:
                skipped["not_adapted"] += 1
            elif trivial and sign_character(rs, b, om) is None:
                skipped["no_sign_character"] += 1
            else:
                checked += 1
                bad = [r for r in om if b(r) != neg(r)]
                if bad:
                    failures.append(StarFailure(a, b, om, bad[0]))
    return checked, skipped, failures


def property_star_sweep(stype: SystemType | str, max_order: int = 6, jobs: int = 1) -> StarReport:
    """Check property star over every structured commuting pair of ``stype``.

    ``sigma1`` runs over involutive ``w o nu`` with ``w`` a product of
    commuting reflections, ``sigma2`` over all automorphisms of order at most
    ``max_order`` commuting with it. Pairs outside the torus-level shadow of
    the setup are skipped and counted by reason: the vanishing set must be
    strongly orthogonal and fixed by ``sigma1``, no root may vanish on
    ``Fix(sigma1)``, and a ``sigma1`` trivial on the torus must admit a sign
    character as in :func:`sign_character`.
    """
    rs = build_root_system(stype)
    if rs.rank > MAX_ENUMERATION_RANK:
        raise UnsupportedType(f"sweep enumerates the automorphism group; rank {rs.rank} is too large")
    sigma1s = involution_candidates(rs)
    jobs = max(1, min(jobs, len(sigma1s)))
    chunks = [(str(rs.stype), max_order, sigma1s[i::jobs]) for i in range(jobs)]
    if jobs == 1:
        results = [_sweep_chunk(chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_chunk, chunks))
    checked, skipped, failures = 0, dict.fromkeys(SKIP_REASONS, 0), []
    for c, s, f in results:
        checked += c
        for k, v in s.items():
            skipped[k] += v
        failures += f
    failures.sort(key=lambda f: (f.sigma1.matrix, f.sigma2.matrix))
    return StarReport(str(rs.stype), max_order, checked, skipped, tuple(failures))


# -- normalization of sigma2 ------------------------------------------------

@dataclass(frozen=True)
class NormalizedAut:
    """``w sigma2 w^-1 = (product of reflections in omega_plus) o nu``."""

    word: WeylWord
    nu: DiagramAut
    omega_plus: tuple[Root, ...]


def _regular_in(rs: RootSystem, basis: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """A vector of the span avoiding every root hyperplane, or None if a root kills the span."""
    if any(all(rs.inner(r, b) == 0 for b in basis) for r in rs.positives):
        return None
    t = 1
    while True:
        v = tuple(sum(t**k * b[i] for k, b in enumerate(basis)) for i in range(rs.rank))
        if all(rs.inner(r, v) != 0 for r in rs.positives):
            return v
        t += 1


def _dominate(rs: RootSystem, v: tuple) -> WeylWord:
    applied = []
    while True:
        for i, a in enumerate(rs.simples):
            if rs.inner(v, a) < 0:
                v = simple_reflect(rs, i, v)
                applied.append(i + 1)
                break
        else:
            return WeylWord(tuple(reversed(applied)))


def normalize_sigma2(rs: RootSystem, sigma2: TorusAut | LatticeMap, omega_plus: Sequence[Root]) -> NormalizedAut | None:
    """Conjugate ``sigma2`` to reflections in a perpendicular set times a diagram automorphism.

    Requires property star. Stripping the reflections leaves an automorphism
    fixing every root of the set; a regular vector it fixes is moved into the
    dominant chamber, which turns the remainder into a diagram automorphism.
    Returns None when the remainder fixes no regular vector.
    """
    b = sigma2.compiled if isinstance(sigma2, TorusAut) else sigma2
    omega_plus = [tuple(r) for r in omega_plus]
    if any(b(r) != neg(r) for r in omega_plus):
        raise PreconditionViolated("sigma2 does not negate every root of the set")
    if not pairwise_strongly_orthogonal(rs, omega_plus):
        raise PreconditionViolated("set is not pairwise strongly orthogonal")
    rest = reflection_product(rs, omega_plus) @ b
    v = _regular_in(rs, fixed_subspace(rest).basis)
    if v is None:
        return None
    word = _dominate(rs, v)
    w = word_to_map(rs, word)
    winv = word_to_map(rs, word.inverse())
    conj_word, perm = weyl_decompose(rs, w @ rest @ winv)
    if conj_word.letters:
        raise InternalInvariantViolation("conjugated remainder is not a diagram automorphism")
    nu = DiagramAut(perm)
    moved = tuple(sorted((r if is_positive(r) else neg(r) for r in (w(x) for x in omega_plus)), key=lambda r: (-sum(r), r)))
    if w @ b @ winv != reflection_product(rs, moved) @ induced_lattice_map(rs, nu):
        raise InternalInvariantViolation("normalization does not recompose")
    return NormalizedAut(word, nu, moved)
