"""Classification tables and replayable formality certificates.

A certificate names the branch of the case analysis a commuting pair falls
into and carries every computed fact it relies on as a check: an operation
name, JSON arguments and the recorded value. :func:`reverify` replays each
check through :data:`CHECKS` and compares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable, Sequence

from .cascade import (
    OrthoSet,
    RationalSubspace,
    a_series_chain,
    classify_d_normal_form,
    normal_form,
    omega_from_subspace,
)
from .diagram import (
    DiagramAut,
    diagram_automorphisms,
    fold,
    induced_lattice_map,
    min_outer_fixed_rank,
    standard_flip,
    triality,
)
from .errors import (
    CounterexampleFound,
    InvalidCount,
    PreconditionViolated,
    ShapeError,
    UnsupportedType,
)
from .rootsys import RootSystem, SystemType, build_root_system, neg, pairwise_strongly_orthogonal
from .torusauto import (
    TorusAut,
    joint_fixed_subspace,
    lifts_to_involution,
    make_pair,
    normalize_sigma2,
    odd_parity_witness,
    rank_bound,
    sign_character,
    torus_aut,
    torus_aut_from_map,
)
from .weyl import LatticeMap, WeylWord, word_to_map

# -- subgroups of Z2 x Zk ---------------------------------------------------


@dataclass(frozen=True)
class AbelianSubgroup:
    k: int
    generators: tuple[tuple[int, int], ...]
    kind: str  # "Cyclic" or "TwoByR"
    param: int

    @property
    def classification(self) -> str:
        return f"{self.kind}{{{self.param}}}"

    def elements(self) -> frozenset:
        return _closure(self.k, self.generators)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "generators": [list(g) for g in self.generators],
            "classification": self.classification,
            "order": len(self.elements()),
        }


def _closure(k: int, gens: Sequence[tuple[int, int]]) -> frozenset:
    seen = {(0, 0)}
    todo = [(0, 0)]
    while todo:
        x = todo.pop()
        for g in gens:
            y = ((x[0] + g[0]) % 2, (x[1] + g[1]) % k)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, m, n)`` with ``g = gcd(a, b) = m*a + n*b``."""
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _tag(kind: str, param: int) -> tuple[str, int]:
    # Z2 x Zr with r odd is cyclic of order 2r
    if kind == "TwoByR" and param % 2 == 1:
        return "Cyclic", 2 * param
    return kind, param


def classify_subgroup(k: int, gens: Sequence[tuple[int, int]]) -> tuple[str, int]:
    """Cyclic or Z2 x Zr, decided by the Bezout case split on the generators.

    With ``x = (1, a)`` and ``y = (0, b)`` generating, ``g = gcd(a, b) = m a + n b``
    puts ``(m, g)`` in the group. If ``m`` is even, ``a/g`` is even or ``b/g`` is
    odd, then ``(1, 0)`` is in the group and it splits off a Z2; otherwise
    ``(1, g)`` generates.
    """
    size = len(_closure(k, gens))
    odd = [g for g in gens if g[0] % 2]
    if not odd:
        return "Cyclic", size
    a = odd[0][1] % k
    # second coordinates generating the intersection with {0} x Zk
    inter = [g[1] for g in gens if g[0] % 2 == 0] + [g[1] - a for g in odd[1:]] + [2 * a, k]
    b = 0
    for v in inter:
        b = gcd(b, v % k if v % k else k)
    g, m, _ = _ext_gcd(a, b)
    if m % 2 == 0 or (a // g) % 2 == 0 or (b // g) % 2 == 1:
        return _tag("TwoByR", size // 2)
    return "Cyclic", size


def brute_force_tag(k: int, elements: frozenset) -> tuple[str, int]:
    """Isomorphism type from the element orders: cyclic iff some element has full order."""
    n = len(elements)

    def order(x):
        o, cur = 1, x
        while cur != (0, 0):
            cur = ((cur[0] + x[0]) % 2, (cur[1] + x[1]) % k)
            o += 1
        return o

    if any(order(x) == n for x in elements):
        return "Cyclic", n
    return "TwoByR", n // 2


def subgroups_of_Z2xZk(k: int) -> list[AbelianSubgroup]:
    if k < 1:
        raise InvalidCount(f"k must be positive, got {k}")
    out = []
    for d in range(1, k + 1):
        if k % d:
            continue
        gens_list = [((0, d % k),)]
        for a in sorted({0, d // 2} if d % 2 == 0 else {0}):
            gens_list.append(((1, a % k), (0, d % k)))
        for gens in gens_list:
            kind, param = classify_subgroup(k, gens)
            out.append(AbelianSubgroup(k, gens, kind, param))
    out.sort(key=lambda s: (len(s.elements()), s.generators))
    return out


def crt_cyclic(p: int, q: int) -> bool:
    """Whether Zp x Zq is cyclic."""
    if p < 1 or q < 1:
        raise InvalidCount("orders must be positive")
    return gcd(p, q) == 1


# -- involution tables ------------------------------------------------------


@dataclass(frozen=True)
class InvolutionClassRow:
    ambient: SystemType
    inner: bool
    fixed_summands: tuple[SystemType, ...]
    center_dim: int
    param_constraints: str
    column: str
    p: int | None = None

    def to_json(self) -> dict:
        return {
            "ambient": str(self.ambient),
            "inner": self.inner,
            "fixed_summands": [str(s) for s in self.fixed_summands],
            "center_dim": self.center_dim,
            "param_constraints": self.param_constraints,
            "column": self.column,
            "p": self.p,
        }


def _summand(family: str, n: int) -> list[SystemType]:
    """Canonical simple pieces of a possibly degenerate classical label."""
    if n <= 0:
        return []
    if family == "D":
        if n == 1:
            return []  # d_1 is abelian
        if n == 2:
            return [SystemType("A", 1), SystemType("A", 1)]
        if n == 3:
            return [SystemType("A", 3)]
    return [SystemType(family, n)]


def _row(ambient, inner, pieces, center, constraint, column, p=None) -> InvolutionClassRow:
    summands = []
    for fam, n in pieces:
        summands += _summand(fam, n)
    return InvolutionClassRow(SystemType(*ambient), inner, tuple(sorted(summands)), center, constraint, column, p)


def _all_rows(max_rank: int) -> list[InvolutionClassRow]:
    rows = []
    # inner, semisimple fixed algebra
    for n in range(2, max_rank + 1):
        for p in range(2, n + 1):
            rows.append(_row(("B", n), True, [("D", p), ("B", n - p)], 0, "2 <= p <= n", "b_n", p))
        for p in range(1, n // 2 + 1):
            rows.append(_row(("C", n), True, [("C", p), ("C", n - p)], 0, "1 <= p <= floor(n/2)", "c_n", p))
        if n >= 4:
            for p in range(2, n // 2 + 1):
                rows.append(_row(("D", n), True, [("D", p), ("D", n - p)], 0, "2 <= p <= floor(n/2)", "d_n", p))
    exceptional = [
        (("G", 2), [("A", 1), ("A", 1)], "g_2"),
        (("F", 4), [("B", 4)], "f_4"),
        (("F", 4), [("A", 1), ("C", 3)], "f_4"),
        (("E", 6), [("A", 1), ("A", 5)], "e_6"),
        (("E", 7), [("A", 7)], "e_7"),
        (("E", 7), [("A", 1), ("D", 6)], "e_7"),
        (("E", 8), [("A", 1), ("E", 7)], "e_8"),
        (("E", 8), [("D", 8)], "e_8"),
    ]
    for amb, pieces, col in exceptional:
        if amb[1] <= max_rank:
            rows.append(_row(amb, True, pieces, 0, "", col))
    # inner, one-dimensional centre
    for n in range(1, max_rank + 1):
        for p in range(0, (n - 1) // 2 + 1):
            rows.append(_row(("A", n), True, [("A", p), ("A", n - p - 1)], 1, "0 <= p <= floor((n-1)/2)", "a_n", p))
        if n > 2:
            rows.append(_row(("B", n), True, [("B", n - 1)], 1, "n > 2", "b_n"))
        if n > 1:
            rows.append(_row(("C", n), True, [("A", n - 1)], 1, "n > 1", "c_n"))
        if n == 4:
            rows.append(_row(("D", 4), True, [("A", 3)], 1, "", "d_4"))
        if n > 4:
            rows.append(_row(("D", n), True, [("D", n - 1)], 1, "n > 4", "d_n"))
            rows.append(_row(("D", n), True, [("A", n - 1)], 1, "n > 4", "d_n"))
    for amb, pieces, col in [(("E", 6), [("D", 5)], "e_6"), (("E", 7), [("E", 6)], "e_7")]:
        if amb[1] <= max_rank:
            rows.append(_row(amb, True, pieces, 1, "", col))
    # outer, semisimple fixed algebra
    for n in range(1, max_rank + 1):
        if n >= 2 and 2 * n <= max_rank:
            rows.append(_row(("A", 2 * n), False, [("B", n)], 0, "n >= 2", "a_{2n}"))
        if n > 2 and 2 * n - 1 <= max_rank:
            rows.append(_row(("A", 2 * n - 1), False, [("D", n)], 0, "n > 2", "a_{2n-1}"))
            rows.append(_row(("A", 2 * n - 1), False, [("C", n)], 0, "n > 2", "a_{2n-1}"))
        if n > 1 and n + 1 <= max_rank:
            for p in range(0, n // 2 + 1):
                amb = ("A", 3) if n + 1 == 3 else ("D", n + 1)
                rows.append(_row(amb, False, [("B", p), ("B", n - p)], 0, "0 <= p <= floor(n/2)", "d_{n+1}", p))
    if max_rank >= 6:
        rows.append(_row(("E", 6), False, [("C", 4)], 0, "", "e_6"))
        rows.append(_row(("E", 6), False, [("F", 4)], 0, "", "e_6"))
    return rows


def involution_table(stype: SystemType | str) -> list[InvolutionClassRow]:
    """Every tabulated fixed-algebra type for involutions of ``stype``."""
    stype = SystemType.parse(stype) if isinstance(stype, str) else stype
    return [r for r in _all_rows(max(stype.rank, 8)) if r.ambient == stype]


# -- aut specs --------------------------------------------------------------


def aut_from_spec(rs: RootSystem, spec: str | dict) -> TorusAut:
    """Parse ``"id"``, ``"flip"``, ``"triality"`` or a JSON object.

    The object may carry ``word`` (1-based letters), ``reflections`` (roots),
    ``nu`` (diagram permutation or one of the names), ``matrix``, and
    ``conj``, a word ``w`` replacing the result ``x`` by ``w x w^-1``.
    """
    if isinstance(spec, str):
        s = spec.strip()
        if s in ("id", "flip", "triality"):
            spec = {"nu": s}
        else:
            try:
                spec = json.loads(s)
            except json.JSONDecodeError as e:
                raise ShapeError(f"cannot parse automorphism spec {spec!r}: {e}") from None
    if not isinstance(spec, dict):
        raise ShapeError("automorphism spec must be a JSON object")
    unknown = set(spec) - {"word", "reflections", "nu", "matrix", "conj"}
    if unknown:
        raise ShapeError(f"unknown keys {sorted(unknown)} in automorphism spec")
    if "conj" in spec:
        inner = aut_from_spec(rs, {k: v for k, v in spec.items() if k != "conj"})
        w = _word_map(rs, spec["conj"])
        winv = _word_map(rs, tuple(reversed(spec["conj"])))
        return torus_aut_from_map(rs, w @ inner.compiled @ winv)
    if "matrix" in spec:
        return torus_aut_from_map(rs, LatticeMap(tuple(tuple(r) for r in spec["matrix"])))
    nu = spec.get("nu")
    if nu == "id":
        nu = None
    elif nu == "flip":
        nu = standard_flip(rs)
    elif nu == "triality":
        nu = triality(rs)
    return torus_aut(rs, spec.get("word", ()), [tuple(r) for r in spec.get("reflections", ())], nu)


# -- replayable checks ------------------------------------------------------


def _rs(args) -> RootSystem:
    return build_root_system(args["type"])


def _map(m) -> LatticeMap:
    return LatticeMap(tuple(tuple(r) for r in m))


def _roots(rs, xs) -> list:
    return [rs.check_root(x) for x in xs]


def _chk_omega(a):
    rs = _rs(a)
    s = joint_fixed_subspace([_map(a["sigma1"]), _map(a["sigma2"])])
    return [list(r) for r in omega_from_subspace(rs, s)]


def _chk_shadows(a):
    rs = _rs(a)
    m = _map(a["sigma1"])
    roots = _roots(rs, a["omega"])
    return pairwise_strongly_orthogonal(rs, roots) and all(m(r) == r for r in roots)


def _chk_star(a):
    rs = _rs(a)
    b = _map(a["sigma2"])
    return all(b(r) == neg(r) for r in _roots(rs, a["omega"]))


def _chk_dims(a):
    return [joint_fixed_subspace([_map(x) for x in m]).dim for m in a["maps"]]


def _chk_rank_bound(a):
    rs = _rs(a)
    p = make_pair(rs, torus_aut_from_map(rs, _map(a["sigma1"])), torus_aut_from_map(rs, _map(a["sigma2"])))
    return list(rank_bound(p))


def _chk_sign(a):
    rs = _rs(a)
    chi = sign_character(rs, _map(a["sigma2"]), _roots(rs, a["omega"]))
    return None if chi is None else list(chi)


def _chk_normalize(a):
    rs = _rs(a)
    n = normalize_sigma2(rs, _map(a["sigma2"]), _roots(rs, a["omega"]))
    if n is None:
        return None
    return {"word": list(n.word.letters), "nu": list(n.nu.perm), "omega": [list(r) for r in n.omega_plus]}


def _chk_normal_form(a):
    rs = _rs(a)
    word, normal = normal_form(rs, OrthoSet.of(rs, a["omega"]), DiagramAut(tuple(a["nu"])))
    return {"word": list(word.letters), "normal": normal.to_json()}


def _chk_lift(a):
    rs = _rs(a)
    try:
        return lifts_to_involution(rs, _roots(rs, a["omega"]))
    except UnsupportedType:
        return None


def _chk_odd(a):
    rs = _rs(a)
    w = odd_parity_witness(rs, _roots(rs, a["omega"]))
    return None if w is None else list(w)


def _chk_classify(a):
    rs = _rs(a)
    f = classify_d_normal_form(rs, OrthoSet.of(rs, a["omega"]))
    return {"kind": f.kind, "index": f.index, "normal": f.normal.to_json()}


def _chk_min_rank(a):
    return min_outer_fixed_rank(a["type"])


def _chk_fold(a):
    rs = _rs(a)
    return str(fold(rs, DiagramAut(tuple(a["nu"]))).stype)


def _chk_span_equal(a):
    n = a["ambient"]
    x = RationalSubspace.span(a["left"], n) if a["left"] else RationalSubspace.zero(n)
    y = RationalSubspace.span(a["right"], n) if a["right"] else RationalSubspace.zero(n)
    return x == y


def _chk_a_chain(a):
    return [list(r) for r in a_series_chain(a["n"], a["m"]).roots] if a["m"] else []


def _chk_relabel(a):
    rs = _rs(a)
    nu = DiagramAut(tuple(a["nu"]))
    flip = standard_flip(rs)
    for tau in diagram_automorphisms(rs):
        if tau.compose(nu).compose(tau.inverse()) == flip:
            return list(tau.perm)
    return None


CHECKS: dict[str, Callable[[dict], Any]] = {
    "omega_plus": _chk_omega,
    "property_star": _chk_star,
    "adapted_shadows": _chk_shadows,
    "fixed_dims": _chk_dims,
    "rank_bound": _chk_rank_bound,
    "sign_character": _chk_sign,
    "normalize_sigma2": _chk_normalize,
    "normal_form": _chk_normal_form,
    "lifts_to_involution": _chk_lift,
    "odd_parity_witness": _chk_odd,
    "classify_d_normal_form": _chk_classify,
    "min_outer_fixed_rank": _chk_min_rank,
    "folded_type": _chk_fold,
    "span_equal": _chk_span_equal,
    "a_series_chain": _chk_a_chain,
    "flip_relabeling": _chk_relabel,
}


# -- certificates -----------------------------------------------------------

CASE_PATHS = (
    "BothInnerOrBothOuter",
    "OuterInner",
    "InnerOuter_E6",
    "InnerOuter_A",
    "InnerOuter_D_order3",
    "InnerOuter_D_form1",
    "InnerOuter_D_form2",
)

VERDICT = "isotropy formal"


@dataclass
class Certificate:
    case_path: str
    witnesses: dict
    citations: list[str]
    checks: list[dict] = field(default_factory=list)
    verdict: str = VERDICT

    def to_json(self) -> dict:
        return {
            "case_path": self.case_path,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "citations": list(self.citations),
            "checks": self.checks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


class _Recorder:
    def __init__(self):
        self.checks: list[dict] = []

    def run(self, op: str, **args):
        value = CHECKS[op](args)
        self.checks.append({"op": op, "args": args, "value": value})
        return value


def _mat(m: LatticeMap) -> list[list[int]]:
    return [list(r) for r in m.matrix]


def _conj_roots(rs: RootSystem, tau: DiagramAut, roots) -> list[list[int]]:
    m = induced_lattice_map(rs, tau)
    return [list(m(tuple(r))) for r in roots]


def formality_certificate(rs: RootSystem, sigma1: TorusAut, sigma2: TorusAut) -> Certificate:
    """Route a commuting pair through the case analysis and record every witness."""
    if isinstance(rs, (str, SystemType)):
        rs = build_root_system(rs)
    make_pair(rs, sigma1, sigma2)  # validates commuting and order
    t = str(rs.stype)
    a, b = sigma1.compiled, sigma2.compiled
    rec = _Recorder()
    omega = rec.run("omega_plus", type=t, sigma1=_mat(a), sigma2=_mat(b))
    star = rec.run("property_star", type=t, sigma2=_mat(b), omega=omega)
    dims = rec.run("fixed_dims", type=t, maps=[[_mat(a)], [_mat(b)], [_mat(a), _mat(b)]])
    ranks = {
        "rank": rs.rank,
        "fix_sigma1": dims[0],
        "fix_sigma2": dims[1],
        "s": dims[2],
        "omega_plus": len(omega),
    }
    witnesses: dict = {"omega_plus": omega, "property_star": star, "ranks": ranks}
    shadows = rec.run("adapted_shadows", type=t, sigma1=_mat(a), omega=omega)
    if not shadows:
        raise PreconditionViolated(
            "vanishing roots must be strongly orthogonal and fixed by sigma1; the torus is not adapted to the pair"
        )

    d1, d2 = sigma1.diag_part, sigma2.diag_part
    if d1 == d2:
        path = "BothInnerOrBothOuter"
    elif not sigma1.inner and sigma2.inner:
        path = "OuterInner"
    elif sigma1.inner:
        fam = rs.stype.family
        if fam == "E":
            path = "InnerOuter_E6"
        elif fam == "A":
            path = "InnerOuter_A"
        elif fam == "D":
            path = "InnerOuter_D_order3" if d2.order() == 3 else "InnerOuter_D"
        else:
            raise PreconditionViolated(f"{rs.stype} has no outer automorphisms")
    else:  # pragma: no cover - commuting outer classes of an involution coincide
        raise PreconditionViolated("sigma1 and sigma2 lie in different outer classes")

    if path.startswith("InnerOuter"):
        if not a.is_identity():
            raise PreconditionViolated(
                "an inner sigma1 fixes the adapted torus pointwise; this sigma1 moves it"
            )
        chi = rec.run("sign_character", type=t, sigma2=_mat(b), omega=omega)
        if chi is None:
            raise PreconditionViolated("no torus element commuting with sigma2 realizes sigma1")
        witnesses["sign_character"] = chi

    if not star:
        raise CounterexampleFound(
            "sigma2 does not negate every vanishing root",
            witness={"type": t, "sigma1": _mat(a), "sigma2": _mat(b), "omega_plus": omega},
        )
    lhs, rhs, _ = rec.run("rank_bound", type=t, sigma1=_mat(a), sigma2=_mat(b))
    ranks["rank_bound_rhs"] = rhs
    if lhs > rhs:
        raise CounterexampleFound("joint fixed space exceeds the rank bound", witness={"lhs": lhs, "rhs": rhs})

    citations = ["vanishing-roots-negated", "perpendicular-reflection-normal-form"]
    norm = None
    if path != "InnerOuter_D_order3":
        norm = rec.run("normalize_sigma2", type=t, sigma2=_mat(b), omega=omega)
        if norm is None:
            raise CounterexampleFound(
                "sigma2 stripped of its reflections fixes no regular vector",
                witness={"type": t, "sigma2": _mat(b), "omega_plus": omega},
            )
        nf = rec.run("normal_form", type=t, omega=norm["omega"], nu=norm["nu"])
        witnesses["normalization"] = {"word": norm["word"], "nu": norm["nu"], "normal_form_word": nf["word"]}
        witnesses["omega_normal_form"] = nf["normal"]
    else:
        witnesses["omega_normal_form"] = omega
    parity_even = rec.run("lifts_to_involution", type=t, omega=witnesses["omega_normal_form"])
    witnesses["parity_even"] = parity_even
    witnesses["lift"] = parity_even

    if path == "BothInnerOrBothOuter":
        citations += ["same-outer-class-reduces-to-commuting-involutions"]
    elif path == "OuterInner":
        tau2 = b @ a
        om2 = rec.run("omega_plus", type=t, sigma1=_mat(a), sigma2=_mat(tau2))
        star2 = rec.run("property_star", type=t, sigma2=_mat(tau2), omega=om2)
        same_s = rec.run(
            "span_equal",
            ambient=rs.rank,
            left=[list(v) for v in joint_fixed_subspace([a, b]).basis],
            right=[list(v) for v in joint_fixed_subspace([a, tau2]).basis],
        )
        witnesses["composite"] = {"sigma2_times_sigma1": _mat(tau2), "property_star": star2, "same_joint_fixed": same_s}
        if not (star2 and same_s):
            raise CounterexampleFound("composite pair does not share the torus", witness=witnesses["composite"])
        citations += ["swap-to-same-outer-class", "formality-depends-only-on-maximal-torus"]
    elif path == "InnerOuter_E6":
        mr = rec.run("min_outer_fixed_rank", type=t)
        witnesses["min_outer_fixed_rank"] = mr
        if ranks["s"] != mr:
            raise CounterexampleFound("joint fixed rank differs from the outer fixed rank", witness=ranks)
        citations += ["outer-fixed-rank-e6", "formality-depends-only-on-maximal-torus"]
    elif path == "InnerOuter_A":
        normal = witnesses["omega_normal_form"]
        m = len(normal)
        chain = rec.run("a_series_chain", n=rs.rank, m=m)
        if sorted(chain) != sorted(normal):
            raise CounterexampleFound("normal form is not an initial chain", witness={"normal": normal, "chain": chain})
        ell = (rs.rank + 1) // 2
        n = rs.rank
        tail_deltas = [[int(j <= i + 1 <= n - j + 1) for i in range(n)] for j in range(m + 1, ell + 1)]
        tail_duals = [[int(i + 1 in (j, n - j + 1)) for i in range(n)] for j in range(m + 1, ell + 1)]
        wmap = _word_map(rs, witnesses["normalization"]["normal_form_word"]) @ _word_map(rs, norm["word"])
        s_moved = [list(wmap(v)) for v in joint_fixed_subspace([a, b]).basis]
        eq1 = rec.run("span_equal", ambient=n, left=s_moved, right=tail_deltas)
        eq2 = rec.run("span_equal", ambient=n, left=tail_deltas, right=tail_duals)
        witnesses["chain_basis"] = {"m": m, "ell": ell, "s_is_tail_chain": eq1, "tail_chain_is_tail_duals": eq2}
        if not (eq1 and eq2):
            raise CounterexampleFound("joint fixed space is not spanned by the tail chain", witness=witnesses["chain_basis"])
        citations += ["diagram-fixed-subgroup-tnhz", "tnhz-implies-formality", "formality-depends-only-on-maximal-torus"]
    elif path == "InnerOuter_D_order3":
        mr = rec.run("min_outer_fixed_rank", type=t)
        witnesses["min_outer_fixed_rank"] = mr
        s = ranks["s"]
        if s == 2:
            witnesses["branch"] = "shares-torus-with-fixed-group"
        elif s == 1:
            witnesses["branch"] = "rank-one-fixed-group"
        else:
            raise CounterexampleFound("joint fixed space has neither rank 1 nor rank 2", witness=ranks)
        citations += ["outer-fixed-rank-d4-order3", "rank-one-subgroups-tnhz", "formality-depends-only-on-maximal-torus"]
    else:  # InnerOuter_D
        path = _d_path(rs, rec, witnesses, norm, ranks)
        citations += ["d-series-standard-forms"] + (
            ["lift-to-commuting-involutions"] if path.endswith("form1") else ["a-even-subalgebra-outer-fixed-tnhz", "tnhz-implies-formality"]
        )
    return Certificate(path, witnesses, citations, rec.checks)


def _word_map(rs: RootSystem, letters) -> LatticeMap:
    return word_to_map(rs, WeylWord(tuple(letters)))


def _d_path(rs: RootSystem, rec: _Recorder, witnesses: dict, norm: dict, ranks: dict) -> str:
    t = str(rs.stype)
    r = rs.rank
    omega = norm["omega"]
    tau = rec.run("flip_relabeling", type=t, nu=norm["nu"])
    if tau is None:
        raise CounterexampleFound("diagram part is not conjugate to the flip", witness=norm)
    omega = _conj_roots(rs, DiagramAut(tuple(tau)), omega)
    witnesses["flip_relabeling"] = tau
    if not omega:
        witnesses["omega_empty"] = True
        witnesses["d_form"] = {"kind": "Form1", "index": 0}
        witnesses["lift"] = True
        return "InnerOuter_D_form1"
    try:
        cls = rec.run("classify_d_normal_form", type=t, omega=omega)
    except (PreconditionViolated, CounterexampleFound) as e:
        raise CounterexampleFound(f"D-series standard form not reached: {e}", witness={"omega": omega}) from None
    witnesses["d_form"] = {"kind": cls["kind"], "index": cls["index"]}
    witnesses["omega_normal_form"] = cls["normal"]
    lift = rec.run("lifts_to_involution", type=t, omega=cls["normal"])
    witnesses["parity_even"] = lift
    witnesses["lift"] = lift
    if cls["kind"] == "Form1":
        if not lift:
            raise CounterexampleFound("Form1 set does not lift to an involution", witness=cls)
        return "InnerOuter_D_form1"
    odd = rec.run("odd_parity_witness", type=t, omega=cls["normal"])
    witnesses["odd_parity_witness"] = odd
    if lift or r % 2 == 0:
        raise CounterexampleFound("Form2 requires odd rank and an odd parity", witness=cls)
    q = (r - 1) // 2
    mr = rec.run("min_outer_fixed_rank", type=f"A{2 * q}")
    witnesses["even_a_subalgebra"] = {"type": f"A{2 * q}", "min_outer_fixed_rank": mr}
    if ranks["s"] != mr:
        raise CounterexampleFound("joint fixed rank differs from the A-subalgebra outer rank", witness=ranks)
    return "InnerOuter_D_form2"


def reverify(cert: Certificate | dict) -> list[dict]:
    """Replay every recorded check; returns the mismatches (empty when all agree)."""
    data = cert.to_json() if isinstance(cert, Certificate) else cert
    bad = []
    for c in data["checks"]:
        got = CHECKS[c["op"]](c["args"])
        if json.loads(json.dumps(got)) != c["value"]:
            bad.append({"op": c["op"], "args": c["args"], "recorded": c["value"], "replayed": got})
    return bad


# -- fixed scenarios --------------------------------------------------------

_D5 = {"d1": [1, 2, 2, 1, 1], "d3": [0, 0, 1, 1, 1]}
_D7 = {"d1": [1, 2, 2, 2, 2, 1, 1], "d3": [0, 0, 1, 2, 2, 1, 1], "d5": [0, 0, 0, 0, 1, 1, 1]}

#: (name, type, sigma1 spec, sigma2 spec, expected case path)
SCENARIOS: tuple[tuple[str, str, Any, Any, str], ...] = (
    ("d4-identity-pair", "D4", "id", "id", "BothInnerOrBothOuter"),
    ("g2-highest-reflection", "G2", "id", {"reflections": [[2, 3]]}, "BothInnerOrBothOuter"),
    ("b3-highest-reflection", "B3", "id", {"reflections": [[1, 2, 2]]}, "BothInnerOrBothOuter"),
    ("a5-flip-flip", "A5", "flip", "flip", "BothInnerOrBothOuter"),
    ("a5-flip-identity", "A5", "flip", "id", "OuterInner"),
    ("a5-flip-highest", "A5", "flip", {"reflections": [[1, 1, 1, 1, 1]]}, "OuterInner"),
    ("e6-flip-highest", "E6", "flip", {"reflections": [[1, 2, 2, 3, 2, 1]]}, "OuterInner"),
    ("d5-flip-highest", "D5", "flip", {"reflections": [_D5["d1"]]}, "OuterInner"),
    ("e6-identity-flip", "E6", "id", "flip", "InnerOuter_E6"),
    ("e6-identity-conjugated-flip", "E6", "id", {"nu": "flip", "conj": [1, 3]}, "InnerOuter_E6"),
    ("a3-identity-flip", "A3", "id", "flip", "InnerOuter_A"),
    ("a5-middle-reflection-flip", "A5", "id", {"word": [3], "nu": "flip"}, "InnerOuter_A"),
    ("a5-conjugated-middle-reflection-flip", "A5", "id", {"word": [3], "nu": "flip", "conj": [2, 1]}, "InnerOuter_A"),
    ("a4-conjugated-flip", "A4", "id", {"nu": "flip", "conj": [1]}, "InnerOuter_A"),
    ("d4-triality", "D4", "id", "triality", "InnerOuter_D_order3"),
    ("d4-conjugated-triality", "D4", "id", {"nu": "triality", "conj": [2, 1]}, "InnerOuter_D_order3"),
    ("d4-identity-flip", "D4", "id", "flip", "InnerOuter_D_form1"),
    ("d5-conjugated-flip", "D5", "id", {"nu": "flip", "conj": [3, 2]}, "InnerOuter_D_form1"),
    ("d5-form2", "D5", "id", {"reflections": [_D5["d1"], _D5["d3"]], "nu": "flip"}, "InnerOuter_D_form2"),
    (
        "d7-conjugated-form2",
        "D7",
        "id",
        {"reflections": [_D7["d1"], _D7["d3"], _D7["d5"]], "nu": "flip", "conj": [1, 2, 3]},
        "InnerOuter_D_form2",
    ),
)


def scenario_certificate(name: str) -> Certificate:
    for n, t, s1, s2, _ in SCENARIOS:
        if n == name:
            rs = build_root_system(t)
            return formality_certificate(rs, aut_from_spec(rs, s1), aut_from_spec(rs, s2))
    raise KeyError(name)


def run_scenarios() -> dict[str, Certificate]:
    return {n: scenario_certificate(n) for n, *_ in SCENARIOS}
