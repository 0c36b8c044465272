from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, strategies as st

from liecascade.cascade import d_form1, d_form2, d_series_chain
from liecascade.diagram import diagram_automorphisms, induced_lattice_map, standard_flip, triality
from liecascade.errors import (
    IncompleteCoefficients,
    NotCommuting,
    NotInvolution,
    PreconditionViolated,
    UnsupportedType,
)
from liecascade.rootsys import all_types, build_root_system, neg
from liecascade.torusauto import (
    SKIP_REASONS,
    check_property_star,
    fixed_subspace,
    lift_sign,
    lifts_to_involution,
    make_pair,
    normalize_sigma2,
    odd_parity_witness,
    orbit_hypotheses,
    property_star_sweep,
    rank_bound,
    reflection_order,
    reflection_order_sweep,
    sign_character,
    signed_permutation_map,
    torus_aut,
    torus_aut_from_map,
    torus_sign_action,
)
from liecascade.weyl import (
    LatticeMap,
    WeylWord,
    involution_factorization,
    is_weyl_element,
    reflection_map,
    reflection_product,
    word_to_map,
)

D4_DELTA = (1, 2, 1, 1)


def d4_from_e(x):
    """Simple-root coordinates of a vector given in the orthonormal basis of D4."""
    c3 = Fraction(x[0] + x[1] + x[2] - x[3], 2)
    c4 = Fraction(x[0] + x[1] + x[2] + x[3], 2)
    return tuple(int(v) for v in (x[0], x[0] + x[1], c3, c4))


def d4_signed_permutation(perm, signs):
    cols = []
    e = lambda i: [signs[i] * int(perm[i] == j) for j in range(4)]
    simple_in_e = [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1)]
    for v in simple_in_e:
        image = [0, 0, 0, 0]
        for i, c in enumerate(v):
            image = [a + c * b for a, b in zip(image, e(i))]
        cols.append(d4_from_e(image))
    return LatticeMap.from_columns(cols)


# -- automorphisms and fixed spaces ------------------------------------------


def test_fixed_subspace_examples():
    d4 = build_root_system("D4")
    assert fixed_subspace(torus_aut(d4)).dim == 4
    assert fixed_subspace(torus_aut(d4, reflections=[D4_DELTA])).dim == 3
    assert fixed_subspace(torus_aut(d4, reflections=[D4_DELTA, (1, 0, 0, 0)])).dim == 2


@pytest.mark.parametrize("name", ["A3", "A5", "D4", "D5", "E6"])
def test_inner_flag_is_trivial_diagram_part(name):
    rs = build_root_system(name)
    for nu in diagram_automorphisms(rs):
        a = torus_aut(rs, word=(1, 2), nu=nu)
        assert a.inner == nu.is_identity()
        again = torus_aut_from_map(rs, a.compiled)
        assert again.diag_part == nu and again.compiled == a.compiled


@given(st.sampled_from([t for t in all_types(7) if t.rank > 1]), st.data())
def test_order_is_lcm_of_root_orbit_lengths(stype, data):
    rs = build_root_system(stype)
    word = data.draw(st.lists(st.integers(1, rs.rank), max_size=10))
    nu = data.draw(st.sampled_from(diagram_automorphisms(rs)))
    a = torus_aut(rs, word=word, nu=nu)
    lengths = []
    for r in rs.positives:
        k, cur = 1, a(r)
        while cur != r:
            cur, k = a(cur), k + 1
        lengths.append(k)
    assert a.order == lcm(*lengths)
    assert a.order % nu.order() == 0


# -- pairs and property star -----------------------------------------------


def test_make_pair_examples():
    d4 = build_root_system("D4")
    p = make_pair(d4, torus_aut(d4), torus_aut(d4))
    assert p.s.dim == 4 and p.omega_plus == ()
    assert check_property_star(p)

    a3 = build_root_system("A3")
    p = make_pair(a3, torus_aut(a3, reflections=[(1, 1, 1), (0, 1, 0)]), torus_aut(a3, nu=standard_flip(a3)))
    assert {(1, 1, 1), (0, 1, 0)} <= set(p.omega_plus)

    s = torus_aut(d4, reflections=[D4_DELTA, (1, 0, 0, 0)])
    p = make_pair(d4, s, s)
    assert set(p.omega_plus) == {D4_DELTA, (1, 0, 0, 0)}
    assert p.omega == {D4_DELTA, (1, 0, 0, 0), neg(D4_DELTA), (-1, 0, 0, 0)}
    assert check_property_star(p)


def test_make_pair_errors():
    a3 = build_root_system("A3")
    with pytest.raises(NotCommuting):
        make_pair(a3, torus_aut(a3, word=(1,)), torus_aut(a3, word=(2,)))
    with pytest.raises(NotInvolution):
        make_pair(a3, torus_aut(a3, word=(1, 2)), torus_aut(a3))


def test_property_star_can_fail():
    # B2 realized as a Weyl element: e1 -> e2 -> -e1 cycles two orthogonal roots
    b2 = build_root_system("B2")
    cyc = torus_aut_from_map(b2, signed_permutation_map((1, 0), (1, -1)))
    p = make_pair(b2, torus_aut(b2), cyc)
    assert not check_property_star(p)
    # the same cycle inside D4, with a sign change on e3 to stay in W(D4)
    d4 = build_root_system("D4")
    m = d4_signed_permutation((1, 0, 2, 3), (1, -1, -1, 1))
    assert is_weyl_element(d4, m)
    p = make_pair(d4, torus_aut(d4), torus_aut_from_map(d4, m))
    assert p.omega_plus and not check_property_star(p)


# -- reflection orders -------------------------------------------------------


def test_reflection_order_examples():
    a2 = build_root_system("A2")
    assert reflection_order(reflection_map(a2, (1, 0)), (1, 0))[:2] == (1, True)
    assert reflection_order(LatticeMap.identity(2), (1, 0))[:2] == (1, False)
    b2 = build_root_system("B2")
    e1 = (1, 1)
    res = reflection_order(signed_permutation_map((1, 0), (1, -1)), e1, b2)
    assert res == (2, True, 4)


def test_signed_permutations_are_weyl_elements():
    for n in range(2, 5):
        rs = build_root_system(f"B{n}")
        m = signed_permutation_map(tuple(reversed(range(n))), (-1,) + (1,) * (n - 1))
        assert is_weyl_element(rs, m)
    with pytest.raises(PreconditionViolated):
        signed_permutation_map((0, 0), (1, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reflection_order_on_signed_permutations(n):
    report = reflection_order_sweep(n)
    assert report.elements == 2**n * [1, 1, 2, 6, 24][n]
    assert report.satisfying > 0 and report.failures == ()


def test_orbit_hypotheses_reject_fixed_directions():
    a2 = build_root_system("A2")
    # identity fixes the span of alpha
    assert not orbit_hypotheses(a2, LatticeMap.identity(2), (1, 0))
    assert orbit_hypotheses(a2, reflection_map(a2, (1, 0)), (1, 0))


# -- rank bound --------------------------------------------------------------


def test_rank_bound_examples():
    d4 = build_root_system("D4")
    p = make_pair(d4, torus_aut(d4), torus_aut(d4, reflections=[D4_DELTA]))
    assert rank_bound(p) == (3, 3, True)
    p = make_pair(d4, torus_aut(d4), torus_aut(d4))
    assert rank_bound(p) == (4, 4, True)
    a5 = build_root_system("A5")
    delta = (1, 1, 1, 1, 1)
    p = make_pair(a5, torus_aut(a5, reflections=[delta]), torus_aut(a5, reflections=[delta], nu=standard_flip(a5)))
    assert check_property_star(p)
    lhs, rhs, eq = rank_bound(p)
    assert lhs < rhs and not eq


def test_rank_bound_equality_for_reflection_products():
    rs = build_root_system("D4")
    for roots in ([], [D4_DELTA], [D4_DELTA, (1, 0, 0, 0)], list(d_form1(4, 1).roots)):
        p = make_pair(rs, torus_aut(rs), torus_aut(rs, reflections=roots))
        assert check_property_star(p)
        assert rank_bound(p) == (4 - len(roots), 4 - len(roots), True)


# -- lifting signs -------------------------------------------------------------


def test_lift_sign_examples():
    d4 = build_root_system("D4")
    assert lift_sign(d4, D4_DELTA, D4_DELTA) == 1
    assert lift_sign(d4, D4_DELTA, (0, 1, 0, 0)) == -1
    assert lift_sign(d4, D4_DELTA, (1, 0, 0, 0)) == 1
    with pytest.raises(UnsupportedType):
        lift_sign(build_root_system("G2"), (1, 0), (0, 1))


def test_lifts_to_involution_examples():
    d4 = build_root_system("D4")
    assert lifts_to_involution(d4, [])
    for r in range(4, 9):
        for m in range(1, r - 1, 2):
            assert lifts_to_involution(build_root_system(f"D{r}"), d_form1(r, m).roots)
    d6 = build_root_system("D6")
    omega = d_series_chain(6, [1, 3]).roots
    assert not lifts_to_involution(d6, omega)
    assert odd_parity_witness(d6, omega) == (0, 0, 0, 1, 0, 0)


@pytest.mark.parametrize("name", ["D4", "D5", "D6", "A5", "B4", "C4", "E6"])
def test_lift_consistency(name):
    rs = build_root_system(name)
    from liecascade.cascade import kostant_cascade, strongly_orthogonal_subsets

    for omega in strongly_orthogonal_subsets(rs, kostant_cascade(rs).roots):
        if lifts_to_involution(rs, omega):
            m = reflection_product(rs, omega)
            assert involution_factorization(rs, m) is not None
            for b in rs.positives:
                sign = 1
                for a in omega:
                    sign *= lift_sign(rs, a, b)
                assert sign == 1


# -- torus sign action -------------------------------------------------------


def test_sign_action_on_omega_roots_is_odd():
    d5 = build_root_system("D5")
    omega = d_form2(5).roots
    coeffs = {r: 1 for r in omega}
    zero = (0,) * 5
    for b in omega:
        assert torus_sign_action(d5, omega, coeffs, zero, b).parity == "odd"
    coeffs = {omega[0]: 3, omega[1]: -1}
    for b in omega:
        assert torus_sign_action(d5, omega, coeffs, zero, b).parity == "odd"


@pytest.mark.parametrize("r", [6, 8])
def test_sign_action_obstruction_for_even_rank_form2(r):
    rs = build_root_system(f"D{r}")
    omega = d_form2(r).roots
    desc = torus_sign_action(rs, omega, {a: 1 for a in omega}, (0,) * r, rs.simples[r - 3])
    assert desc.square_parity == "odd"


def test_sign_action_empty_set_is_even():
    d4 = build_root_system("D4")
    for b in d4.positives:
        desc = torus_sign_action(d4, [], {}, (0, 0, 0, 0), b)
        assert desc.parity == "even" and desc.square_parity == "even"


def test_sign_action_linear_part():
    d5 = build_root_system("D5")
    omega = d_form2(5).roots
    flip = standard_flip(d5)
    x = (0, 0, 0, 1, -1)
    assert all(d5.inner(a, x) == 0 for a in omega)
    desc = torus_sign_action(d5, omega, {a: 1 for a in omega}, x, (0, 0, 0, 1, 0), nu=flip)
    assert desc.parity == "x-dependent" and desc.functional != 0


def test_sign_action_errors():
    d5 = build_root_system("D5")
    omega = d_form2(5).roots
    with pytest.raises(IncompleteCoefficients):
        torus_sign_action(d5, omega, {omega[0]: 1}, (0,) * 5, omega[0])
    with pytest.raises(PreconditionViolated):
        torus_sign_action(d5, omega, {omega[0]: 2, omega[1]: 1}, (0,) * 5, omega[0])
    with pytest.raises(PreconditionViolated):
        torus_sign_action(d5, omega, {a: 1 for a in omega}, omega[0], omega[0])


# -- sign characters ---------------------------------------------------------


def test_sign_character_is_invariant_and_negative_on_omega():
    d4 = build_root_system("D4")
    omega = [D4_DELTA, (1, 0, 0, 0)]
    b = reflection_product(d4, omega)
    chi = sign_character(d4, b, omega)
    assert chi is not None
    value = lambda v: (-1) ** sum(x for x, c in zip(v, chi) if c == -1)
    assert all(value(r) == -1 for r in omega)
    assert all(value(b(e)) == value(e) for e in d4.simples)


def test_sign_character_absent():
    # every root of A2 vanishes: no character is -1 on a, b and a+b at once
    a2 = build_root_system("A2")
    assert sign_character(a2, LatticeMap.identity(2), a2.positives) is None


# -- sweep -------------------------------------------------------------------


def test_sweep_a3_counts_and_json():
    report = property_star_sweep("A3")
    doc = report.to_json()
    assert doc["checked"] == 31 and doc["failed"] == 0
    assert set(doc["skipped_by_reason"]) == set(SKIP_REASONS)
    assert doc["skipped"] == sum(doc["skipped_by_reason"].values())


def test_sweep_independent_of_worker_count():
    assert property_star_sweep("A3", jobs=1).to_json() == property_star_sweep("A3", jobs=2).to_json()


def test_sweep_refuses_large_rank():
    with pytest.raises(UnsupportedType):
        property_star_sweep("E7")


def test_sweep_d4_failures_share_one_shape():
    report = property_star_sweep("D4")
    assert report.checked > 0
    for f in report.failures:
        assert f.sigma1.is_identity()
        assert f.sigma2.order() == 4
        assert len(f.omega_plus) == 3
        assert not torus_aut_from_map(build_root_system("D4"), f.sigma2).inner


# -- normalization -----------------------------------------------------------


@st.composite
def conjugated_structured_aut(draw):
    name = draw(st.sampled_from(["A3", "A4", "A5", "D4", "D5", "D6", "E6"]))
    rs = build_root_system(name)
    nu = draw(st.sampled_from(diagram_automorphisms(rs)))
    nm = induced_lattice_map(rs, nu)
    fixed = [r for r in rs.positives if nm(r) == r]
    from liecascade.cascade import strongly_orthogonal_subsets

    subsets = [()] + strongly_orthogonal_subsets(rs, fixed)
    omega = draw(st.sampled_from(subsets))
    base = reflection_product(rs, omega) @ nm
    w = word_to_map(rs, WeylWord(tuple(draw(st.lists(st.integers(1, rs.rank), max_size=8)))))
    winv = w.inverse()
    moved = [w(r) for r in omega]
    moved = [r if any(x > 0 for x in r) else neg(r) for r in moved]
    return rs, w @ base @ winv, moved, nu


@given(conjugated_structured_aut())
def test_normalization_recovers_reflections_and_diagram_part(data):
    rs, sigma2, omega, nu = data
    n = normalize_sigma2(rs, sigma2, omega)
    if n is None:
        return
    w = word_to_map(rs, n.word)
    lhs = w @ sigma2 @ w.inverse()
    assert lhs == reflection_product(rs, n.omega_plus) @ induced_lattice_map(rs, n.nu)
    # the diagram part is determined up to conjugacy by the outer class
    assert n.nu.order() == nu.order()


def test_normalization_requires_star():
    d4 = build_root_system("D4")
    with pytest.raises(PreconditionViolated):
        normalize_sigma2(d4, LatticeMap.identity(4), [D4_DELTA])


def test_normalization_of_triality():
    d4 = build_root_system("D4")
    n = normalize_sigma2(d4, induced_lattice_map(d4, triality(d4)), [])
    assert n is not None and n.nu.order() == 3 and n.omega_plus == ()
