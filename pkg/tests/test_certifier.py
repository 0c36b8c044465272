import copy
import json
from itertools import product
from math import gcd, lcm

import pytest
from hypothesis import given, strategies as st

from liecascade.certifier import (
    _closure,
    CASE_PATHS,
    CHECKS,
    SCENARIOS,
    aut_from_spec,
    brute_force_tag,
    classify_subgroup,
    crt_cyclic,
    formality_certificate,
    involution_table,
    reverify,
    run_scenarios,
    scenario_certificate,
    subgroups_of_Z2xZk,
)
from liecascade.diagram import diagram_automorphisms, fold
from liecascade.errors import InvalidCount, NotCommuting, NotInvolution, ShapeError
from liecascade.rootsys import SystemType, all_types, build_root_system

# -- subgroups -------------------------------------------------------------


def all_subgroups_brute_force(k):
    """Every subgroup of Z2 x Zk, found by closing each pair of elements."""
    elems = list(product(range(2), range(k)))

    def close(gens):
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

    # every subgroup of Z2 x Zk needs at most two generators
    return {close((a, b)) for a in elems for b in elems}


def test_subgroup_examples():
    assert len(subgroups_of_Z2xZk(1)) == 2
    assert len(subgroups_of_Z2xZk(2)) == 5
    assert classify_subgroup(4, [(1, 1)]) == ("Cyclic", 4)
    assert classify_subgroup(4, [(1, 0), (0, 2)]) == ("TwoByR", 2)
    assert classify_subgroup(3, [(1, 0), (0, 1)]) == ("Cyclic", 6)
    with pytest.raises(InvalidCount):
        subgroups_of_Z2xZk(0)


@pytest.mark.parametrize("k", range(1, 25))
def test_subgroups_complete_and_tagged(k):
    subs = subgroups_of_Z2xZk(k)
    found = [s.elements() for s in subs]
    assert len(set(found)) == len(found)
    assert set(found) == all_subgroups_brute_force(k)
    for s in subs:
        assert (s.kind, s.param) == brute_force_tag(k, s.elements())


@given(st.integers(1, 60), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 59)), min_size=1, max_size=3))
def test_classification_matches_element_orders(k, gens):
    gens = [(a, b % k) for a, b in gens]
    assert classify_subgroup(k, gens) == brute_force_tag(k, _closure(k, gens))


@pytest.mark.parametrize("p,q,cyclic", [(1, 1, True), (2, 3, True), (2, 4, False), (6, 35, True), (6, 9, False)])
def test_crt_examples(p, q, cyclic):
    assert crt_cyclic(p, q) is cyclic


@given(st.integers(1, 30), st.integers(1, 30))
def test_crt_against_element_orders(p, q):
    # Zp x Zq is cyclic iff some element has order p * q
    orders = {lcm(p // gcd(a, p), q // gcd(b, q)) for a in range(p) for b in range(q)}
    assert crt_cyclic(p, q) == (p * q in orders)


def test_crt_rejects_nonpositive():
    with pytest.raises(InvalidCount):
        crt_cyclic(0, 3)


# -- involution tables -----------------------------------------------------


def test_involution_table_examples():
    e6 = involution_table("E6")
    assert {tuple(map(str, r.fixed_summands)) for r in e6 if not r.inner} == {("C4",), ("F4",)}
    g2 = involution_table("G2")
    assert [r.fixed_summands for r in g2] == [(SystemType("A", 1), SystemType("A", 1))]
    a3_outer = [r for r in involution_table("A3") if not r.inner]
    assert {tuple(map(str, r.fixed_summands)) for r in a3_outer} == {("B2",), ("A1", "A1")}


@pytest.mark.parametrize("stype", all_types(8), ids=str)
def test_involution_table_ranks(stype):
    rs = build_root_system(stype)
    outer = [nu for nu in diagram_automorphisms(rs) if nu.order() == 2]
    folded = {fold(rs, nu).stype.rank for nu in outer}
    for row in involution_table(stype):
        rank = sum(s.rank for s in row.fixed_summands)
        if row.inner:
            assert rank + row.center_dim == stype.rank
        else:
            assert row.center_dim == 0
            assert rank in folded


def test_every_type_with_an_outer_involution_has_outer_rows():
    for stype in all_types(8):
        rs = build_root_system(stype)
        has_outer = any(nu.order() == 2 for nu in diagram_automorphisms(rs))
        rows = [r for r in involution_table(stype) if not r.inner]
        # the tabulated a_2 row family starts at n >= 2, so A2 has none
        if str(stype) != "A2":
            assert bool(rows) == has_outer


# -- automorphism specs ------------------------------------------------------


def test_aut_spec_parsing():
    d4 = build_root_system("D4")
    assert aut_from_spec(d4, "id").compiled.is_identity()
    assert aut_from_spec(d4, "triality").order == 3
    assert aut_from_spec(d4, '{"word": [1, 1]}').compiled.is_identity()
    a = aut_from_spec(d4, {"reflections": [[1, 2, 1, 1]]})
    assert a.compiled((1, 2, 1, 1)) == (-1, -2, -1, -1)
    with pytest.raises(ShapeError):
        aut_from_spec(d4, "nonsense")
    with pytest.raises(ShapeError):
        aut_from_spec(d4, {"bogus": 1})


# -- certificates ------------------------------------------------------------


def test_scenarios_cover_every_case_path():
    assert len(SCENARIOS) == 20
    assert {s[4] for s in SCENARIOS} == set(CASE_PATHS)


@pytest.fixture(scope="module")
def certificates():
    return run_scenarios()


@pytest.mark.parametrize("scenario", SCENARIOS, ids=lambda s: s[0])
def test_scenario_path_and_replay(scenario, certificates):
    name, _, _, _, path = scenario
    cert = certificates[name]
    assert cert.case_path == path
    assert cert.verdict == "isotropy formal"
    assert cert.checks and all(c["op"] in CHECKS for c in cert.checks)
    assert reverify(cert) == []
    assert reverify(json.loads(cert.dumps())) == []


def test_certificates_are_deterministic(certificates):
    for name, cert in certificates.items():
        assert scenario_certificate(name).dumps() == cert.dumps()


def test_tampered_certificate_is_detected(certificates):
    doc = json.loads(certificates["d5-form2"].dumps())
    bad = copy.deepcopy(doc)
    bad["checks"][0]["value"] = "tampered"
    mismatches = reverify(bad)
    assert len(mismatches) == 1 and mismatches[0]["op"] == doc["checks"][0]["op"]


def test_certificate_rejects_invalid_pairs():
    a3 = build_root_system("A3")
    with pytest.raises(NotCommuting):
        formality_certificate(a3, aut_from_spec(a3, {"word": [1]}), aut_from_spec(a3, {"word": [2]}))
    with pytest.raises(NotInvolution):
        formality_certificate(a3, aut_from_spec(a3, {"word": [1, 2]}), aut_from_spec(a3, "id"))


def test_unknown_scenario():
    with pytest.raises(KeyError):
        scenario_certificate("no-such-scenario")
