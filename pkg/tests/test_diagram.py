import pytest

from liecascade.diagram import (
    DiagramAut,
    check_aut,
    diagram_automorphisms,
    fold,
    folded_fixed_type,
    folding_table,
    induced_lattice_map,
    min_outer_fixed_rank,
    restrict,
    standard_flip,
    triality,
)
from liecascade.errors import NoOuter, NotAFolding, PreconditionViolated
from liecascade.rootsys import SystemType, all_types, build_root_system, is_positive


def test_aut_counts():
    assert diagram_automorphisms(build_root_system("G2")) == [DiagramAut.identity(2)]
    assert len(diagram_automorphisms(build_root_system("A3"))) == 2
    assert len(diagram_automorphisms(build_root_system("D4"))) == 6


@pytest.mark.parametrize("stype", all_types(8), ids=str)
def test_automorphisms_form_a_group(stype):
    rs = build_root_system(stype)
    auts = diagram_automorphisms(rs)
    assert auts[0].is_identity()
    assert len(auts) <= (6 if str(stype) == "D4" else 2)
    s = set(auts)
    for a in auts:
        assert a.inverse() in s
        for b in auts:
            assert a.compose(b) in s
    for a in auts:
        m = induced_lattice_map(rs, a)
        assert all(is_positive(m(r)) for r in rs.positives)


def test_invalid_automorphism_rejected():
    rs = build_root_system("B3")
    with pytest.raises(PreconditionViolated):
        check_aut(rs, DiagramAut((3, 2, 1)))
    with pytest.raises(PreconditionViolated):
        DiagramAut((1, 1, 2))


def test_induced_maps():
    a2 = build_root_system("A2")
    assert induced_lattice_map(a2, DiagramAut.identity(2)).is_identity()
    flip = induced_lattice_map(a2, standard_flip(a2))
    assert flip((1, 0)) == (0, 1) and flip((1, 1)) == (1, 1)
    for r in range(5, 9):
        rs = build_root_system(f"D{r}")
        m = induced_lattice_map(rs, standard_flip(rs))
        for i in range(r - 2):
            assert m(rs.simples[i]) == rs.simples[i]
        assert m(rs.simples[r - 2]) == rs.simples[r - 1]


def test_standard_flip_missing():
    with pytest.raises(NoOuter):
        standard_flip(build_root_system("B3"))
    with pytest.raises(NoOuter):
        triality(build_root_system("D5"))


def test_folding_examples():
    a3 = build_root_system("A3")
    assert folded_fixed_type(a3, standard_flip(a3)) == SystemType("C", 2)
    d4 = build_root_system("D4")
    assert folded_fixed_type(d4, triality(d4)) == SystemType("G", 2)
    e6 = build_root_system("E6")
    assert folded_fixed_type(e6, standard_flip(e6)) == SystemType("F", 4)
    with pytest.raises(NotAFolding):
        fold(a3, DiagramAut.identity(3))


def test_min_outer_fixed_rank_examples():
    assert min_outer_fixed_rank("E6") == 4
    assert min_outer_fixed_rank("D4") == 2
    assert min_outer_fixed_rank("A2") == 1
    with pytest.raises(NoOuter):
        min_outer_fixed_rank("E7")


@pytest.mark.parametrize("row", folding_table(8), ids=lambda r: f"{r.source}-k{r.order}")
def test_folding_table_fidelity(row):
    rs = build_root_system(row.source)
    nus = [nu for nu in diagram_automorphisms(rs) if nu.order() == row.order]
    assert nus
    for nu in nus:
        assert folded_fixed_type(rs, nu) == row.fixed_type


def test_folding_table_has_every_column():
    cols = {r.column for r in folding_table(8)}
    assert len(cols) == 5


@pytest.mark.parametrize("name", ["A3", "A4", "A5", "D4", "D5", "E6"])
def test_restriction_is_surjective_onto_folded_roots(name):
    rs = build_root_system(name)
    for nu in diagram_automorphisms(rs)[1:]:
        f = fold(rs, nu)
        images = {restrict(rs, nu, r) for r in rs.roots}
        assert f.roots <= images
        # averaging is idempotent and lands in the fixed subspace
        m = induced_lattice_map(rs, nu)
        for v in images:
            assert m(v) == v
