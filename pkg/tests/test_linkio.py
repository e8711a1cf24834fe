import pytest

from khlab.errors import BadLetter, InconsistentDiagram, MalformedPD, TableNotFound
from khlab.linkio import (
    build_diagram,
    connected_sum,
    disjoint_union,
    mirror,
    parse_braid,
    parse_braid_string,
    parse_input,
    parse_orientation,
    parse_pd,
    read_table,
    relabel,
    torus_knot,
)

from conftest import TREFOIL_PD


def test_knot_atlas_trefoil_pd():
    d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]")
    assert d.n_crossings == 3
    assert d.n_components == 1
    assert abs(d.c_plus - d.c_minus) == 3


def test_positive_trefoil_pd(trefoil):
    assert (trefoil.c_plus, trefoil.c_minus) == (3, 0)
    assert trefoil.components == ((1, 2, 3, 4, 5, 6),)


def test_empty_pd_is_unknot():
    d = parse_pd("PD[]")
    assert d.n_crossings == 0
    assert d.n_components == 1
    assert d.c_plus == d.c_minus == 0


def test_dangling_edges_rejected():
    with pytest.raises(InconsistentDiagram):
        parse_pd("PD[X[1,4,2,5]]")


@pytest.mark.parametrize("text", ["PD[X[1,2]", "X[1,2,3,4]", "PD[X[1,2,3]]", "PD[X[a,b,c,d]]", ""])
def test_malformed_pd(text):
    with pytest.raises(MalformedPD):
        parse_pd(text)


def test_opposite_slot_repeat_rejected():
    with pytest.raises(InconsistentDiagram):
        parse_pd("PD[X[1,2,1,2]]")


def test_braid_trefoil():
    d = parse_braid([1, 1, 1], 2)
    assert (d.c_plus, d.c_minus, d.n_components) == (3, 0, 1)


def test_empty_braid_is_unknot():
    d = parse_braid([], 1)
    assert d.n_crossings == 0 and d.n_components == 1


def test_braid_inverse_pair_two_strands_is_two_component():
    # sigma_1 sigma_1^-1 closes up to a two-component unlink diagram
    d = parse_braid([1, -1], 2)
    assert (d.c_plus, d.c_minus) == (1, 1)
    assert d.n_components == 2
    assert d.linking_number(0, 1) == 0


def test_reidemeister_two_unknot():
    d = parse_braid([1, -2], 3)
    assert (d.c_plus, d.c_minus, d.n_components) == (1, 1, 1)


def test_untouched_strands_become_free_loops():
    d = parse_braid([1], 3)
    assert d.free_loops == 1
    assert d.n_components == 2


@pytest.mark.parametrize("word,strands", [([0], 2), ([2], 2), ([-3], 3)])
def test_bad_letters(word, strands):
    with pytest.raises(BadLetter):
        parse_braid(word, strands)


def test_torus_knots():
    t23 = torus_knot(2, 3)
    assert (t23.c_plus, t23.c_minus, t23.n_components) == (3, 0, 1)
    hopf = torus_knot(2, 2)
    assert hopf.n_components == 2
    assert hopf.linking_number(0, 1) == 1
    t34 = torus_knot(3, 4)
    assert t34.n_crossings == 8 and t34.c_minus == 0 and t34.n_components == 1


def test_mirror(trefoil):
    m = mirror(trefoil)
    assert (m.c_plus, m.c_minus) == (0, 3)
    mm = mirror(m)
    assert sorted(x.strands for x in relabel(mm).crossings) == sorted(x.strands for x in relabel(trefoil).crossings)
    assert [x.sign for x in mm.crossings] == [x.sign for x in trefoil.crossings]
    u = mirror(build_diagram([]))
    assert u.n_crossings == 0 and u.n_components == 1


def test_roundtrip_pd(trefoil):
    again = parse_pd(trefoil.to_pd())
    assert [x.strands for x in again.crossings] == [x.strands for x in trefoil.crossings]


def test_orientation_override():
    hint = parse_orientation("3>4; 7>8")
    assert hint == {3: 4, 7: 8}
    with pytest.raises(MalformedPD):
        parse_orientation("3-4")


def test_parse_input_dispatch():
    assert parse_input("braid:2:1,1,1").n_crossings == 3
    assert parse_input(TREFOIL_PD).n_crossings == 3
    assert parse_braid_string("braid:1:").n_crossings == 0


def test_connected_sum_crossings(trefoil, figure_eight):
    s = connected_sum(trefoil, figure_eight)
    assert s.n_crossings == 7
    assert s.n_components == 1
    assert (s.c_plus, s.c_minus) == (trefoil.c_plus + figure_eight.c_plus, trefoil.c_minus + figure_eight.c_minus)


def test_disjoint_union(trefoil, hopf):
    u = disjoint_union(trefoil, hopf)
    assert u.n_components == 3 and u.n_crossings == 5


def test_read_table(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text('name,input\n3_1,"' + TREFOIL_PD + '"\nbad,"PD[X[1,2]"\nbr,"braid:2:1,1"\n')
    rows = read_table(path)
    assert [r.name for r in rows] == ["3_1", "bad", "br"]
    assert rows[1].diagram is None and rows[1].line == 3 and "MALFORMED_PD" in rows[1].error
    assert rows[2].diagram.n_components == 2


def test_read_table_empty(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("name,input\n")
    assert read_table(path) == []


def test_read_table_missing(tmp_path):
    with pytest.raises(TableNotFound) as info:
        read_table(tmp_path / "nope.csv")
    assert info.value.code == "FILE_NOT_FOUND"
