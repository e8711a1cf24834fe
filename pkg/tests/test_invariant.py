import pytest

from khlab.cube import build_complex, q_of_chain
from khlab.errors import CharTwoUnsupported, NoSquareRatio, NotAKnot, NotDiagonalizable
from khlab.exactalg import RATIONALS
from khlab.frobenius import default_panel
from khlab.invariant import (
    canonical_generators,
    canonical_span_rank,
    chain_map_matrix,
    s_additivity_check,
    s_invariant,
    verify_main_theorem,
    verify_twist_equivalence,
)
from khlab.linkio import connected_sum, mirror, parse_braid, torus_knot

from conftest import triple

SMALL_PANEL = [triple(s) for s in ("lee", "bar-natan", "fp:5,0,1", "z,1,0")]


@pytest.mark.parametrize("tr", default_panel(), ids=lambda t: t.label)
def test_unknot_s(unknot, tr):
    rep = s_invariant(unknot, tr)
    assert (rep.s_min, rep.s_max, rep.s) == (-1, 1, 0)


def test_trefoil_s(trefoil, mirror_trefoil):
    rep = s_invariant(trefoil, triple("lee"))
    assert (rep.s_min, rep.s_max, rep.s) == (1, 3, 2)
    assert rep.spread_ok
    # positive diagrams: s = c+ - (Seifert circles) + 1
    assert rep.s == trefoil.c_plus - 2 + 1
    assert s_invariant(mirror_trefoil, triple("lee")).s == -2


def test_s_errors(hopf, trefoil):
    with pytest.raises(NotAKnot):
        s_invariant(hopf, triple("lee"))
    with pytest.raises(NotDiagonalizable):
        s_invariant(trefoil, triple("khovanov"))


def test_s_reduce_flag_agrees(figure_eight):
    for tr in default_panel():
        a = s_invariant(figure_eight, tr, reduce=True)
        b = s_invariant(figure_eight, tr, reduce=False)
        assert (a.s_min, a.s_max) == (b.s_min, b.s_max)


@pytest.mark.parametrize("pq", [(2, 3), (2, 5), (3, 4)])
def test_torus_knot_s(pq):
    p, q = pq
    assert s_invariant(torus_knot(p, q), triple("bar-natan")).s == (p - 1) * (q - 1)


def test_main_theorem_examples(trefoil, figure_eight, unknot):
    rep = verify_main_theorem(trefoil, SMALL_PANEL)
    assert rep["status"] == "PASS" and rep["s"] == 2
    assert [e["s_min"] for e in rep["results"]] == [1, 1, 1, 1]
    rep = verify_main_theorem(figure_eight, SMALL_PANEL)
    assert rep["status"] == "PASS" and rep["s"] == 0
    assert verify_main_theorem(unknot, default_panel())["s"] == 0


def test_main_theorem_refuses_gamma_zero(trefoil):
    rep = verify_main_theorem(trefoil, [triple("fp:3,1,2"), triple("lee")])
    assert rep["results"][0]["error"] == "HYPOTHESIS_VIOLATED"
    assert rep["results"][0]["hypothesis_readings"] == {"h^2+4t": False, "h^2+t": False}  # 1 + 8 and 1 + 2 both vanish mod 3
    assert rep["status"] == "PASS"


def test_main_theorem_records_both_readings(trefoil):
    rep = verify_main_theorem(trefoil, [triple("lee")])
    assert rep["results"][0]["hypothesis_readings"] == {"h^2+4t": True, "h^2+t": True}


def test_main_theorem_needs_a_knot(hopf):
    with pytest.raises(NotAKnot):
        verify_main_theorem(hopf, SMALL_PANEL)


def test_canonical_unknot_lee(unknot):
    gens = canonical_generators(unknot, triple("lee"))
    assert len(gens) == 2
    chains = [{g.labels: v for g, v in gen.chain.items()} for gen in gens]
    assert chains == [{0: 1, 1: 1}, {0: -1, 1: 1}]  # alpha = x + 1, beta = x - 1


def test_canonical_trefoil_bar_natan(trefoil):
    tr = triple("bar-natan")
    cx = build_complex(trefoil, tr)
    gens = canonical_generators(trefoil, tr, complex=cx)
    assert [g.degree for g in gens] == [0, 0]
    assert canonical_span_rank(cx, gens) == 2


def test_canonical_hopf_lee(hopf):
    tr = triple("lee")
    cx = build_complex(hopf, tr)
    gens = canonical_generators(hopf, tr, complex=cx)
    assert len(gens) == 4
    assert sorted(g.degree for g in gens) == [0, 0, 2, 2]
    assert canonical_span_rank(cx, gens) == 4


@pytest.mark.parametrize("word,strands", [([1, 1, 1, 1], 2), ([1, -2, 1, -2], 3), ([1, 2, 1, 2], 3), ([1], 3), ([1, -2, 2, 1], 3)])
@pytest.mark.parametrize("spec", ["lee", "bar-natan", "fp:3,1,0", "z,0,1"])
def test_canonical_span_full_rank(word, strands, spec):
    d = parse_braid(word, strands)
    tr = triple(spec)
    cx = build_complex(d, tr)
    gens = canonical_generators(d, tr, complex=cx)
    assert len(gens) == 2**d.n_components
    if tr.ring.is_field:
        assert canonical_span_rank(cx, gens) == 2**d.n_components


def test_canonical_needs_gamma(trefoil):
    with pytest.raises(NotDiagonalizable):
        canonical_generators(trefoil, triple("khovanov"))


def test_twist_scaling(trefoil):
    rep = verify_twist_equivalence(trefoil, triple("q,0,4"), triple("q,0,1"))
    assert rep["status"] == "PASS"
    assert rep["profile_degree0_equal"] and rep["profile_all_degrees_equal"]
    assert (rep["a"], rep["b"]) == ("2", "0")


def test_twist_shift_preserves_q(unknot):
    rep = verify_twist_equivalence(unknot, triple("q,2,0"), triple("q,0,1"))
    assert rep["status"] == "PASS" and rep["q_preserved"] and rep["cycles_tested"] == 2
    # the label x of the source goes to x + 1, which still has filtration degree -1
    src = build_complex(unknot, triple("q,2,0"))
    psi = chain_map_matrix(src, 0, 1, 1)
    x_gen = next(g for g in src.generators[0] if g.labels == 1)
    image = psi.apply([1 if g == x_gen else 0 for g in src.generators[0]], RATIONALS)
    assert q_of_chain(src, {g: v for g, v in zip(src.generators[0], image) if v}) == -1 == x_gen.q


def test_twist_identity(figure_eight):
    rep = verify_twist_equivalence(figure_eight, triple("lee"), triple("lee"))
    assert rep["status"] == "PASS" and (rep["a"], rep["b"]) == ("1", "0")


def test_twist_errors(trefoil):
    with pytest.raises(NoSquareRatio):
        verify_twist_equivalence(trefoil, triple("q,0,2"), triple("q,0,1"))
    with pytest.raises(NoSquareRatio):
        verify_twist_equivalence(trefoil, triple("q,2,-1"), triple("q,0,1"))
    with pytest.raises(CharTwoUnsupported):
        verify_twist_equivalence(trefoil, triple("bar-natan"), triple("bar-natan"))


def test_twist_over_fp(figure_eight):
    rep = verify_twist_equivalence(figure_eight, triple("fp:5,0,1"), triple("fp:5,1,0"))
    assert rep["status"] == "PASS"


def test_additivity(trefoil, mirror_trefoil, unknot, figure_eight):
    assert s_additivity_check(trefoil, trefoil, triple("bar-natan"))["s_sum"] == 4
    rep = s_additivity_check(trefoil, mirror_trefoil, triple("lee"))
    assert rep["s_sum"] == 0 and rep["status"] == "PASS"
    rep = s_additivity_check(unknot, trefoil, triple("lee"))
    assert rep["s_sum"] == 2 and rep["status"] == "PASS"
    assert s_additivity_check(trefoil, figure_eight, triple("fp:3,1,0"))["status"] == "PASS"


def test_mirror_negates_s(figure_eight):
    d = connected_sum(torus_knot(2, 3), torus_knot(2, 5))
    for spec in ("lee", "bar-natan"):
        s = s_invariant(d, triple(spec)).s
        assert s == 6
        assert s_invariant(mirror(d), triple(spec)).s == -s
