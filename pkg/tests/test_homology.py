import json

import pytest

from khlab.cube import build_complex
from khlab.errors import GammaVanishesModP, RingNotField
from khlab.exactalg import RATIONALS, SparseMatrix, rank
from khlab.homology import compare_uct, compute_complex, filtration_profile, homology_field, homology_integral

from conftest import triple


def test_unknot_lee(unknot):
    h = homology_field(build_complex(unknot, triple("lee")))
    assert h.nonzero() == {0: 2}


def test_hopf_bar_natan(hopf):
    h = homology_field(compute_complex(hopf, triple("bar-natan")))
    assert h.total_dim == 4
    assert all(i % 2 == 0 for i in h.nonzero())


def test_trefoil_khovanov(trefoil):
    h = homology_field(build_complex(trefoil, triple("khovanov")))
    assert [h.dims.get(i, 0) for i in range(4)] == [2, 0, 1, 1]


def test_unknot_integral_lee(unknot):
    h = homology_integral(build_complex(unknot, triple("z,0,1")))
    assert h.nonzero() == {0: 2} and not h.has_torsion()


def test_trefoil_integral_bar_natan(trefoil):
    h = homology_integral(build_complex(trefoil, triple("z,1,0")))
    assert h.total_dim == 2 and not h.has_torsion()


def test_trefoil_integral_khovanov_torsion(trefoil, mirror_trefoil):
    for d in (trefoil, mirror_trefoil):
        for reduce in (True, False):
            h = homology_integral(compute_complex(d, triple("z,0,0"), reduce=reduce))
            assert h.has_torsion(2)
            assert 2 in [o for ts in h.torsion.values() for o in ts]
    h = homology_integral(build_complex(trefoil, triple("z,0,0")))
    assert h.torsion == {3: [2]}
    assert h.nonzero() == {0: 2, 2: 1, 3: 1}


def test_field_homology_needs_a_field(trefoil):
    with pytest.raises(RingNotField):
        homology_field(build_complex(trefoil, triple("z,0,1")))


def test_unknot_profile(unknot):
    prof = filtration_profile(build_complex(unknot, triple("lee")))
    assert [prof.value(0, q) for q in (-3, -1, 0, 1, 2)] == [2, 2, 1, 1, 0]
    assert prof.jumps(0) == [(-1, 2), (1, 1)]


@pytest.mark.parametrize("spec", ["lee", "bar-natan", "fp:3,1,0", "fp:5,0,1", "z,0,1", "z,1,0"])
@pytest.mark.parametrize("name", ["trefoil", "mirror_trefoil", "figure_eight"])
def test_knot_profile_has_two_odd_steps(spec, name, request):
    d = request.getfixturevalue(name)
    jumps = filtration_profile(compute_complex(d, triple(spec))).jumps(0)
    assert [v for _, v in jumps] == [2, 1]
    assert all(q % 2 for q, _ in jumps)


def bigraded_dims(cx, i):
    """dim Kh^{i,q} for a bigraded complex, straight from q-homogeneous blocks."""
    out = {}
    for q in sorted({g.q for g in cx.generators.get(i, [])}):
        def block(deg_src, m):
            src = [n for n, g in enumerate(cx.generators.get(deg_src, [])) if g.q == q]
            dst = [n for n, g in enumerate(cx.generators.get(deg_src + 1, [])) if g.q == q]
            pos_s = {n: k for k, n in enumerate(src)}
            pos_d = {n: k for k, n in enumerate(dst)}
            ent = {(pos_d[r], pos_s[c]): v for (r, c), v in m.entries.items() if r in pos_d and c in pos_s}
            return SparseMatrix(len(dst), len(src), ent), len(src)

        d_out, n = block(i, cx.d(i))
        d_in, _ = block(i - 1, cx.d(i - 1))
        out[q] = n - rank(d_out, RATIONALS) - rank(d_in, RATIONALS)
    return out


@pytest.mark.parametrize("name", ["trefoil", "figure_eight", "hopf"])
def test_khovanov_profile_is_cumulative_q_dimension(name, request):
    cx = build_complex(request.getfixturevalue(name), triple("khovanov"))
    prof = filtration_profile(cx)
    for i in cx.degrees:
        dims = bigraded_dims(cx, i)
        for q in dims:
            assert prof.value(i, q) == sum(v for k, v in dims.items() if k >= q)


def kernel_profile(cx, i, q):
    """dim im(H(F_q) -> H) from an explicit cycle basis of F_q (oracle for the rank-only formula)."""
    from khlab.exactalg import kernel_basis, rank_stacked

    R = cx.ring
    gens = cx.generators.get(i, [])
    keep = [n for n, g in enumerate(gens) if g.q >= q]
    if not keep:
        return 0
    sub = SparseMatrix(cx.dim(i + 1), len(keep), {(r, keep.index(c)): v for (r, c), v in cx.d(i).entries.items() if c in keep})
    cycles = []
    for z in kernel_basis(sub, R):
        full = [0] * len(gens)
        for k, v in zip(keep, z):
            full[k] = v
        cycles.append(full)
    if not cycles:
        return 0
    bounds = cx.d(i - 1).transpose()
    return rank_stacked(SparseMatrix.from_dense(cycles, R), bounds, R) - rank(bounds, R)


@pytest.mark.parametrize("spec", ["lee", "bar-natan", "fp:3,1,0", "khovanov"])
@pytest.mark.parametrize("name", ["trefoil", "figure_eight", "hopf", "r2_unknot"])
def test_profile_matches_kernel_oracle(spec, name, request):
    cx = build_complex(request.getfixturevalue(name), triple(spec))
    prof = filtration_profile(cx)
    for i in cx.degrees:
        for q in sorted({g.q for g in cx.generators[i]}):
            assert prof.value(i, q) == kernel_profile(cx, i, q)


def test_profile_is_monotone(figure_eight):
    assert filtration_profile(build_complex(figure_eight, triple("lee"))).is_monotone()


def test_integral_tensor_q_equals_rational(figure_eight):
    cz = build_complex(figure_eight, triple("z,0,1"))
    hq = homology_field(cz.over(RATIONALS))
    assert hq.dims == homology_field(build_complex(figure_eight, triple("lee"))).dims
    assert hq.dims == homology_integral(cz).dims


def test_to_json_is_stable(trefoil):
    h = homology_field(build_complex(trefoil, triple("lee")), with_profile=True)
    text = json.dumps(h.to_json())
    assert text == json.dumps(homology_field(build_complex(trefoil, triple("lee")), with_profile=True).to_json())
    assert json.loads(text)["0"] == {"dim": 2, "torsion": [], "profile": [{"q": 1, "dim": 2}, {"q": 3, "dim": 1}]}


def test_compare_uct_examples(trefoil, figure_eight):
    assert compare_uct(trefoil, triple("z,1,0"), 2)["pass"]
    assert compare_uct(trefoil, triple("z,0,1"), 3)["no_p_torsion"]
    rep = compare_uct(figure_eight, triple("z,0,1"), 5)
    assert rep["no_p_torsion"] and rep["dims_match"] and rep["pass"]


def test_compare_uct_gamma_vanishes(trefoil):
    with pytest.raises(GammaVanishesModP):
        compare_uct(trefoil, triple("z,0,1"), 2)  # gamma = 2


def test_compare_uct_records_both_hypothesis_readings(trefoil):
    rep = compare_uct(trefoil, triple("z,0,1"), 3)
    assert rep["hypothesis_readings"] == {"0<=h,t<p": True, "h<p and t<p": True}
    rep = compare_uct(trefoil, triple("z,3,-2"), 5)  # 9 - 8 = 1 = gamma^2
    assert rep["hypothesis_readings"] == {"0<=h,t<p": False, "h<p and t<p": True}
    assert rep["pass"]
