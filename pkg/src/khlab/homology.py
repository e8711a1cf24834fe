"""Homology of filtered complexes and the filtration profile.

The profile of degree i records, at each filtration level q,

    dim im( H^i(F_q C) -> H^i(C) ),   F_q C = span{ generators with q(g) >= q }.

It is computed from ranks only:  dim(Z ∩ F_q) - dim(B ∩ F_q), where
``dim(Z ∩ F_q) = #{g : q(g) >= q} - rank d_i[:, q(g) >= q]`` and
``dim(B ∩ F_q) = rank d_{i-1} - rank d_{i-1}[q(g) < q, :]``.  Both families
of ranks come out of one restricted elimination each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import factorint

from .cube import FilteredComplex, build_complex
from .errors import GammaVanishesModP, RingNotField
from .exactalg import RATIONALS, nested_column_ranks, nested_row_ranks, prime_field, rank, smith_normal_form
from .frobenius import TheoryTriple
from .linkio import LinkDiagram
from .reduce import reduce_complex


@dataclass
class FiltrationProfile:
    steps: dict[int, list[tuple[int, int]]]  # degree -> [(q, dim)] at each candidate level, ascending q

    def value(self, degree: int, q: int) -> int:
        levels = self.steps.get(degree, [])
        for level, dim in levels:
            if level >= q:
                return dim
        return 0

    def is_monotone(self) -> bool:
        return all(
            all(a[1] >= b[1] for a, b in zip(levels, levels[1:])) for levels in self.steps.values()
        )

    def jumps(self, degree: int) -> list[tuple[int, int]]:
        """(q, value) only where the value changes relative to the next higher level."""
        levels = self.steps.get(degree, [])
        out = []
        for k, (q, dim) in enumerate(levels):
            nxt = levels[k + 1][1] if k + 1 < len(levels) else 0
            if dim != nxt:
                out.append((q, dim))
        return out


@dataclass
class HomologyResult:
    ring: object
    triple: TheoryTriple
    dims: dict[int, int] = field(default_factory=dict)  # dimension (field) or free rank (Z)
    torsion: dict[int, list[int]] = field(default_factory=dict)  # prime-power orders, Z only
    profile: FiltrationProfile | None = None

    @property
    def integral(self) -> bool:
        return not self.ring.is_field

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * d for i, d in self.dims.items())

    def nonzero(self) -> dict[int, int]:
        return {i: d for i, d in sorted(self.dims.items()) if d}

    def has_torsion(self, prime: int | None = None) -> bool:
        orders = [o for ts in self.torsion.values() for o in ts]
        if prime is None:
            return bool(orders)
        return any(o % prime == 0 for o in orders)

    def to_json(self) -> dict:
        out = {}
        for i in sorted(set(self.dims) | set(self.torsion)):
            entry = {}
            if self.integral:
                entry["free_rank"] = self.dims.get(i, 0)
                entry["torsion"] = sorted(self.torsion.get(i, []))
            else:
                entry["dim"] = self.dims.get(i, 0)
                entry["torsion"] = []
            if self.profile is not None:
                entry["profile"] = [{"q": q, "dim": d} for q, d in self.profile.jumps(i)]
            out[str(i)] = entry
        return out


def _field(cx: FilteredComplex):
    if not cx.ring.is_field:
        raise RingNotField(f"{cx.ring.name} is not a field; use homology_integral")
    return cx.ring


def homology_field(cx: FilteredComplex, with_profile: bool = False) -> HomologyResult:
    """dim H^i = dim C^i - rank d_i - rank d_{i-1} over Q or F_p."""
    R = _field(cx)
    ranks = {i: rank(cx.d(i), R) for i in cx.degrees}
    dims = {i: cx.dim(i) - ranks[i] - ranks.get(i - 1, 0) for i in cx.degrees}
    result = HomologyResult(R, cx.triple, dims)
    if with_profile:
        result.profile = filtration_profile(cx)
    return result


def homology_integral(cx: FilteredComplex) -> HomologyResult:
    """Free ranks and torsion over Z from Smith forms of the differentials."""
    forms = {i: smith_normal_form(cx.d(i)) for i in cx.degrees}
    dims = {}
    torsion: dict[int, list[int]] = {}
    for i in cx.degrees:
        dims[i] = cx.dim(i) - forms[i].rank - (forms[i - 1].rank if i - 1 in forms else 0)
        orders = []
        if i - 1 in forms:
            for d in forms[i - 1].torsion:
                orders.extend(p**e for p, e in sorted(factorint(d).items()))
        if orders:
            torsion[i] = sorted(orders)
    return HomologyResult(cx.ring, cx.triple, dims, torsion)


def filtration_profile(cx: FilteredComplex, degrees=None) -> FiltrationProfile:
    """Filtration profile of the homology (integral complexes are rationalized first)."""
    if not cx.ring.is_field:
        cx = cx.over(RATIONALS)
    R = cx.ring
    steps = {}
    for i in cx.degrees if degrees is None else degrees:
        gens = cx.generators.get(i, [])
        if not gens:
            steps[i] = []
            continue
        levels = sorted({g.q for g in gens})
        by_level = {q: [] for q in levels}
        for n, g in enumerate(gens):
            by_level[g.q].append(n)
        desc = list(reversed(levels))
        col_ranks = nested_column_ranks(cx.d(i), [by_level[q] for q in desc], R)
        rank_ge = dict(zip(desc, col_ranks))
        count_ge = {}
        acc = 0
        for q in desc:
            acc += len(by_level[q])
            count_ge[q] = acc
        if cx.dim(i - 1):
            row_ranks = nested_row_ranks(cx.d(i - 1), [by_level[q] for q in levels], R)
        else:
            row_ranks = [0] * len(levels)
        total_b = row_ranks[-1]
        out = []
        for k, q in enumerate(levels):
            cycles = count_ge[q] - rank_ge[q]
            boundaries = total_b - (row_ranks[k - 1] if k else 0)
            out.append((q, cycles - boundaries))
        steps[i] = out
    profile = FiltrationProfile(steps)
    if not profile.is_monotone():
        raise AssertionError("filtration profile is not monotone")
    return profile


def compute_complex(d: LinkDiagram, triple: TheoryTriple, reduce: bool = True, **kw) -> FilteredComplex:
    cx = build_complex(d, triple, **kw)
    if reduce:
        cx, _ = reduce_complex(cx)
    return cx


def compare_uct(d: LinkDiagram, triple: TheoryTriple, p: int, reduce: bool = True, **kw) -> dict:
    """Compare integral homology with F_p homology for the same (h, t).

    Checks that dim over F_p equals the integral free rank in every degree,
    that no p-torsion occurs integrally, and that the F_p profile equals
    both the profile of the integral complex tensored with F_p and the
    rationalized integral profile.
    """
    if triple.ring.kind != "Z":
        raise ValueError(f"compare_uct needs an integral theory, got {triple.label}")
    Fp = prime_field(p)
    tp = triple.over(Fp)
    if triple.gamma is None or tp.gamma is None or Fp(triple.gamma) == 0:
        raise GammaVanishesModP(f"gamma does not survive mod {p} for {triple.label}")
    cz = compute_complex(d, triple, reduce=reduce, **kw)
    hz = homology_integral(cz)
    cp = compute_complex(d, tp, reduce=reduce, **kw)
    hp = homology_field(cp)
    prof_p = filtration_profile(cp)
    prof_zp = filtration_profile(cz.over(Fp))
    prof_zq = filtration_profile(cz)
    degrees = sorted(set(hz.dims) | set(hp.dims))
    dims_match = all(hz.dims.get(i, 0) == hp.dims.get(i, 0) for i in degrees)
    no_p_torsion = not hz.has_torsion(p)
    prof_tensor = _profiles_equal(prof_p, prof_zp)
    prof_rational = _profiles_equal(prof_p, prof_zq)
    return {
        "diagram": d.name,
        "theory": triple.label,
        "prime": p,
        "free_ranks": hz.nonzero(),
        "torsion": {i: t for i, t in sorted(hz.torsion.items())},
        "fp_dims": hp.nonzero(),
        "dims_match": dims_match,
        "no_p_torsion": no_p_torsion,
        "profile_matches_tensor": prof_tensor,
        "profile_matches_rational": prof_rational,
        "hypothesis_readings": {
            "0<=h,t<p": 0 <= triple.h < p and 0 <= triple.t < p,
            "h<p and t<p": triple.h < p and triple.t < p,
        },
        "pass": dims_match and no_p_torsion and prof_tensor and prof_rational,
    }


def _profiles_equal(a: FiltrationProfile, b: FiltrationProfile) -> bool:
    degrees = set(a.steps) | set(b.steps)
    return all(a.jumps(i) == b.jumps(i) for i in degrees)
