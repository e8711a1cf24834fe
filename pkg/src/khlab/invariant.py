"""The s-invariant, canonical generators and the verification harness.

s is read off the degree-0 filtration profile of a knot: ``s_min`` is the
largest level at which the profile still equals dim H^0 and ``s_max`` the
largest level at which it is nonzero; ``s = (s_min + s_max) / 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cube import FilteredComplex, Generator, _Smoother, build_complex, chain_to_vector, q_of_chain
from .errors import (
    CharTwoUnsupported,
    HypothesisViolated,
    KhlabError,
    NoSquareRatio,
    NotAKnot,
    NotDiagonalizable,
)
from .exactalg import SparseMatrix, kernel_basis, rank, rank_stacked
from .frobenius import TheoryTriple, basis_change_map, diagonal_basis
from .homology import FiltrationProfile, compute_complex, filtration_profile, homology_field
from .linkio import LinkDiagram, connected_sum


@dataclass(frozen=True)
class SReport:
    s_min: int
    s_max: int
    s: int
    triple: TheoryTriple
    diagram: str = ""
    dim_h0: int = 2

    @property
    def spread_ok(self) -> bool:
        return self.s_max - self.s_min == 2

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram,
            "theory": self.triple.label,
            "s_min": self.s_min,
            "s_max": self.s_max,
            "s": self.s,
            "dim_h0": self.dim_h0,
            "spread_ok": self.spread_ok,
        }


def s_from_profile(profile: FiltrationProfile) -> tuple[int, int, int]:
    """(s_min, s_max, dim H^0) from a degree-0 profile."""
    levels = profile.steps.get(0, [])
    if not levels or levels[0][1] == 0:
        raise KhlabError("H^0 vanishes; s is undefined")
    full = levels[0][1]
    s_min = max(q for q, dim in levels if dim == full)
    s_max = max(q for q, dim in levels if dim > 0)
    return s_min, s_max, full


def s_invariant(
    d: LinkDiagram,
    triple: TheoryTriple,
    reduce: bool = True,
    complex: FilteredComplex | None = None,
    **kw,
) -> SReport:
    """Rasmussen-type invariant of a knot for the theory ``triple``.

    Integral theories use the rationalized complex, i.e. classes of the
    torsion-free part with content-normalized representatives.
    """
    if d.n_components != 1:
        raise NotAKnot(f"{d.name or 'diagram'} has {d.n_components} components")
    if triple.gamma is None:
        raise NotDiagonalizable(f"h^2 + 4t is not a nonzero square in {triple.label}")
    cx = complex if complex is not None else compute_complex(d, triple, reduce=reduce, **kw)
    s_min, s_max, full = s_from_profile(filtration_profile(cx, degrees=[0]))
    if (s_min + s_max) % 2:
        raise KhlabError(f"s_min + s_max = {s_min + s_max} is odd")
    return SReport(s_min, s_max, (s_min + s_max) // 2, triple, d.name, full)


# ---------------------------------------------------------------------------
# canonical generators


@dataclass(frozen=True)
class CanonicalGenerator:
    orientation: tuple[bool, ...]  # True = component reversed
    degree: int
    vertex: int
    labels: tuple[str, ...]  # "a" (alpha) / "b" (beta) per circle
    chain: dict  # Generator -> coefficient in the {1, x} basis

    def to_json(self) -> dict:
        return {
            "orientation": ["-" if r else "+" for r in self.orientation],
            "degree": self.degree,
            "labels": "".join(self.labels),
            "terms": len(self.chain),
        }


def _oriented_labels(d: LinkDiagram, sm: _Smoother, reversed_: tuple[bool, ...]):
    """Oriented resolution vertex and alpha/beta labels for one orientation."""
    n_strands = len(d.components)
    signs = d.signs_for(reversed_[:n_strands])
    vertex = sum(1 << j for j, s in enumerate(signs) if s < 0)
    circle_of, k = sm.circle_of_edges(vertex)
    adj = [set() for _ in range(k)]
    for j in range(d.n_crossings):
        pairs = sm.one[j] if (vertex >> j) & 1 else sm.zero[j]
        c1, c2 = circle_of[pairs[0][0]], circle_of[pairs[1][0]]
        if c1 == c2:
            raise KhlabError("oriented resolution meets one circle twice at a crossing")
        adj[c1].add(c2)
        adj[c2].add(c1)
    colour = [None] * k
    for start in range(k):  # circles are ordered by smallest edge, so start is the piece's reference
        if colour[start] is not None:
            continue
        ref_edge = sm.labels[circle_of.index(start)]
        colour[start] = 1 if reversed_[d.component_of(ref_edge)] else 0
        todo = [start]
        while todo:
            c = todo.pop()
            for nb in adj[c]:
                if colour[nb] is None:
                    colour[nb] = 1 - colour[c]
                    todo.append(nb)
                elif colour[nb] == colour[c]:
                    raise KhlabError("Seifert graph is not bipartite")
    colour += [1 if reversed_[n_strands + f] else 0 for f in range(d.free_loops)]
    return vertex, colour


def canonical_generators(
    d: LinkDiagram, triple: TheoryTriple, complex: FilteredComplex | None = None
) -> list[CanonicalGenerator]:
    """One cycle per orientation: the oriented resolution labelled by alpha/beta.

    Circles that meet at a crossing get opposite labels; the label of the
    circle through the lowest edge of each connected piece follows the
    direction of that edge's component.  Every output is checked to be a cycle.
    """
    alpha, beta = diagonal_basis(triple)
    R = triple.ring
    cx = complex if complex is not None else build_complex(d, triple)
    sm = _Smoother(d)
    out = []
    for reversed_ in itertools.product((False, True), repeat=d.n_components):
        vertex, colour = _oriented_labels(d, sm, reversed_)
        elems = [beta if c else alpha for c in colour]
        degree = bin(vertex).count("1") - d.c_minus
        chain = {}
        for m in range(1 << len(elems)):
            coef = 1
            for k, e in enumerate(elems):
                coef *= e.x if (m >> k) & 1 else e.one
                if coef == 0:
                    break
            coef = R(coef)
            if coef != 0:
                p = len(elems) - 2 * bin(m).count("1")
                chain[Generator(degree, vertex, m, p + degree + d.c_plus - d.c_minus)] = coef
        gen = CanonicalGenerator(reversed_, degree, vertex, tuple("b" if c else "a" for c in colour), chain)
        vec = chain_to_vector(cx, degree, chain)
        if any(v != 0 for v in cx.apply_d(degree, vec)):
            raise KhlabError(f"canonical generator for orientation {reversed_} is not a cycle")
        out.append(gen)
    return out


def canonical_span_rank(cx: FilteredComplex, gens: list[CanonicalGenerator]) -> int:
    """Dimension of the span of the generators' classes in homology."""
    total = 0
    for degree in sorted({g.degree for g in gens}):
        rows = [chain_to_vector(cx, degree, g.chain) for g in gens if g.degree == degree]
        top = SparseMatrix.from_dense(rows, cx.ring)
        bounds = cx.d(degree - 1).transpose()
        total += rank_stacked(top, bounds, cx.ring) - rank(bounds, cx.ring)
    return total


# ---------------------------------------------------------------------------
# verification harness


def _hypothesis_readings(triple: TheoryTriple) -> dict:
    R = triple.ring
    h, t = triple.h, triple.t
    return {
        "h^2+4t": (R(h * h + 4 * t) != 0 and R.sqrt(h * h + 4 * t) is not None),
        "h^2+t": (R(h * h + t) != 0 and R.sqrt(h * h + t) is not None),
    }


def verify_main_theorem(d: LinkDiagram, triples: list[TheoryTriple], reduce: bool = True, **kw) -> dict:
    """Compute s under every theory and report PASS iff all values agree.

    Theories with gamma = 0 in their ring are refused (HYPOTHESIS_VIOLATED)
    and do not take part in the comparison.
    """
    if d.n_components != 1:
        raise NotAKnot(f"{d.name or 'diagram'} has {d.n_components} components")
    entries = []
    values = []
    for tr in triples:
        entry = {"theory": tr.label, "hypothesis_readings": _hypothesis_readings(tr)}
        if tr.gamma is None:
            entry["error"] = HypothesisViolated.code
        else:
            rep = s_invariant(d, tr, reduce=reduce, **kw)
            entry.update(s_min=rep.s_min, s_max=rep.s_max, s=rep.s, spread_ok=rep.spread_ok)
            values.append(rep.s)
        entries.append(entry)
    passed = bool(values) and len(set(values)) == 1
    return {
        "diagram": d.name,
        "results": entries,
        "s": values[0] if passed else None,
        "status": "PASS" if passed else "FAIL",
    }


def chain_map_matrix(cx: FilteredComplex, degree: int, a, b) -> SparseMatrix:
    """The map induced by 1 -> 1, y -> a x + b on every tensor factor, in one degree."""
    R = cx.ring
    gens = cx.generators.get(degree, [])
    idx = cx.index(degree)
    entries = {}
    for col, g in enumerate(gens):
        m = g.labels
        bits = [k for k in range(cx.circles[g.vertex]) if (m >> k) & 1]
        for choice in range(1 << len(bits)):
            sub = 0
            coef = 1
            for n, k in enumerate(bits):
                if (choice >> n) & 1:
                    sub |= 1 << k
                    coef *= a
                else:
                    coef *= b
            coef = R(coef)
            if coef == 0:
                continue
            target = idx[Generator(degree, g.vertex, sub, 0)]
            entries[target, col] = R(entries.get((target, col), 0) + coef)
    return SparseMatrix.from_entries(len(gens), len(gens), entries)


def verify_twist_equivalence(d: LinkDiagram, src: TheoryTriple, dst: TheoryTriple, reduce: bool = True) -> dict:
    """Check that the twist equivalence src -> dst is a filtered chain isomorphism.

    The chain-level map is checked to commute with the differentials, to send
    a basis of cycles to cycles, to induce an isomorphism on homology and to
    preserve q on every basis cycle; finally the filtration profiles of the
    two (untwisted) theories are compared.
    """
    R = src.ring
    if R.characteristic == 2:
        raise CharTwoUnsupported("twist equivalence needs characteristic != 2")
    if src.discriminant == 0 or dst.discriminant == 0:
        raise NoSquareRatio("both theories need h^2 + 4t != 0")
    bc = basis_change_map(src, dst)
    cs = build_complex(d, src)
    ct = build_complex(d, dst, sys=bc.target)
    chain_map = True
    cycles_ok = True
    homology_iso = True
    q_preserved = True
    tested = 0
    for i in cs.degrees:
        psi = chain_map_matrix(cs, i, bc.a, bc.b)
        if i + 1 in cs.generators:
            lhs = chain_map_matrix(cs, i + 1, bc.a, bc.b) @ cs.d(i)
            rhs = ct.d(i) @ psi
            diff = {k: R(lhs.entries.get(k, 0) - rhs.entries.get(k, 0)) for k in set(lhs.entries) | set(rhs.entries)}
            chain_map &= all(v == 0 for v in diff.values())
        cycles = kernel_basis(cs.d(i), R)
        images = []
        for z in cycles:
            w = psi.apply(z, R)
            images.append(w)
            if any(v != 0 for v in ct.apply_d(i, w)):
                cycles_ok = False
            qz = q_of_chain(cs, {cs.generators[i][n]: v for n, v in enumerate(z) if v != 0})
            qw = q_of_chain(ct, {ct.generators[i][n]: v for n, v in enumerate(w) if v != 0})
            q_preserved &= qz == qw
            tested += 1
        bounds = ct.d(i - 1).transpose()
        top = SparseMatrix.from_dense(images, R) if images else SparseMatrix.zeros(0, ct.dim(i))
        span = rank_stacked(top, bounds, R) - rank(bounds, R)
        dim_s = len(cycles) - rank(cs.d(i - 1), R)
        homology_iso &= span == dim_s
    prof_src = filtration_profile(compute_complex(d, src, reduce=reduce))
    prof_dst = filtration_profile(compute_complex(d, dst, reduce=reduce))
    degree0 = prof_src.jumps(0) == prof_dst.jumps(0)
    all_degrees = all(prof_src.jumps(i) == prof_dst.jumps(i) for i in set(prof_src.steps) | set(prof_dst.steps))
    hd = homology_field(ct)
    homology_iso &= sum(hd.dims.values()) == sum(homology_field(cs).dims.values())
    passed = chain_map and cycles_ok and homology_iso and q_preserved and degree0
    return {
        "diagram": d.name,
        "src": src.label,
        "dst": dst.label,
        "a": str(bc.a),
        "b": str(bc.b),
        "chain_map": chain_map,
        "cycles_to_cycles": cycles_ok,
        "homology_isomorphism": homology_iso,
        "q_preserved": q_preserved,
        "cycles_tested": tested,
        "profile_degree0_equal": degree0,
        "profile_all_degrees_equal": all_degrees,
        "status": "PASS" if passed else "FAIL",
    }


def s_additivity_check(k1: LinkDiagram, k2: LinkDiagram, triple: TheoryTriple, reduce: bool = True) -> dict:
    """Compare s(k1 # k2) with s(k1) + s(k2)."""
    s1 = s_invariant(k1, triple, reduce=reduce).s
    s2 = s_invariant(k2, triple, reduce=reduce).s
    ks = connected_sum(k1, k2)
    s12 = s_invariant(ks, triple, reduce=reduce).s
    return {
        "left": k1.name,
        "right": k2.name,
        "theory": triple.label,
        "s_left": s1,
        "s_right": s2,
        "s_sum": s12,
        "status": "PASS" if s12 == s1 + s2 else "FAIL",
    }

