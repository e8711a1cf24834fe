"""Cube of resolutions: the filtered chain complex of a diagram.

Vertices are bitmasks over crossings (bit j set = 1-smoothing at crossing j).
Circles at a vertex are ordered by their smallest edge label, free loops
last.  A generator is a vertex plus a bitmask over its circles (bit set =
circle labelled x).  Gradings:

    i = r - c-                         (r = number of 1-smoothings)
    p = #(circles labelled 1) - #(circles labelled x)
    q = p + i + c+ - c-

The edge map flipping crossing j at vertex v carries the sign
(-1)^(number of 1-bits of v below j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import CubeTooLarge, MixedDegree, RingMismatch, ZeroChain
from .exactalg import CoefficientRing, SparseMatrix
from .frobenius import FrobeniusSystem, TheoryTriple
from .linkio import LinkDiagram

DEFAULT_MAX_CROSSINGS = 16


@dataclass(frozen=True)
class CubeVertex:
    smoothing: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]  # edge labels per circle; () for a free loop

    @property
    def r(self) -> int:
        return sum(self.smoothing)

    @property
    def n_circles(self) -> int:
        return len(self.circles)


@dataclass(frozen=True, order=True)
class Generator:
    degree: int
    vertex: int
    labels: int
    q: int = field(compare=False)

    def label_string(self, n_circles: int) -> str:
        return "".join("x" if (self.labels >> k) & 1 else "1" for k in range(n_circles))


class _Smoother:
    """Union-find circle tracing shared by every vertex of one diagram."""

    def __init__(self, d: LinkDiagram):
        self.d = d
        labels = d.edges
        self.labels = labels
        self.index = {e: i for i, e in enumerate(labels)}
        idx = self.index
        self.zero = [tuple(tuple(idx[e] for e in pair) for pair in x.zero_pairs()) for x in d.crossings]
        self.one = [tuple(tuple(idx[e] for e in pair) for pair in x.one_pairs()) for x in d.crossings]

    def circle_of_edges(self, vertex: int):
        """(edge index -> circle index, number of edge circles) at a vertex."""
        n = len(self.labels)
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for j in range(len(self.zero)):
            pairs = self.one[j] if (vertex >> j) & 1 else self.zero[j]
            for a, b in pairs:
                ra, rb = find(a), find(b)
                if ra != rb:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
        # roots are the minimal edge index of each class since we always keep the smaller root
        roots = {}
        out = [0] * n
        for e in range(n):
            r = find(e)
            if r not in roots:
                roots[r] = len(roots)
            out[e] = roots[r]
        return out, len(roots)


def smooth(d: LinkDiagram, smoothing) -> CubeVertex:
    """Resolve every crossing as prescribed and trace the resulting circles."""
    bits = tuple(int(b) for b in smoothing)
    if len(bits) != d.n_crossings:
        raise ValueError(f"smoothing of length {len(bits)} for {d.n_crossings} crossings")
    vertex = sum(b << j for j, b in enumerate(bits))
    sm = _Smoother(d)
    circle_of, k = sm.circle_of_edges(vertex)
    circles = [[] for _ in range(k)]
    for e, c in enumerate(circle_of):
        circles[c].append(sm.labels[e])
    return CubeVertex(bits, tuple(tuple(c) for c in circles) + ((),) * d.free_loops)


@dataclass
class FilteredComplex:
    ring: CoefficientRing
    triple: TheoryTriple
    c_plus: int
    c_minus: int
    n_components: int
    generators: dict[int, list[Generator]]
    differential: dict[int, SparseMatrix]  # degree i -> matrix (gens[i+1] x gens[i])
    name: str = ""
    circles: dict[int, int] = field(default_factory=dict, repr=False)  # vertex -> circle count

    @property
    def degrees(self) -> list[int]:
        return sorted(self.generators)

    def size(self) -> int:
        return sum(len(g) for g in self.generators.values())

    def dim(self, i: int) -> int:
        return len(self.generators.get(i, ()))

    def d(self, i: int) -> SparseMatrix:
        """The differential out of degree i (an empty matrix where nothing lives)."""
        if i in self.differential:
            return self.differential[i]
        return SparseMatrix.zeros(self.dim(i + 1), self.dim(i))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * len(g) for i, g in self.generators.items())

    def index(self, i: int) -> dict[Generator, int]:
        return {g: n for n, g in enumerate(self.generators.get(i, ()))}

    def over(self, ring: CoefficientRing) -> "FilteredComplex":
        """Tensor the complex with another coefficient ring (Z -> Q, Z -> F_p, ...)."""
        return FilteredComplex(
            ring,
            self.triple.over(ring),
            self.c_plus,
            self.c_minus,
            self.n_components,
            self.generators,
            {i: m.over(ring) for i, m in self.differential.items()},
            self.name,
            self.circles,
        )

    def d_squared_is_zero(self) -> bool:
        for i in self.degrees:
            if i + 1 in self.generators:
                if not (self.d(i + 1) @ self.d(i)).is_zero_over(self.ring):
                    return False
        return True

    def is_filtered(self, strict_bigraded: bool = False) -> bool:
        """Every entry g -> g' has q(g') >= q(g) (or == when ``strict_bigraded``)."""
        for i, m in self.differential.items():
            src, dst = self.generators[i], self.generators[i + 1]
            for (r, c) in m.entries:
                dq = dst[r].q - src[c].q
                if dq < 0 or (strict_bigraded and dq != 0):
                    return False
        return True

    def apply_d(self, i: int, vec) -> list:
        return self.d(i).apply(vec, self.ring)


def build_complex(
    d: LinkDiagram,
    triple: TheoryTriple,
    sys: FrobeniusSystem | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> FilteredComplex:
    """The cube-of-resolutions complex C*(d) for the Frobenius system of ``triple``."""
    if sys is None:
        sys = triple.system()
    if sys.ring != triple.ring or sys.h != triple.h or sys.t != triple.t:
        raise RingMismatch(f"system {sys} does not match theory {triple.label}")
    c = d.n_crossings
    if c > max_crossings:
        raise CubeTooLarge(f"{c} crossings exceeds the limit of {max_crossings}")
    R = triple.ring
    cp, cm = d.c_plus, d.c_minus
    shift = cp - cm
    free = d.free_loops
    sm = _Smoother(d)

    n_vertices = 1 << c
    circle_of = [None] * n_vertices
    n_edge_circles = [0] * n_vertices
    for v in range(n_vertices):
        circle_of[v], n_edge_circles[v] = sm.circle_of_edges(v)

    by_r: dict[int, list[int]] = {}
    for v in range(n_vertices):
        by_r.setdefault(bin(v).count("1"), []).append(v)

    generators: dict[int, list[Generator]] = {}
    offset = [0] * n_vertices
    circles: dict[int, int] = {}
    for r in range(c + 1):
        i = r - cm
        gens: list[Generator] = []
        for v in by_r.get(r, ()):
            k = n_edge_circles[v] + free
            circles[v] = k
            offset[v] = len(gens)
            for m in range(1 << k):
                p = k - 2 * bin(m).count("1")
                gens.append(Generator(i, v, m, p + i + shift))
        generators[i] = gens

    prod = {key: tuple(R(v) for v in val) for key, val in sys.product_table().items()}
    coprod = {key: tuple(R(v) for v in val) for key, val in sys.coproduct_table().items()}
    entries: dict[int, dict] = {i: {} for i in range(-cm, c - cm)}

    for v in range(n_vertices):
        cv = circle_of[v]
        kv = n_edge_circles[v] + free
        i = bin(v).count("1") - cm
        for j in range(c):
            if (v >> j) & 1:
                continue
            w = v | (1 << j)
            cw = circle_of[w]
            ew = n_edge_circles[w]
            sign = -1 if bin(v & ((1 << j) - 1)).count("1") % 2 else 1
            (a, b), (cc, dd) = sm.zero[j]
            ca, cc_ = cv[a], cv[cc]
            # target position of every circle of v not touched by crossing j
            perm = [None] * kv
            for e in range(len(cv)):
                k = cv[e]
                if perm[k] is None and k != ca and k != cc_:
                    perm[k] = cw[e]
            for f in range(free):
                perm[n_edge_circles[v] + f] = ew + f
            others = [(k, perm[k]) for k in range(kv) if perm[k] is not None]
            target = entries[i]
            off_v, off_w = offset[v], offset[w]
            if ca != cc_:
                M = cw[a]
                for m in range(1 << kv):
                    base = 0
                    for k, pk in others:
                        if (m >> k) & 1:
                            base |= 1 << pk
                    c1, cx = prod[(m >> ca) & 1, (m >> cc_) & 1]
                    col = off_v + m
                    if c1:
                        target[off_w + base, col] = R(sign * c1)
                    if cx:
                        target[off_w + (base | (1 << M)), col] = R(sign * cx)
            else:
                A, B = cw[a], cw[b]
                bits = (0, 1 << B, 1 << A, (1 << A) | (1 << B))
                for m in range(1 << kv):
                    base = 0
                    for k, pk in others:
                        if (m >> k) & 1:
                            base |= 1 << pk
                    col = off_v + m
                    for coef, extra in zip(coprod[(m >> ca) & 1], bits):
                        if coef:
                            target[off_w + (base | extra), col] = R(sign * coef)

    differential = {}
    for i, ent in entries.items():
        differential[i] = SparseMatrix(len(generators[i + 1]), len(generators[i]), {k: v for k, v in ent.items() if v != 0})
    return FilteredComplex(R, triple, cp, cm, d.n_components, generators, differential, d.name, circles)


def q_of_chain(cx: FilteredComplex, chain: Mapping[Generator, object]) -> int:
    """Filtration degree of a chain: the minimum q over its nonzero terms."""
    R = cx.ring
    live = [g for g, coef in chain.items() if R(coef) != 0]
    if not live:
        raise ZeroChain("the chain is zero")
    degrees = {g.degree for g in live}
    if len(degrees) > 1:
        raise MixedDegree(f"chain spans homological degrees {sorted(degrees)}")
    return min(g.q for g in live)


def chain_to_vector(cx: FilteredComplex, degree: int, chain: Mapping[Generator, object]) -> list:
    idx = cx.index(degree)
    vec = [0] * cx.dim(degree)
    for g, coef in chain.items():
        vec[idx[g]] = cx.ring(vec[idx[g]] + coef)
    return vec


def vector_to_chain(cx: FilteredComplex, degree: int, vec) -> dict[Generator, object]:
    gens = cx.generators[degree]
    return {gens[n]: v for n, v in enumerate(vec) if v != 0}
