"""The rank-two Frobenius systems A_{h,t} = R[x]/(x^2 - h x - t).

Elements are stored as pairs ``(a, b)`` meaning ``a*1 + b*x``; tensors in
A⊗A as 4-tuples on the basis ``1⊗1, 1⊗x, x⊗1, x⊗x``.  The diagonal basis
(alpha, beta) is only ever a view computed from this storage basis, because
the filtration degrees deg(1) = 1, deg(x) = -1 live on ``{1, x}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import CharTwoUnsupported, NoSquareRatio, NotDiagonalizable, RingMismatch
from .exactalg import INTEGERS, RATIONALS, CoefficientRing, prime_field


class Element(NamedTuple):
    one: object
    x: object


ONE = Element(1, 0)
X = Element(0, 1)


@dataclass(frozen=True)
class FrobeniusSystem:
    ring: CoefficientRing
    h: object
    t: object
    twist: Element | None = None

    def __post_init__(self):
        R = self.ring
        object.__setattr__(self, "h", R(self.h))
        object.__setattr__(self, "t", R(self.t))
        if self.twist is not None:
            theta = Element(R(self.twist[0]), R(self.twist[1]))
            object.__setattr__(self, "twist", theta)
            if not R.is_unit(self._mult_det(theta)):
                raise ValueError(f"twist {tuple(theta)} is not a unit of A_{{{self.h},{self.t}}}")

    def __str__(self):
        base = f"A_{{{self.h},{self.t}}} over {self.ring.name}"
        return base if self.twist is None else f"{base} twisted by {tuple(self.twist)}"

    def element(self, a, b) -> Element:
        return Element(self.ring(a), self.ring(b))

    def _coerce(self, a) -> Element:
        if len(a) != 2:
            raise RingMismatch(f"not an element of a rank-two algebra: {a!r}")
        try:
            return Element(self.ring(a[0]), self.ring(a[1]))
        except (TypeError, ValueError) as exc:
            raise RingMismatch(f"{a!r} is not an element over {self.ring.name}: {exc}") from None

    # -- algebra ------------------------------------------------------------

    def multiply(self, a, b) -> Element:
        a, b = self._coerce(a), self._coerce(b)
        R = self.ring
        ab = a.x * b.x  # coefficient of x^2 = h x + t
        return Element(R(a.one * b.one + ab * self.t), R(a.one * b.x + a.x * b.one + ab * self.h))

    def _mult_det(self, theta: Element):
        # multiplication by theta sends 1 -> (t0, t1) and x -> (t1 t, t0 + t1 h)
        return self.ring(theta.one * (theta.one + theta.x * self.h) - theta.x * theta.x * self.t)

    def inverse(self, a) -> Element:
        a = self._coerce(a)
        R = self.ring
        det = self._mult_det(a)
        if not R.is_unit(det):
            raise ZeroDivisionError(f"{tuple(a)} is not a unit")
        # solve theta * u = 1 with the 2x2 multiplication matrix
        return Element(R.div(a.one + a.x * self.h, det), R.div(-a.x, det))

    def is_unit(self, a) -> bool:
        return self.ring.is_unit(self._mult_det(self._coerce(a)))

    # -- coalgebra ----------------------------------------------------------

    def _raw_comultiply(self, a: Element):
        R = self.ring
        # Δ(1) = 1⊗x + x⊗1 - h 1⊗1,  Δ(x) = x⊗x + t 1⊗1
        return (R(-self.h * a.one + self.t * a.x), R(a.one), R(a.one), R(a.x))

    def comultiply(self, a) -> tuple:
        a = self._coerce(a)
        if self.twist is not None:
            a = self.multiply(self.inverse(self.twist), a)
        return self._raw_comultiply(a)

    def counit(self, a):
        a = self._coerce(a)
        if self.twist is not None:
            a = self.multiply(self.twist, a)
        return a.x

    def with_twist(self, theta) -> "FrobeniusSystem":
        return FrobeniusSystem(self.ring, self.h, self.t, Element(*theta))

    # -- tables used by the cube ------------------------------------------

    def product_table(self):
        """(label_a, label_b) -> (coef of 1, coef of x); label 0 is 1, label 1 is x."""
        basis = (ONE, X)
        return {(i, j): tuple(self.multiply(basis[i], basis[j])) for i in range(2) for j in range(2)}

    def coproduct_table(self):
        """label -> coefficients on (1⊗1, 1⊗x, x⊗1, x⊗x)."""
        return {0: self.comultiply(ONE), 1: self.comultiply(X)}


def tensor_multiply(sys: FrobeniusSystem, u: tuple, v: tuple) -> tuple:
    """Product in A⊗A of two 4-tuples."""
    basis = (ONE, X)
    out = [0, 0, 0, 0]
    for i in range(4):
        if u[i] == 0:
            continue
        for j in range(4):
            if v[j] == 0:
                continue
            left = sys.multiply(basis[i >> 1], basis[j >> 1])
            right = sys.multiply(basis[i & 1], basis[j & 1])
            c = u[i] * v[j]
            for a in range(2):
                for b in range(2):
                    out[2 * a + b] += c * left[a] * right[b]
    return tuple(sys.ring(c) for c in out)


# ---------------------------------------------------------------------------
# theory triples


@dataclass(frozen=True)
class TheoryTriple:
    ring: CoefficientRing
    h: object
    t: object
    gamma: object = None

    @classmethod
    def make(cls, ring: CoefficientRing, h, t) -> "TheoryTriple":
        """Build a triple, choosing gamma as the canonical root of h^2 + 4t when it is nonzero."""
        h, t = ring(h), ring(t)
        disc = ring(h * h + 4 * t)
        gamma = ring.sqrt(disc) if disc != 0 else None
        if gamma == 0:
            gamma = None
        return cls(ring, h, t, gamma)

    def __post_init__(self):
        if self.gamma is not None:
            R = self.ring
            if R(self.gamma) == 0 or R(self.gamma * self.gamma) != self.discriminant:
                raise ValueError(f"gamma={self.gamma} does not satisfy gamma^2 = h^2 + 4t != 0")

    @property
    def discriminant(self):
        return self.ring(self.h * self.h + 4 * self.t)

    @property
    def label(self) -> str:
        return f"({self.ring.name},{self.h},{self.t})"

    @property
    def spec(self) -> str:
        return f"{self.ring.spec},{self.h},{self.t}"

    def system(self, twist=None) -> FrobeniusSystem:
        return FrobeniusSystem(self.ring, self.h, self.t, twist)

    def over(self, ring: CoefficientRing) -> "TheoryTriple":
        return TheoryTriple.make(ring, self.h, self.t)

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "TheoryTriple":
        """``q,0,1`` / ``fp:2,1,0`` / ``z,1,0`` or a named theory (khovanov, lee, bar-natan)."""
        key = text.strip().lower()
        if key in NAMED_THEORIES:
            ring, h, t = NAMED_THEORIES[key]
            return cls.make(ring, h, t)
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 3:
            raise ValueError(f"theory triple must look like RING,H,T: {text!r}")
        ring = CoefficientRing.parse(parts[0])
        try:
            return cls.make(ring, int(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad theory triple {text!r}: {exc}") from None


NAMED_THEORIES = {
    "khovanov": (RATIONALS, 0, 0),
    "lee": (RATIONALS, 0, 1),
    "bar-natan": (prime_field(2), 1, 0),
}


def default_panel() -> list[TheoryTriple]:
    """(Q,0,1), (F_2,1,0), (F_3,1,0), (F_5,0,1), (Z,0,1), (Z,1,0)."""
    return [
        TheoryTriple.make(RATIONALS, 0, 1),
        TheoryTriple.make(prime_field(2), 1, 0),
        TheoryTriple.make(prime_field(3), 1, 0),
        TheoryTriple.make(prime_field(5), 0, 1),
        TheoryTriple.make(INTEGERS, 0, 1),
        TheoryTriple.make(INTEGERS, 1, 0),
    ]


def diagonal_basis(triple: TheoryTriple) -> tuple[Element, Element]:
    """(alpha, beta) with alpha^2 = gamma alpha, beta^2 = -gamma beta, alpha beta = 0."""
    if triple.gamma is None:
        raise NotDiagonalizable(f"h^2 + 4t has no nonzero square root in {triple.label}")
    R = triple.ring
    h, g = triple.h, triple.gamma
    if R.characteristic == 2:
        # only h = gamma = 1 survives here
        return Element(0, 1), Element(1, 1)
    alpha = Element(R(-R.half(h - g)), 1)
    beta = Element(R(-R.half(h + g)), 1)
    return alpha, beta


@dataclass(frozen=True)
class BasisChange:
    """Unit-preserving algebra map A_src -> A_dst (twisted by ``theta``), ``y -> a x + b``."""

    src: TheoryTriple
    dst: TheoryTriple
    a: object
    b: object
    theta: Element

    @property
    def target(self) -> FrobeniusSystem:
        return self.dst.system(None if self.theta == Element(1, 0) else self.theta)

    def __call__(self, u) -> Element:
        R = self.dst.ring
        return Element(R(u[0] + u[1] * self.b), R(u[1] * self.a))

    def apply_tensor(self, u: tuple) -> tuple:
        images = (Element(1, 0), self(Element(0, 1)))
        out = [0, 0, 0, 0]
        for i in range(4):
            if u[i] == 0:
                continue
            left, right = images[i >> 1], images[i & 1]
            for p in range(2):
                for q in range(2):
                    out[2 * p + q] += u[i] * left[p] * right[q]
        return tuple(self.dst.ring(c) for c in out)

    def inverse(self, u) -> Element:
        R = self.dst.ring
        # x = (y - b) / a
        ainv = R.inv(self.a)
        return Element(R(u[0] - u[1] * self.b * ainv), R(u[1] * ainv))

    def check(self) -> dict:
        """Verify that the map intertwines product, coproduct and counit on basis elements."""
        S = self.src.system()
        T = self.target
        basis = (Element(1, 0), Element(0, 1))
        prod = all(
            self(S.multiply(u, v)) == T.multiply(self(u), self(v)) for u in basis for v in basis
        )
        coprod = all(self.apply_tensor(S.comultiply(u)) == T.comultiply(self(u)) for u in basis)
        counit = all(self.dst.ring(S.counit(u)) == T.counit(self(u)) for u in basis)
        return {"product": prod, "coproduct": coprod, "counit": counit}


def basis_change_map(src: TheoryTriple, dst: TheoryTriple) -> BasisChange:
    """Isomorphism of Frobenius systems A_src -> A_dst (possibly twisted by 1/a)."""
    if src.ring != dst.ring:
        raise RingMismatch(f"{src.label} and {dst.label} are over different rings")
    R = src.ring
    d_src, d_dst = src.discriminant, dst.discriminant
    if d_src == 0 and d_dst == 0:
        if R.characteristic == 2:
            b = R.sqrt(src.t - dst.t)  # h = 0 on both sides
        else:
            b = R.half(src.h - dst.h)
        return BasisChange(src, dst, R(1), R(b), Element(R(1), R(0)))
    if d_src == 0 or d_dst == 0:
        raise NoSquareRatio(f"h^2+4t vanishes for exactly one of {src.label}, {dst.label}")
    if R.characteristic == 2:
        raise CharTwoUnsupported("twist equivalence needs characteristic != 2")
    if R.kind == "Z":
        a = 1 if d_src == d_dst else None
    else:
        a = R.sqrt(R.div(d_src, d_dst))
    if a is None or a == 0:
        raise NoSquareRatio(f"({d_src})/({d_dst}) is not a nonzero square in {R.name}")
    b = R.half(src.h - a * dst.h)
    return BasisChange(src, dst, R(a), R(b), Element(R.inv(a), R(0)))


def check_axioms(sys: FrobeniusSystem) -> dict:
    """Frobenius-system axioms checked on basis elements.

    Product: associative, commutative, unital.  Coproduct: coassociative,
    cocommutative, counital, and a bimodule map (Δ(ab) = (a⊗1)Δ(b)).
    """
    R = sys.ring
    basis = (ONE, X)

    def tensor(u: Element, v: Element) -> tuple:
        return tuple(R(u[i] * v[j]) for i in range(2) for j in range(2))

    def delta_left(c):
        # (Δ⊗id) applied to a 4-tuple, as an 8-tuple indexed by 4a + 2b + c
        out = [0] * 8
        for i in range(4):
            if c[i] == 0:
                continue
            d = sys.comultiply(basis[i >> 1])
            for j in range(4):
                out[2 * j + (i & 1)] += c[i] * d[j]
        return tuple(R(v) for v in out)

    def delta_right(c):
        out = [0] * 8
        for i in range(4):
            if c[i] == 0:
                continue
            d = sys.comultiply(basis[i & 1])
            for j in range(4):
                out[4 * (i >> 1) + j] += c[i] * d[j]
        return tuple(R(v) for v in out)

    assoc = all(
        sys.multiply(sys.multiply(a, b), c) == sys.multiply(a, sys.multiply(b, c))
        for a in basis for b in basis for c in basis
    )
    comm = all(sys.multiply(a, b) == sys.multiply(b, a) for a in basis for b in basis)
    unit = all(sys.multiply(ONE, a) == a for a in basis)
    coassoc = all(delta_left(sys.comultiply(a)) == delta_right(sys.comultiply(a)) for a in basis)
    cocomm = all((lambda d: d[1] == d[2])(sys.comultiply(a)) for a in basis)
    counit = True
    for a in basis:
        d = sys.comultiply(a)
        left = Element(R(sys.counit(ONE) * d[0] + sys.counit(X) * d[2]), R(sys.counit(ONE) * d[1] + sys.counit(X) * d[3]))
        counit &= left == a
    bimodule = True
    for a in basis:
        for b in basis:
            lhs = sys.comultiply(sys.multiply(a, b))
            rhs = tensor_multiply(sys, tensor(a, ONE), sys.comultiply(b))
            bimodule &= lhs == rhs
    return {
        "associative": assoc,
        "commutative": comm,
        "unital": unit,
        "coassociative": coassoc,
        "cocommutative": cocomm,
        "counital": counit,
        "frobenius": bimodule,
    }
