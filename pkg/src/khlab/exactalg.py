"""Exact coefficient rings, sparse matrices and elimination.

Three coefficient rings are supported: the rationals (Python ints and
``Fraction`` mixed, integral values always stored as ``int``), prime fields
``F_p`` with ``p < 2**31`` (ints reduced into ``[0, p)``) and the integers.

The sparse eliminations in this module pick pivots Markowitz style: the
column with the fewest entries first, then the shortest row inside it, and
over Q the entry with the smallest numerator/denominator bit length.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy.ntheory import isprime, sqrt_mod

from .errors import RingNotField, ShapeMismatch

MAX_PRIME = 2**31


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "Q", "Z" or "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p!r}")
            if self.p >= MAX_PRIME:
                raise ValueError(f"prime {self.p} exceeds the supported bound 2**31")
        elif self.p is not None:
            raise ValueError(f"ring {self.kind} takes no modulus")

    # -- naming -----------------------------------------------------------

    @property
    def name(self) -> str:
        return f"F_{self.p}" if self.kind == "Fp" else self.kind

    @property
    def spec(self) -> str:
        """Command-line spelling: ``q``, ``z`` or ``fp:<p>``."""
        return f"fp:{self.p}" if self.kind == "Fp" else self.kind.lower()

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return RATIONALS
        if t in ("z", "zz", "integers"):
            return INTEGERS
        if t.startswith("f"):
            digits = t[3:] if t.startswith("fp:") else t[1:].lstrip("_")
            try:
                return prime_field(int(digits))
            except ValueError as exc:
                raise ValueError(f"bad prime field {text!r}: {exc}") from None
        raise ValueError(f"unknown ring {text!r} (expected q, z or fp:<p>)")

    # -- arithmetic -------------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def __call__(self, v):
        """Coerce an int or Fraction into this ring."""
        if self.kind == "Fp":
            if isinstance(v, Fraction):
                return v.numerator * pow(v.denominator, -1, self.p) % self.p
            return int(v) % self.p
        if isinstance(v, Fraction):
            if v.denominator == 1:
                return v.numerator
            if self.kind == "Z":
                raise ValueError(f"{v} is not an integer")
            return v
        return int(v)

    def is_unit(self, v) -> bool:
        if self.kind == "Z":
            return v == 1 or v == -1
        return v != 0

    def inv(self, v):
        if self.kind == "Fp":
            return pow(v, -1, self.p)
        if self.kind == "Z":
            if v not in (1, -1):
                raise ZeroDivisionError(f"{v} is not a unit in Z")
            return v
        if v == 0:
            raise ZeroDivisionError("division by zero")
        return _qnorm(1 / Fraction(v))

    def div(self, a, b):
        if b == 1:
            return a
        if b == -1:
            return self(-a)
        if self.kind == "Fp":
            return a * pow(b, -1, self.p) % self.p
        q = Fraction(a) / b
        if self.kind == "Z":
            if q.denominator != 1:
                raise ZeroDivisionError(f"{a}/{b} is not an integer")
            return q.numerator
        return _qnorm(q)

    def half(self, v):
        if self.characteristic == 2:
            raise ZeroDivisionError("2 is not invertible in characteristic 2")
        return self.div(self(v), 2)

    def sqrt(self, v):
        """A square root of ``v`` in the ring, or None.

        The root returned is canonical: non-negative over Q and Z, the
        smallest representative over F_p.
        """
        v = self(v)
        if self.kind == "Fp":
            if v == 0:
                return 0
            return sqrt_mod(v, self.p)
        if v < 0:
            return None
        f = Fraction(v)
        rn, rd = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if rn * rn != f.numerator or rd * rd != f.denominator:
            return None
        return _qnorm(Fraction(rn, rd))


def _qnorm(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


RATIONALS = CoefficientRing("Q")
INTEGERS = CoefficientRing("Z")


def prime_field(p: int) -> CoefficientRing:
    return CoefficientRing("Fp", p)


# ---------------------------------------------------------------------------
# sparse matrices


@dataclass(frozen=True)
class SparseMatrix:
    """An immutable sparse matrix: ``entries`` maps ``(row, col)`` to a nonzero scalar."""

    n_rows: int
    n_cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.n_rows}x{self.n_cols}")
            if v == 0:
                raise ValueError(f"stored zero at ({r}, {c})")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ring: CoefficientRing | None = None):
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != n_cols:
                raise ShapeMismatch("ragged dense matrix")
            for c, v in enumerate(row):
                if ring is not None:
                    v = ring(v)
                if v != 0:
                    entries[r, c] = v
        return cls(n_rows, n_cols, entries)

    @classmethod
    def from_entries(cls, n_rows, n_cols, entries, ring: CoefficientRing | None = None):
        """Build from possibly-zero entries, coercing into ``ring`` if given."""
        clean = {}
        for key, v in entries.items():
            if ring is not None:
                v = ring(v)
            if v != 0:
                clean[key] = v
        return cls(n_rows, n_cols, clean)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int):
        return cls(n_rows, n_cols, {})

    @property
    def shape(self):
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def over(self, ring: CoefficientRing) -> "SparseMatrix":
        """The same matrix with entries mapped into ``ring`` (e.g. Z -> F_p)."""
        return SparseMatrix.from_entries(self.n_rows, self.n_cols, self.entries, ring)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.n_cols, self.n_rows, {(c, r): v for (r, c), v in self.entries.items()})

    def to_dense(self) -> list[list]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> dict[int, dict]:
        rows: dict[int, dict] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows

    def col_dicts(self) -> dict[int, dict]:
        cols: dict[int, dict] = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, {})[r] = v
        return cols

    def apply(self, vec: Sequence, ring: CoefficientRing) -> list:
        """Matrix times column vector."""
        if len(vec) != self.n_cols:
            raise ShapeMismatch(f"vector of length {len(vec)} for {self.n_rows}x{self.n_cols} matrix")
        out = [0] * self.n_rows
        for (r, c), v in self.entries.items():
            if vec[c] != 0:
                out[r] = out[r] + v * vec[c]
        return [ring(x) for x in out]

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n_cols != other.n_rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        ocols = other.row_dicts()
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in ocols.get(k, {}).items():
                acc[r, c] = acc.get((r, c), 0) + v * w
        return SparseMatrix(self.n_rows, other.n_cols, {k: _qnorm(v) for k, v in acc.items() if v != 0})

    def is_zero_over(self, ring: CoefficientRing) -> bool:
        return all(ring(v) == 0 for v in self.entries.values())


def vstack(top: SparseMatrix, bottom: SparseMatrix) -> SparseMatrix:
    if top.n_cols != bottom.n_cols:
        raise ShapeMismatch(f"cannot stack {top.shape} over {bottom.shape}")
    entries = dict(top.entries)
    off = top.n_rows
    for (r, c), v in bottom.entries.items():
        entries[r + off, c] = v
    return SparseMatrix(top.n_rows + bottom.n_rows, top.n_cols, entries)


# ---------------------------------------------------------------------------
# elimination over a field


def _require_field(ring):
    if not ring.is_field:
        raise RingNotField(f"{ring.name} is not a field")


def _pivot_cost(v) -> int:
    if v == 1 or v == -1:
        return 0
    if isinstance(v, Fraction):
        return v.numerator.bit_length() + v.denominator.bit_length()
    return abs(v).bit_length()


def _load(m: SparseMatrix, ring: CoefficientRing):
    rows: dict[int, dict] = {}
    cols: dict[int, set] = {}
    for (r, c), v in m.entries.items():
        v = ring(v)
        if v != 0:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
    return rows, cols


def _eliminate(rows, cols, ring, groups) -> list[int]:
    """Sparse Gaussian elimination with pivots restricted group by group.

    ``groups`` is a sequence of column collections.  Pivots are chosen only
    among the columns of the current group; once a group is exhausted its
    columns are zero in the Schur complement.  Returns the cumulative rank
    after each group, i.e. the ranks of the column blocks
    ``g0``, ``g0+g1``, ... of the original matrix.
    """
    mod = ring.p if ring.kind == "Fp" else None
    rank = 0
    out = []
    for group in groups:
        members = set(group)
        heap = [(len(cols[c]), c) for c in members if cols.get(c)]
        heapq.heapify(heap)
        while heap:
            n, c = heapq.heappop(heap)
            rset = cols.get(c)
            if not rset:
                continue
            if len(rset) != n:
                heapq.heappush(heap, (len(rset), c))
                continue
            r = min(rset, key=lambda r: (len(rows[r]), _pivot_cost(rows[r][c]), r))
            prow = rows.pop(r)
            pv = prow.pop(c)
            for c2 in prow:
                cols[c2].discard(r)
            rset.discard(r)
            if mod is not None:
                pinv = pow(pv, -1, mod)
            for r2 in sorted(rset):
                row2 = rows[r2]
                if mod is not None:
                    f = row2.pop(c) * pinv % mod
                else:
                    f = ring.div(row2.pop(c), pv)
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - f * v
                    if mod is not None:
                        nv %= mod
                    if nv == 0:
                        if c2 in row2:
                            del row2[c2]
                            cols[c2].discard(r2)
                    else:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = nv
            del cols[c]
            rank += 1
            for c2 in prow:
                if c2 in members and cols[c2]:
                    heapq.heappush(heap, (len(cols[c2]), c2))
        out.append(rank)
    return out


def rank(m: SparseMatrix, ring: CoefficientRing) -> int:
    """Rank of ``m`` over a field (entries are coerced into ``ring``)."""
    _require_field(ring)
    rows, cols = _load(m, ring)
    return _eliminate(rows, cols, ring, [list(cols)])[0]


def rank_stacked(top: SparseMatrix, bottom: SparseMatrix, ring: CoefficientRing) -> int:
    """Rank of ``top`` stacked over ``bottom``, i.e. dim(rowspan(top) + rowspan(bottom))."""
    _require_field(ring)
    return rank(vstack(top, bottom), ring)


def nested_column_ranks(m: SparseMatrix, groups: Sequence[Iterable[int]], ring: CoefficientRing) -> list[int]:
    """Ranks of the column blocks ``g0``, ``g0 ∪ g1``, ... in one elimination."""
    _require_field(ring)
    rows, cols = _load(m, ring)
    return _eliminate(rows, cols, ring, [list(g) for g in groups])


def nested_row_ranks(m: SparseMatrix, groups: Sequence[Iterable[int]], ring: CoefficientRing) -> list[int]:
    """Ranks of the row blocks ``g0``, ``g0 ∪ g1``, ... in one elimination."""
    return nested_column_ranks(m.transpose(), groups, ring)


def _rref(dense: list[list], ring: CoefficientRing):
    """Reduced row echelon form in place; returns the pivot columns."""
    n_rows = len(dense)
    n_cols = len(dense[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if dense[i][c] != 0), None)
        if pr is None:
            continue
        dense[r], dense[pr] = dense[pr], dense[r]
        inv = ring.inv(dense[r][c])
        dense[r] = [ring(v * inv) for v in dense[r]]
        for i in range(n_rows):
            if i != r and dense[i][c] != 0:
                f = dense[i][c]
                dense[i] = [ring(a - f * b) for a, b in zip(dense[i], dense[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return pivots


def solve_in_span(m: SparseMatrix, v: Sequence, ring: CoefficientRing):
    """Some ``x`` with ``m @ x == v``, or None if ``v`` is outside the column span."""
    _require_field(ring)
    if len(v) != m.n_rows:
        raise ShapeMismatch(f"right-hand side of length {len(v)} for {m.n_rows} rows")
    dense = m.over(ring).to_dense()
    aug = [row + [ring(b)] for row, b in zip(dense, v)]
    if not aug:
        return [0] * m.n_cols
    pivots = _rref(aug, ring)
    if m.n_cols in pivots:
        return None
    x = [0] * m.n_cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][m.n_cols]
    return x


def kernel_basis(m: SparseMatrix, ring: CoefficientRing) -> list[list]:
    """A basis of the null space of ``m`` (dense; intended for small matrices)."""
    _require_field(ring)
    dense = m.over(ring).to_dense()
    if not dense:
        return [[1 if j == i else 0 for j in range(m.n_cols)] for i in range(m.n_cols)]
    pivots = _rref(dense, ring)
    free = [c for c in range(m.n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [0] * m.n_cols
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = ring(-dense[i][f])
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]  # nonzero invariant factors d1 | d2 | ...

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)


def _dense_snf(a: list[list[int]], track: bool = False):
    """Smith form of a dense integer matrix by min-abs pivoting.

    Returns ``(diag, U, D, V)``; ``U`` and ``V`` are only built when
    ``track`` is set, in which case ``U @ a @ V == D``.
    """
    a = [list(row) for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        if track:
            U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            row[dst] += f * row[src]
        if track:
            for row in V:
                row[dst] += f * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(i, t) for i in range(t + 1, m) if a[i][t]] + [(t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                i, j = min(rest, key=lambda ij: abs(a[ij[0]][ij[1]]))
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            if track:
                U[t] = [-x for x in U[t]]
            a[t] = [-x for x in a[t]]
        diag.append(a[t][t])
        t += 1
    return diag, U, a, V


def smith_decomposition(m: SparseMatrix):
    """Dense Smith decomposition ``(U, D, V)`` with ``U @ m @ V == D``, U and V unimodular."""
    dense = m.over(INTEGERS).to_dense()
    if m.n_rows == 0 or m.n_cols == 0:
        return (
            SparseMatrix.identity(m.n_rows),
            SparseMatrix.zeros(m.n_rows, m.n_cols),
            SparseMatrix.identity(m.n_cols),
        )
    _, U, D, V = _dense_snf(dense, track=True)
    return SparseMatrix.from_dense(U), SparseMatrix.from_dense(D), SparseMatrix.from_dense(V)


def smith_normal_form(m: SparseMatrix) -> SmithForm:
    """Invariant factors of an integer matrix.

    Unit (±1) pivots are eliminated sparsely first; whatever remains has no
    unit entries and is finished by dense min-abs pivoting.
    """
    rows, cols = _load(m, INTEGERS)
    ones = 0
    heap = [(len(rs), c) for c, rs in cols.items()]
    heapq.heapify(heap)
    while heap:
        n, c = heapq.heappop(heap)
        rset = cols.get(c)
        if not rset:
            continue
        if len(rset) != n:
            heapq.heappush(heap, (len(rset), c))
            continue
        units = [r for r in rset if rows[r][c] in (1, -1)]
        if not units:
            continue
        r = min(units, key=lambda r: (len(rows[r]), r))
        prow = rows.pop(r)
        pv = prow.pop(c)
        for c2 in prow:
            cols[c2].discard(r)
        rset.discard(r)
        for r2 in sorted(rset):
            row2 = rows[r2]
            f = row2.pop(c) * pv
            for c2, v in prow.items():
                nv = row2.get(c2, 0) - f * v
                if nv == 0:
                    if c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
                else:
                    if c2 not in row2:
                        cols[c2].add(r2)
                    row2[c2] = nv
        del cols[c]
        ones += 1
        for c2 in prow:
            if cols[c2]:
                heapq.heappush(heap, (len(cols[c2]), c2))
    live_rows = sorted(r for r, row in rows.items() if row)
    live_cols = sorted(c for c, rs in cols.items() if rs)
    rest: list[int] = []
    if live_rows and live_cols:
        cidx = {c: j for j, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for i, r in enumerate(live_rows):
            for c, v in rows[r].items():
                dense[i][cidx[c]] = v
        rest, _, _, _ = _dense_snf(dense)
    return SmithForm(tuple([1] * ones + rest))


def determinant_divisors(m: SparseMatrix) -> list[int]:
    """gcd of all k x k minors for k = 1, 2, ... (brute force; tiny matrices only)."""
    from itertools import combinations

    dense = m.over(INTEGERS).to_dense()
    out = []
    for k in range(1, min(m.n_rows, m.n_cols) + 1):
        g = 0
        for rs in combinations(range(m.n_rows), k):
            for cs in combinations(range(m.n_cols), k):
                g = math.gcd(g, _det([[dense[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def _det(a: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    a = [list(r) for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1
