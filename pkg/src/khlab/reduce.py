"""Filtered Gaussian elimination of chain complexes.

An entry ``d[b, a] = u`` with ``u`` a unit and ``q(a) == q(b)`` can be
cancelled: ``a`` and ``b`` are dropped and every zig-zag ``x -> b <- a -> y``
updates ``d[y, x] -= d[y, a] u^-1 d[b, x]``.  Because ``q(y) >= q(a) = q(b) >=
q(x)`` the new entries are still filtered, and the result is filtered
homotopy equivalent to the input.  Entries that raise q are never pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cube import FilteredComplex, Generator
from .exactalg import SparseMatrix, _qnorm


@dataclass
class ReductionTrace:
    size_before: int
    size_after: int = 0
    eliminations: list[tuple[int, Generator, Generator]] = field(default_factory=list)


def _normalizer(ring):
    if ring.kind == "Fp":
        p = ring.p
        return lambda v: v % p
    if ring.kind == "Q":
        return _qnorm
    return int


def reduce_complex(cx: FilteredComplex, check: bool = False) -> tuple[FilteredComplex, ReductionTrace]:
    """Cancel unit, q-preserving differential entries until none remain.

    With ``check`` set, d∘d = 0 is verified after every cancellation (slow).
    """
    R = cx.ring
    norm = _normalizer(R)
    is_unit = R.is_unit
    degrees = cx.degrees
    gens = {i: cx.generators[i] for i in degrees}
    out = {i: [dict() for _ in gens[i]] for i in degrees}
    inn = {i: [dict() for _ in gens[i]] for i in degrees}
    for i, m in cx.differential.items():
        for (r, c), v in m.entries.items():
            out[i][c][r] = v
            inn[i + 1][r][c] = v
    alive = {i: [True] * len(gens[i]) for i in degrees}
    trace = ReductionTrace(cx.size())

    def cancel(i, a, b):
        u = out[i][a][b]
        uinv = R.inv(u)
        col_a = out[i][a]
        row_b = inn[i + 1][b]
        ys = [(y, v) for y, v in col_a.items() if y != b]
        xs = [(x, w) for x, w in row_b.items() if x != a]
        for y in col_a:
            del inn[i + 1][y][a]
        for x in row_b:
            if x != a:
                del out[i][x][b]
        inn_next = inn[i + 1]
        for x, w in xs:
            f = norm(w * uinv)
            ox = out[i][x]
            for y, v in ys:
                nv = norm(ox.get(y, 0) - v * f)
                if nv == 0:
                    if y in ox:
                        del ox[y]
                        del inn_next[y][x]
                else:
                    ox[y] = nv
                    inn_next[y][x] = nv
        if i - 1 in out:
            for w_ in inn[i][a]:
                del out[i - 1][w_][a]
        if i + 2 in inn:
            for z in out[i + 1][b]:
                del inn[i + 2][z][b]
        inn[i][a] = {}
        out[i][a] = {}
        out[i + 1][b] = {}
        inn[i + 1][b] = {}
        alive[i][a] = False
        alive[i + 1][b] = False
        trace.eliminations.append((i, gens[i][a], gens[i + 1][b]))

    changed = True
    while changed:
        changed = False
        for i in degrees:
            if i + 1 not in gens:
                continue
            src, dst = gens[i], gens[i + 1]
            inn_next = inn[i + 1]
            for a in range(len(src)):
                if not alive[i][a]:
                    continue
                oa = out[i][a]
                if not oa:
                    continue
                qa = src[a].q
                width = len(oa) - 1
                best = None
                for b, v in oa.items():
                    if dst[b].q == qa and is_unit(v):
                        cost = (len(inn_next[b]) - 1) * width
                        if best is None or (cost, b) < best:
                            best = (cost, b)
                            if cost == 0:
                                break
                if best is not None:
                    cancel(i, a, best[1])
                    changed = True
                    if check:
                        _check_d2(out, degrees, R, norm)

    new_index = {i: {} for i in degrees}
    new_gens = {}
    for i in degrees:
        keep = [n for n in range(len(gens[i])) if alive[i][n]]
        new_index[i] = {n: k for k, n in enumerate(keep)}
        new_gens[i] = [gens[i][n] for n in keep]
    new_diff = {}
    for i in degrees:
        if i + 1 not in gens:
            continue
        ent = {}
        nxt = new_index[i + 1]
        for n, k in new_index[i].items():
            for b, v in out[i][n].items():
                ent[nxt[b], k] = v
        new_diff[i] = SparseMatrix(len(new_gens[i + 1]), len(new_gens[i]), ent)
    trace.size_after = sum(len(g) for g in new_gens.values())
    reduced = FilteredComplex(
        R, cx.triple, cx.c_plus, cx.c_minus, cx.n_components, new_gens, new_diff, cx.name, cx.circles
    )
    return reduced, trace


def _check_d2(out, degrees, R, norm):
    for i in degrees:
        if i + 1 not in out or i + 2 not in out:
            continue
        for a, col in enumerate(out[i]):
            acc = {}
            for b, v in col.items():
                for z, w in out[i + 1][b].items():
                    acc[z] = norm(acc.get(z, 0) + w * v)
            if any(val != 0 for val in acc.values()):
                raise AssertionError(f"d∘d != 0 after cancellation (degree {i}, generator {a})")
