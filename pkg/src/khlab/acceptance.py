"""Reproduction checks over the bundled corpus.

Each ``criterion_N`` returns a :class:`CriterionResult` holding the verdict,
a one-line summary and a ``data`` payload.  The payload is what
``criterion_8`` compares between reduced and unreduced runs, so it carries
every computed number (dimensions, torsion, s reports, profiles).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .cube import build_complex
from .exactalg import INTEGERS, RATIONALS, SparseMatrix, determinant_divisors, prime_field, smith_decomposition, smith_normal_form
from .frobenius import Element, FrobeniusSystem, TheoryTriple, check_axioms, default_panel
from .homology import compute_complex, filtration_profile, homology_field, homology_integral
from .invariant import s_invariant, s_from_profile
from .linkio import LinkDiagram, parse_braid, read_table, torus_knot

DIMENSION_BUDGET = 600.0  # seconds, whole corpus with reduction
TORUS_BUDGET = 60.0  # seconds per torus knot
TORUS_EXPECTED = {(2, 3): 2, (2, 5): 4, (2, 7): 6, (3, 4): 6}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} -- {self.summary} ({self.seconds:.1f}s)"


def data_path(name: str):
    return resources.files("khlab").joinpath("data", name)


@lru_cache(maxsize=None)
def load_table(name: str) -> tuple[LinkDiagram, ...]:
    with resources.as_file(data_path(name)) as path:
        rows = read_table(path)
    bad = [r for r in rows if r.error]
    if bad:
        raise ValueError(f"{name}: unreadable rows {[(r.line, r.error) for r in bad]}")
    return tuple(r.diagram for r in rows)


def knots() -> tuple[LinkDiagram, ...]:
    return load_table("knots-upto-9.csv")


def corpus() -> tuple[LinkDiagram, ...]:
    return knots() + load_table("links-upto-9.csv")


def field_panel() -> list[TheoryTriple]:
    return [t for t in default_panel() if t.ring.is_field and t.gamma is not None]


def _find(name: str) -> LinkDiagram:
    for d in corpus():
        if d.name == name:
            return d
    raise KeyError(name)


@lru_cache(maxsize=None)
def _homology(name: str, spec: str, reduce: bool):
    d = _find(name)
    tr = TheoryTriple.parse(spec)
    cx = compute_complex(d, tr, reduce=reduce)
    h = homology_field(cx) if tr.ring.is_field else homology_integral(cx)
    return h.nonzero(), {i: tuple(v) for i, v in sorted(h.torsion.items())}


@lru_cache(maxsize=None)
def _s_report(name: str, spec: str, reduce: bool):
    d = _find(name)
    tr = TheoryTriple.parse(spec)
    cx = compute_complex(d, tr, reduce=reduce)
    profile = filtration_profile(cx, degrees=[0])
    s_min, s_max, _ = s_from_profile(profile)
    return s_min, s_max, (s_min + s_max) // 2, tuple(profile.jumps(0))


def _timed(fn):
    def wrapper(*args, **kw):
        start = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - start
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def criterion_1(reduce: bool = True) -> CriterionResult:
    """Total dimension 2^n, all in even degrees, for every corpus link and field theory."""
    data, failures = {}, []
    start = time.perf_counter()
    for d in corpus():
        for tr in field_panel():
            dims, _ = _homology(d.name, tr.spec, reduce)
            data[d.name, tr.label] = dims
            total = sum(dims.values())
            if total != 2**d.n_components or any(i % 2 for i in dims):
                failures.append((d.name, tr.label, dims))
    elapsed = time.perf_counter() - start
    within = not reduce or elapsed <= DIMENSION_BUDGET
    if not within:
        failures.append(("time", elapsed))
    n = len(data)
    return CriterionResult(
        1, "dimension law", not failures, f"{n - len(failures)}/{n} (diagram, theory) pairs, {elapsed:.0f}s", data=data, failures=failures
    )


@_timed
def criterion_2(reduce: bool = True) -> CriterionResult:
    """s agrees across the whole default panel on every knot."""
    data, failures = {}, []
    panel = default_panel()
    for d in knots():
        reports = {tr.label: _s_report(d.name, tr.spec, reduce) for tr in panel}
        data[d.name] = reports
        if len({r[2] for r in reports.values()}) != 1:
            failures.append((d.name, {k: v[2] for k, v in reports.items()}))
    spread = sum(1 for reps in data.values() for r in reps.values() if r[1] - r[0] != 2)
    summary = f"{len(data) - len(failures)}/{len(data)} knots agree across {len(panel)} theories"
    if spread:
        summary += f"; {spread} reports with s_max - s_min != 2"
    return CriterionResult(2, "main theorem", not failures, summary, data=data, failures=failures)


@_timed
def criterion_3(reduce: bool = True) -> CriterionResult:
    """Bar-Natan s over F_2 equals Lee s over Q."""
    bn, lee = TheoryTriple.parse("bar-natan"), TheoryTriple.parse("lee")
    data, failures = {}, []
    for d in knots():
        a, b = _s_report(d.name, bn.spec, reduce)[2], _s_report(d.name, lee.spec, reduce)[2]
        data[d.name] = (a, b)
        if a != b:
            failures.append((d.name, a, b))
    return CriterionResult(3, "Bar-Natan = Lee", not failures, f"{len(data) - len(failures)}/{len(data)} knots", data=data, failures=failures)


@_timed
def criterion_4(reduce: bool = True) -> CriterionResult:
    """Torus knots under (F_2,1,0): s = (p-1)(q-1), each within the time budget."""
    bn = TheoryTriple.parse("bar-natan")
    data, failures = {}, []
    for (p, q), expected in TORUS_EXPECTED.items():
        start = time.perf_counter()
        rep = s_invariant(torus_knot(p, q), bn, reduce=reduce)
        elapsed = time.perf_counter() - start
        data[f"T({p},{q})"] = (rep.s_min, rep.s_max, rep.s)
        if rep.s != expected or rep.s != (p - 1) * (q - 1) or (reduce and elapsed > TORUS_BUDGET):
            failures.append((p, q, rep.s, round(elapsed, 2)))
    summary = ", ".join(f"s({k})={v[2]}" for k, v in data.items())
    return CriterionResult(4, "torus knots", not failures, summary, data=data, failures=failures)


@_timed
def criterion_5(reduce: bool = True) -> CriterionResult:
    """(Q,2,-1) homology has the per-degree dimensions of (Q,0,0)."""
    deg, kh = TheoryTriple.make(RATIONALS, 2, -1), TheoryTriple.make(RATIONALS, 0, 0)
    data, failures = {}, []
    for d in corpus():
        a, _ = _homology(d.name, deg.spec, reduce)
        b, _ = _homology(d.name, kh.spec, reduce)
        data[d.name] = (a, b)
        if a != b:
            failures.append((d.name, a, b))
    return CriterionResult(5, "degenerate theory", not failures, f"{len(data) - len(failures)}/{len(data)} diagrams", data=data, failures=failures)


@_timed
def criterion_6(reduce: bool = True) -> CriterionResult:
    """No odd torsion for (Z,0,1), no torsion for (Z,1,0), Z/2 in integral Khovanov 3_1."""
    lee, bn = TheoryTriple.make(INTEGERS, 0, 1), TheoryTriple.make(INTEGERS, 1, 0)
    kh = TheoryTriple.make(INTEGERS, 0, 0)
    data, failures = {}, []
    two_torsion = 0
    for d in corpus():
        _, t_lee = _homology(d.name, lee.spec, reduce)
        _, t_bn = _homology(d.name, bn.spec, reduce)
        data[d.name] = (t_lee, t_bn)
        two_torsion += bool(t_lee)
        if any(o % 2 for orders in t_lee.values() for o in orders):
            failures.append((d.name, "odd torsion in (Z,0,1)", t_lee))
        if t_bn:
            failures.append((d.name, "torsion in (Z,1,0)", t_bn))
    _, t_kh = _homology("3_1", kh.spec, reduce)
    data["3_1 khovanov"] = t_kh
    if not any(2 in orders for orders in t_kh.values()):
        failures.append(("3_1", "no Z/2 in integral Khovanov", t_kh))
    summary = f"{len(corpus())} diagrams; (Z,0,1) 2-torsion only ({two_torsion} with 2-torsion); 3_1 Khovanov torsion {dict(t_kh)}"
    return CriterionResult(6, "torsion", not failures, summary, data=data, failures=failures)


@_timed
def criterion_7(reduce: bool = True) -> CriterionResult:
    """Diagrams of one knot give equal homology dimensions and s reports."""
    with resources.as_file(data_path("reidemeister-pairs.csv")) as path:
        rows = read_table(path)
    groups: dict[str, list] = {}
    failures = []
    for r in rows:
        if r.error:
            failures.append((r.name, r.error))
            continue
        groups.setdefault(r.name.split(":")[0], []).append(r.diagram)
    theories = [TheoryTriple.parse(s) for s in ("khovanov", "lee", "bar-natan", "fp:3,1,0")]
    s_theories = [TheoryTriple.parse(s) for s in ("lee", "bar-natan")]
    data = {}
    for knot, diagrams in groups.items():
        sigs = []
        for d in diagrams:
            sig = []
            for tr in theories:
                sig.append(homology_field(compute_complex(d, tr, reduce=reduce)).nonzero())
            for tr in s_theories:
                rep = s_invariant(d, tr, reduce=reduce)
                sig.append((rep.s_min, rep.s_max, rep.s))
            sigs.append(sig)
        data[knot] = sigs[0]
        if any(s != sigs[0] for s in sigs[1:]):
            failures.append((knot, [d.name for d in diagrams]))
    n = sum(len(v) for v in groups.values())
    return CriterionResult(
        7, "Reidemeister invariance", not failures, f"{len(groups) - len(failures)}/{len(groups)} knots, {n} diagrams", data=data, failures=failures
    )


@_timed
def criterion_8() -> CriterionResult:
    """Criteria 1-6 with reduction disabled give identical verdicts and data."""
    failures = []
    for crit in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6):
        fast, slow = crit(reduce=True), crit(reduce=False)
        if fast.passed != slow.passed or fast.data != slow.data or not slow.passed:
            failures.append(fast.number)
    return CriterionResult(8, "oracle equivalence", not failures, f"criteria 1-6 reproduced; mismatches {failures or 'none'}", failures=failures)


def random_braid(rng: random.Random, max_crossings: int = 8) -> LinkDiagram:
    strands = rng.randint(2, 4)
    length = rng.randint(1, max_crossings)
    word = [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)]
    return parse_braid(word, strands, name=f"braid:{strands}:{','.join(map(str, word))}")


def random_system(rng: random.Random) -> FrobeniusSystem:
    ring = rng.choice([RATIONALS, INTEGERS] + [prime_field(p) for p in (2, 3, 5, 7, 11)])
    h, t = rng.randint(-4, 4), rng.randint(-4, 4)
    base = FrobeniusSystem(ring, h, t)
    for _ in range(50):
        theta = Element(ring(rng.randint(-5, 5)), ring(rng.randint(-5, 5)))
        if base.is_unit(theta):
            return base.with_twist(theta)
    return base.with_twist((ring(-1), ring(0)))


def random_integer_matrix(rng: random.Random) -> SparseMatrix:
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    return SparseMatrix.from_dense([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)], INTEGERS)


def snf_matches_divisors(m: SparseMatrix) -> bool:
    diag = smith_normal_form(m).diagonal
    divisors = determinant_divisors(m)
    prod = 1
    for k, dk in enumerate(divisors):
        prod *= diag[k] if k < len(diag) else 0
        if prod != dk:
            return False
    if any(diag[k + 1] % diag[k] for k in range(len(diag) - 1)):
        return False
    U, D, V = smith_decomposition(m)
    return (U @ m @ V).to_dense() == D.to_dense() and [D.to_dense()[k][k] for k in range(len(diag))] == [abs(v) for v in diag]


@_timed
def criterion_9(seed: int = 20240601) -> CriterionResult:
    """d^2 = 0 on 200 random braids, Frobenius axioms on 50 twisted systems, 100 Smith forms."""
    rng = random.Random(seed)
    failures = []
    panel = default_panel()
    for _ in range(200):
        d = random_braid(rng)
        for tr in panel:
            cx = build_complex(d, tr)
            if not cx.d_squared_is_zero() or not cx.is_filtered():
                failures.append(("d2", d.name, tr.label))
    for _ in range(50):
        sys = random_system(rng)
        res = check_axioms(sys)
        if not all(res.values()):
            failures.append(("axioms", str(sys), res))
    for _ in range(100):
        m = random_integer_matrix(rng)
        if not snf_matches_divisors(m):
            failures.append(("snf", m.to_dense()))
    return CriterionResult(9, "structural suites", not failures, f"200 braids x {len(panel)} theories, 50 systems, 100 matrices; {len(failures)} failures", failures=failures)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run(numbers=None, reduce: bool = True) -> list[CriterionResult]:
    out = []
    for n in numbers or sorted(CRITERIA):
        fn = CRITERIA[n]
        out.append(fn() if n in (8, 9) else fn(reduce=reduce))
    return out

