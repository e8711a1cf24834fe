"""Oriented link diagrams: PD codes, braid closures, torus knots, mirrors.

PD convention (Knot Atlas / KnotInfo): ``X[a,b,c,d]`` lists the incoming
under-strand first, then the other three edges counterclockwise.  The
under-strand therefore runs ``a -> c`` and the over-strand joins ``b`` and
``d``; the crossing is positive when the over-strand runs ``d -> b``.

With that convention the 0-smoothing of ``X[a,b,c,d]`` joins ``a`` with ``b``
and ``c`` with ``d``; the 1-smoothing joins ``a`` with ``d`` and ``b`` with ``c``.
For a positive crossing the 0-smoothing is the oriented one.

Crossingless components cannot be written in PD notation, so diagrams
carry an explicit count of free loops.  ``PD[]`` is the one-loop unknot.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadLetter, InconsistentDiagram, MalformedPD, TableNotFound


@dataclass(frozen=True)
class Crossing:
    strands: tuple[int, int, int, int]
    sign: int

    @property
    def over_in(self) -> int:
        """Slot (1 or 3) where the over-strand enters."""
        return 3 if self.sign > 0 else 1

    def zero_pairs(self):
        a, b, c, d = self.strands
        return (a, b), (c, d)

    def one_pairs(self):
        a, b, c, d = self.strands
        return (a, d), (b, c)


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    components: tuple[tuple[int, ...], ...] = ()  # edges of each component in flow order
    free_loops: int = 0
    name: str = ""
    _edge_component: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self._edge_component is None:
            comp = {e: k for k, edges in enumerate(self.components) for e in edges}
            object.__setattr__(self, "_edge_component", comp)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_components(self) -> int:
        return len(self.components) + self.free_loops

    @property
    def c_plus(self) -> int:
        return sum(1 for x in self.crossings if x.sign > 0)

    @property
    def c_minus(self) -> int:
        return sum(1 for x in self.crossings if x.sign < 0)

    @property
    def writhe(self) -> int:
        return self.c_plus - self.c_minus

    @property
    def edges(self) -> list[int]:
        return sorted(self._edge_component)

    def component_of(self, edge: int) -> int:
        return self._edge_component[edge]

    def successor(self) -> dict[int, int]:
        """Edge -> the edge that follows it along its component."""
        nxt = {}
        for edges in self.components:
            for i, e in enumerate(edges):
                nxt[e] = edges[(i + 1) % len(edges)]
        return nxt

    def signs_for(self, reversed_components: Sequence[bool]) -> list[int]:
        """Crossing signs after reversing the flagged strand components."""
        out = []
        for x in self.crossings:
            a, b = x.strands[0], x.strands[1]
            flip = reversed_components[self.component_of(a)] ^ reversed_components[self.component_of(b)]
            out.append(-x.sign if flip else x.sign)
        return out

    def linking_number(self, i: int, j: int) -> int:
        total = 0
        for x in self.crossings:
            ca = self.component_of(x.strands[0])
            cb = self.component_of(x.strands[1])
            if {ca, cb} == {i, j} and ca != cb:
                total += x.sign
        return total // 2

    def to_pd(self) -> str:
        if self.free_loops and self.crossings:
            raise ValueError("PD notation cannot encode crossingless components")
        if self.free_loops > 1:
            raise ValueError("PD notation cannot encode a split union of unknots")
        return "PD[" + ",".join("X[%d,%d,%d,%d]" % x.strands for x in self.crossings) + "]"

    def __str__(self):
        label = self.name or "diagram"
        return f"{label}: {self.n_crossings} crossings, {self.n_components} components"


# ---------------------------------------------------------------------------
# building from raw crossings


def _strand_components(quads: Sequence[tuple[int, int, int, int]]):
    """Group edges into closed strands ignoring orientation."""
    where: dict[int, list[tuple[int, int]]] = {}
    for k, q in enumerate(quads):
        for s, e in enumerate(q):
            where.setdefault(e, []).append((k, s))
    bad = sorted(e for e, occ in where.items() if len(occ) != 2)
    if bad:
        raise InconsistentDiagram(f"edge labels used other than twice: {bad}")
    for k, q in enumerate(quads):
        # a label may repeat only as a kink loop (X[a,b,b,c] style), never opposite itself
        if q[0] == q[2] or q[1] == q[3]:
            raise InconsistentDiagram(f"crossing {k} joins an edge to itself: {list(q)}")
    seen: set[int] = set()
    comps = []
    for start in sorted(where):
        if start in seen:
            continue
        edges = []
        todo = [start]
        while todo:
            e = todo.pop()
            if e in seen:
                continue
            seen.add(e)
            edges.append(e)
            for k, s in where[e]:
                todo.append(quads[k][(s + 2) % 4])
        comps.append(sorted(edges))
    return where, comps


def _trace(quads, where, head_slot: dict[tuple[int, int], bool], start_edge: int):
    """Follow a component from ``start_edge`` using known head/tail slots."""
    order = [start_edge]
    e = start_edge
    while True:
        k, s = next(ks for ks in where[e] if head_slot[ks])
        nxt = quads[k][(s + 2) % 4]
        if nxt == start_edge:
            return order
        order.append(nxt)
        e = nxt
        if len(order) > 4 * len(quads) + 4:
            raise InconsistentDiagram("orientation tracing did not close up")


def build_diagram(
    quads: Sequence[Sequence[int]],
    orientation: dict[int, int] | None = None,
    free_loops: int = 0,
    name: str = "",
    over_in: Sequence[int] | None = None,
) -> LinkDiagram:
    """Orient a list of PD crossings and compute signs.

    Orientation of a component comes from, in order of preference: explicit
    over-strand entry slots ``over_in`` (one per crossing, 1 or 3); an entry
    ``edge -> next_edge`` in ``orientation``; the under-strand slots of the
    PD convention; edge-label succession ``k -> k+1``.
    """
    quads = [tuple(int(v) for v in q) for q in quads]
    for q in quads:
        if len(q) != 4 or min(q) <= 0:
            raise MalformedPD(f"crossing must have four positive labels: {list(q)}")
    if not quads:
        return LinkDiagram((), (), free_loops + (0 if free_loops else 1), name)
    where, comps = _strand_components(quads)
    orientation = dict(orientation or {})
    head: dict[tuple[int, int], bool] = {}

    def orient_from(k, s, is_head):
        # propagate a head/tail decision around the whole component
        stack = [(k, s, is_head)]
        while stack:
            k, s, h = stack.pop()
            if (k, s) in head:
                if head[k, s] != h:
                    raise InconsistentDiagram(f"conflicting orientation at crossing {k}")
                continue
            head[k, s] = h
            stack.append((k, (s + 2) % 4, not h))
            e = quads[k][s]
            other = next(ks for ks in where[e] if ks != (k, s))
            stack.append((other[0], other[1], not h))

    if over_in is not None:
        for k, s in enumerate(over_in):
            orient_from(k, 0, True)
            orient_from(k, s, True)

    for edges in comps:
        members = set(edges)
        if any((k, s) in head for e in edges for k, s in where[e]):
            continue
        hints = [(e, n) for e, n in orientation.items() if e in members]
        if hints:
            e, n = hints[0]
            # slot where e meets n: e enters there
            meet = [(k, s) for k, s in where[e] if quads[k][(s + 2) % 4] == n]
            if not meet:
                raise InconsistentDiagram(f"orientation hint {e}>{n}: edges are not consecutive")
            orient_from(*meet[0], True)
            continue
        unders = [(k, s) for e in edges for k, s in where[e] if s in (0, 2)]
        if unders:
            for k, s in unders:
                orient_from(k, s, s == 0)
            continue
        # over-only component: k flows into k+1
        e = edges[0]
        meet = [(k, s) for k, s in where[e] if quads[k][(s + 2) % 4] == e + 1]
        orient_from(*(meet[0] if meet else where[e][0]), True)

    crossings = []
    for k, q in enumerate(quads):
        if not head[k, 0]:
            if not head[k, 2]:
                raise InconsistentDiagram(f"under-strand of crossing {k} has no incoming end")
            q = (q[2], q[3], q[0], q[1])
            kk_head = {0: head[k, 2], 1: head[k, 3], 2: head[k, 0], 3: head[k, 1]}
        else:
            kk_head = {s: head[k, s] for s in range(4)}
        sign = 1 if kk_head[3] else -1
        crossings.append(Crossing(q, sign))

    new_where = {}
    for k, x in enumerate(crossings):
        for s, e in enumerate(x.strands):
            new_where.setdefault(e, []).append((k, s))
    new_head = {}
    for k, x in enumerate(crossings):
        new_head[k, 0], new_head[k, 2] = True, False
        new_head[k, x.over_in], new_head[k, 4 - x.over_in] = True, False
    components = tuple(
        tuple(_trace([x.strands for x in crossings], new_where, new_head, min(edges))) for edges in comps
    )
    return LinkDiagram(tuple(crossings), components, free_loops, name)


# ---------------------------------------------------------------------------
# parsers

_PD_RE = re.compile(r"^PD\[(.*)\]$", re.S)
_X_RE = re.compile(r"X\[([^\]]*)\]")


def parse_pd(text: str, orientation: dict[int, int] | None = None, name: str = "") -> LinkDiagram:
    """Parse ``PD[X[a,b,c,d],...]``; whitespace is ignored."""
    compact = re.sub(r"\s+", "", text)
    m = _PD_RE.match(compact)
    if not m:
        raise MalformedPD(f"not a PD code: {text!r}")
    body = m.group(1)
    quads = []
    pos = 0
    for xm in _X_RE.finditer(body):
        gap = body[pos : xm.start()]
        if gap not in ("", ","):
            raise MalformedPD(f"unexpected text {gap!r} in {text!r}")
        try:
            labels = [int(v) for v in xm.group(1).split(",")]
        except ValueError:
            raise MalformedPD(f"non-integer label in X[{xm.group(1)}]") from None
        if len(labels) != 4 or min(labels) <= 0:
            raise MalformedPD(f"X[{xm.group(1)}] needs four positive labels")
        quads.append(labels)
        pos = xm.end()
        if pos < len(body) and body[pos] == ",":
            pos += 1
    if body[pos:] != "":
        raise MalformedPD(f"trailing text {body[pos:]!r} in {text!r}")
    return build_diagram(quads, orientation, name=name)


def relabel(d: LinkDiagram) -> LinkDiagram:
    """Renumber edges 1..2c so that each component reads k -> k+1."""
    mapping = {}
    n = 1
    for edges in d.components:
        for e in edges:
            mapping[e] = n
            n += 1
    crossings = tuple(Crossing(tuple(mapping[e] for e in x.strands), x.sign) for x in d.crossings)
    comps = tuple(tuple(mapping[e] for e in edges) for edges in d.components)
    return LinkDiagram(crossings, comps, d.free_loops, d.name)


def parse_braid(word: Sequence[int], strand_count: int, name: str = "") -> LinkDiagram:
    """Diagram of the closure of a braid word (strands numbered 1..strand_count).

    Letter ``k > 0`` is a positive crossing between strands k and k+1,
    ``-k`` its inverse.  Untouched strands become free loops.
    """
    if strand_count < 1:
        raise BadLetter(f"strand count must be positive, got {strand_count}")
    for k in word:
        if k == 0 or abs(k) >= strand_count:
            raise BadLetter(f"letter {k} out of range for {strand_count} strands")
    if not word:
        return LinkDiagram((), (), strand_count, name)
    bottom = list(range(1, strand_count + 1))
    current = list(bottom)
    label = strand_count
    raw = []
    for k in word:
        i = abs(k) - 1
        a_l, a_r = current[i], current[i + 1]
        b_l, b_r = label + 1, label + 2
        label += 2
        if k > 0:
            raw.append([a_r, b_r, b_l, a_l])
        else:
            raw.append([a_l, a_r, b_r, b_l])
        current[i], current[i + 1] = b_l, b_r
    # close up: top label current[j] is identified with bottom label j+1
    ident = {current[j]: bottom[j] for j in range(strand_count)}
    # chains of identifications through untouched strands
    def root(e):
        while e in ident and ident[e] != e:
            e = ident[e]
        return e

    quads = [[root(e) for e in q] for q in raw]
    touched = {abs(k) - 1 for k in word} | {abs(k) for k in word}
    free = sum(1 for j in range(strand_count) if j not in touched)
    # all strands run upward: the over-strand enters at slot 3 for a
    # positive letter and at slot 1 for a negative one
    over = [3 if k > 0 else 1 for k in word]
    return relabel(build_diagram(quads, free_loops=free, name=name, over_in=over))


def parse_braid_string(text: str, name: str = "") -> LinkDiagram:
    """Parse ``braid:<strands>:<letters>`` (letters comma separated, possibly empty)."""
    m = re.fullmatch(r"\s*braid:\s*(\d+)\s*:(.*)", text)
    if not m:
        raise MalformedPD(f"not a braid string: {text!r}")
    letters = [s.strip() for s in m.group(2).split(",") if s.strip()]
    try:
        word = [int(s) for s in letters]
    except ValueError:
        raise MalformedPD(f"bad braid letters in {text!r}") from None
    return parse_braid(word, int(m.group(1)), name=name)


def parse_input(text: str, name: str = "", orientation: dict[int, int] | None = None) -> LinkDiagram:
    text = text.strip()
    if text.startswith("braid:"):
        return parse_braid_string(text, name=name)
    return parse_pd(text, orientation=orientation, name=name)


def parse_orientation(text: str) -> dict[int, int]:
    """``"3>4;7>8"`` -> ``{3: 4, 7: 8}``: edge 3 flows into edge 4, and so on."""
    out = {}
    for part in re.split(r"[;\s]+", text.strip()):
        if not part:
            continue
        a, sep, b = part.partition(">")
        if not sep:
            raise MalformedPD(f"bad orientation hint {part!r}")
        out[int(a)] = int(b)
    return out


# ---------------------------------------------------------------------------
# constructions


def torus_knot(p: int, q: int) -> LinkDiagram:
    """Closure of (s1 s2 ... s_{p-1})^q on p strands."""
    if p < 2 or q < 2:
        raise ValueError(f"torus link needs p, q >= 2, got ({p}, {q})")
    return parse_braid(list(range(1, p)) * q, p, name=f"T({p},{q})")


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing, keeping orientations."""
    out = []
    for x in d.crossings:
        a, b, c, dd = x.strands
        if x.sign > 0:  # over-strand enters at d
            out.append(Crossing((dd, a, b, c), -1))
        else:  # over-strand enters at b
            out.append(Crossing((b, c, dd, a), 1))
    name = f"mirror({d.name})" if d.name else ""
    return LinkDiagram(tuple(out), d.components, d.free_loops, name)


def connected_sum(k1: LinkDiagram, k2: LinkDiagram) -> LinkDiagram:
    """Band the first components of two diagrams together at their lowest edges."""
    if not k1.crossings:
        if k1.free_loops != 1 or k1.components:
            raise ValueError("connected sum needs a knot on the left")
        return k2
    if not k2.crossings:
        if k2.free_loops != 1 or k2.components:
            raise ValueError("connected sum needs a knot on the right")
        return k1
    k2 = relabel(k2)
    off = max(k1.edges)
    shifted = [tuple(e + off for e in x.strands) for x in k2.crossings]
    e1 = k1.components[0][0]
    f = k2.components[0][0] + off
    # e1: A -> B and f: C -> D become A -> D (label e1) and C -> B (label f)
    quads = []
    for x in k1.crossings:
        q = list(x.strands)
        for s in range(4):
            if q[s] == e1 and _is_head(x, s):
                q[s] = f
        quads.append(q)
    for x, q0 in zip(k2.crossings, shifted):
        q = list(q0)
        for s in range(4):
            if q[s] == f and _is_head(x, s):
                q[s] = e1
        quads.append(q)
    signs = [x.sign for x in k1.crossings] + [x.sign for x in k2.crossings]
    over = [x.over_in for x in k1.crossings] + [x.over_in for x in k2.crossings]
    d = build_diagram(quads, free_loops=k1.free_loops + k2.free_loops, over_in=over)
    if [x.sign for x in d.crossings] != signs:
        raise InconsistentDiagram("connected sum changed crossing signs")
    name = f"{k1.name}#{k2.name}" if k1.name and k2.name else ""
    out = relabel(d)
    return LinkDiagram(out.crossings, out.components, out.free_loops, name)


def _is_head(x: Crossing, slot: int) -> bool:
    """Whether the edge in ``slot`` enters crossing ``x``."""
    return slot == 0 or slot == x.over_in


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    off = max(d1.edges, default=0)
    crossings = d1.crossings + tuple(
        Crossing(tuple(e + off for e in x.strands), x.sign) for x in d2.crossings
    )
    comps = d1.components + tuple(tuple(e + off for e in c) for c in d2.components)
    return LinkDiagram(crossings, comps, d1.free_loops + d2.free_loops)


# ---------------------------------------------------------------------------
# tables


@dataclass
class TableRow:
    line: int
    name: str
    diagram: LinkDiagram | None
    error: str | None = None


def read_table(path) -> list[TableRow]:
    """Read a ``name,input[,orientation]`` CSV; bad rows are kept with an error message."""
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise TableNotFound(f"{path}: {exc.strerror}") from None
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return rows
        missing = {"name", "input"} - set(reader.fieldnames)
        if missing:
            raise MalformedPD(f"{path}: CSV header must contain name,input (missing {sorted(missing)})")
        for row in reader:
            line = reader.line_num
            name = (row.get("name") or "").strip()
            try:
                hint = parse_orientation(row["orientation"]) if row.get("orientation") else None
                d = parse_input(row.get("input") or "", name=name, orientation=hint)
                rows.append(TableRow(line, name, d))
            except Exception as exc:  # row-level failures are collected, not fatal
                rows.append(TableRow(line, name, None, str(exc)))
    return rows


def iter_pd_quads(d: LinkDiagram) -> Iterable[tuple[int, int, int, int]]:
    return (x.strands for x in d.crossings)
