"""Command-line front end.

    khlab homology --pd "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]" --ring fp:2 --h 1 --t 0
    khlab s --braid 2:1,1,1 --theory lee
    khlab verify-theorem --table knots-upto-9 --panel default --threads 4
    khlab reproduce --criteria 1,2,3

Exit status: 0 on success or PASS, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .cube import DEFAULT_MAX_CROSSINGS, build_complex
from .errors import KhlabError, TableNotFound
from .exactalg import CoefficientRing
from .frobenius import TheoryTriple, default_panel
from .homology import compare_uct, compute_complex, homology_field, homology_integral, filtration_profile
from .invariant import canonical_generators, canonical_span_rank, s_invariant, verify_main_theorem, verify_twist_equivalence
from .linkio import LinkDiagram, parse_braid_string, parse_input, parse_orientation, read_table

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
VERBS = ("homology", "s", "verify-theorem", "verify-twist", "verify-torsion", "canonical", "table", "reproduce")


@dataclass
class RunConfig:
    verb: str
    diagrams: list = field(default_factory=list)  # (line or None, name, LinkDiagram or error text)
    batch: bool = False
    triples: list = field(default_factory=list)
    src: TheoryTriple | None = None
    dst: TheoryTriple | None = None
    prime: int | None = None
    reduce: bool = True
    max_crossings: int = DEFAULT_MAX_CROSSINGS
    threads: int = 1
    fmt: str = "json"
    out: str | None = None


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="khlab", description="Filtered link homology over Q, Z and F_p.")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb)
        if verb == "reproduce":
            p.add_argument("--criteria", default="1-9", help="e.g. 1,2,7 or 1-6")
            p.add_argument("--no-reduce", action="store_true")
            p.add_argument("--out")
            continue
        src = p.add_mutually_exclusive_group()
        src.add_argument("--pd", help="PD code, e.g. 'PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]'")
        src.add_argument("--braid", help="N:letters, e.g. 2:1,1,1")
        src.add_argument("--file", help="file holding one PD code or braid:N:letters")
        src.add_argument("--table", help="CSV with name,input[,orientation] or a bundled table name")
        p.add_argument("--orientation", help="override, e.g. '3>4;7>8' (edge 3 flows into edge 4)")
        p.add_argument("--name", default="")
        p.add_argument("--format", dest="fmt", choices=("json", "table"), default="json")
        p.add_argument("--out")
        if verb == "table":
            continue
        p.add_argument("--ring", help="q, z or fp:<p>")
        p.add_argument("--h", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--theory", action="append", default=[], help="khovanov, lee or bar-natan")
        p.add_argument("--triple", action="append", default=[], help="RING,H,T, e.g. fp:3,1,0")
        p.add_argument("--panel", choices=("default",))
        p.add_argument("--no-reduce", action="store_true")
        p.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS)
        p.add_argument("--threads", type=int, default=None)
        if verb == "verify-twist":
            p.add_argument("--src", required=True, help="source triple RING,H,T")
            p.add_argument("--dst", required=True, help="target triple RING,H,T")
        if verb == "verify-torsion":
            p.add_argument("--prime", type=int, required=True)
    return ap


def _bundled(name: str):
    stem = name if name.endswith(".csv") else name + ".csv"
    res = resources.files("khlab").joinpath("data", stem)
    return res if res.is_file() else None


def _diagrams(args) -> tuple[list, bool]:
    hint = parse_orientation(args.orientation) if getattr(args, "orientation", None) else None
    if args.pd is not None:
        name = args.name or args.pd.strip()
        return [(None, name, parse_input(args.pd, name=name, orientation=hint))], False
    if args.braid is not None:
        name = args.name or "braid:" + args.braid
        return [(None, name, parse_braid_string("braid:" + args.braid, name=name))], False
    if args.file is not None:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise TableNotFound(f"{args.file}: {exc.strerror}") from None
        name = args.name or Path(args.file).stem
        return [(None, name, parse_input(text, name=name, orientation=hint))], False
    if args.table is not None:
        path = Path(args.table)
        if not path.exists() and _bundled(args.table) is not None:
            with resources.as_file(_bundled(args.table)) as p:
                rows = read_table(p)
        else:
            rows = read_table(path)
        return [(r.line, r.name, r.diagram if r.error is None else r.error) for r in rows], True
    raise InputError("exactly one of --pd, --braid, --file, --table is required")


def ingest_table(path) -> list[tuple[str, LinkDiagram]]:
    """Parse a ``name,input`` table, warning about (and dropping) unreadable rows."""
    out = []
    for r in read_table(path):
        if r.error:
            print(f"warning: line {r.line} ({r.name}): {r.error}", file=sys.stderr)
        else:
            out.append((r.name, r.diagram))
    return out


def _triples(args) -> list[TheoryTriple]:
    out = []
    if args.ring is not None or args.h is not None or args.t is not None:
        if args.ring is None or args.h is None or args.t is None:
            raise InputError("--ring, --h and --t must be given together")
        out.append(TheoryTriple.make(CoefficientRing.parse(args.ring), args.h, args.t))
    out += [TheoryTriple.parse(name) for name in args.theory]
    out += [TheoryTriple.parse(spec) for spec in args.triple]
    if args.panel == "default":
        out += default_panel()
    return out


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.verb, fmt=getattr(args, "fmt", "json"), out=args.out)
    cfg.diagrams, cfg.batch = _diagrams(args)
    if args.verb == "table":
        return cfg
    cfg.reduce = not args.no_reduce
    cfg.max_crossings = args.max_crossings
    threads = args.threads if args.threads is not None else os.environ.get("KHLAB_THREADS", "1")
    try:
        cfg.threads = max(1, int(threads))
    except ValueError:
        raise InputError(f"bad thread count {threads!r}") from None
    cfg.triples = _triples(args)
    if args.verb == "verify-twist":
        cfg.src, cfg.dst = TheoryTriple.parse(args.src), TheoryTriple.parse(args.dst)
    elif not cfg.triples:
        if args.verb in ("verify-theorem",):
            cfg.triples = default_panel()
        else:
            raise InputError(f"{args.verb} needs a theory (--ring/--h/--t, --theory, --triple or --panel)")
    if args.verb == "verify-torsion":
        cfg.prime = args.prime
    return cfg


# ---------------------------------------------------------------------------
# verbs, one diagram at a time (picklable for the worker pool)


def _homology_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    theories = []
    for tr in cfg.triples:
        cx = compute_complex(d, tr, reduce=cfg.reduce, max_crossings=cfg.max_crossings)
        if tr.ring.is_field:
            h = homology_field(cx, with_profile=True)
        else:
            h = homology_integral(cx)
            h.profile = filtration_profile(cx)
        theories.append({"theory": tr.label, "total": h.total_dim, "degrees": h.to_json()})
    return {"theories": theories}


def _s_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    reps = [s_invariant(d, tr, reduce=cfg.reduce, max_crossings=cfg.max_crossings).to_json() for tr in cfg.triples]
    return {"reports": reps}


def _theorem_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    return verify_main_theorem(d, cfg.triples, reduce=cfg.reduce, max_crossings=cfg.max_crossings)


def _twist_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    return verify_twist_equivalence(d, cfg.src, cfg.dst, reduce=cfg.reduce)


def _torsion_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    out = []
    for tr in cfg.triples:
        rep = compare_uct(d, tr, cfg.prime, reduce=cfg.reduce, max_crossings=cfg.max_crossings)
        rep["free_ranks"] = {str(k): v for k, v in rep["free_ranks"].items()}
        rep["fp_dims"] = {str(k): v for k, v in rep["fp_dims"].items()}
        rep["torsion"] = {str(k): v for k, v in rep["torsion"].items()}
        out.append(rep)
    return {"checks": out, "status": "PASS" if all(r["pass"] for r in out) else "FAIL"}


def _canonical_report(d: LinkDiagram, cfg: RunConfig) -> dict:
    out = []
    for tr in cfg.triples:
        cx = build_complex(d, tr, max_crossings=cfg.max_crossings)
        gens = canonical_generators(d, tr, complex=cx)
        span = canonical_span_rank(cx, gens)
        out.append(
            {
                "theory": tr.label,
                "generators": [g.to_json() for g in gens],
                "span_rank": span,
                "status": "PASS" if span == 2**d.n_components else "FAIL",
            }
        )
    return {"theories": out, "status": "PASS" if all(t["status"] == "PASS" for t in out) else "FAIL"}


HANDLERS = {
    "homology": _homology_report,
    "s": _s_report,
    "verify-theorem": _theorem_report,
    "verify-twist": _twist_report,
    "verify-torsion": _torsion_report,
    "canonical": _canonical_report,
}


def _run_one(job):
    line, name, d, cfg = job
    head = {"name": name or d.name}
    if line is not None:
        head["line"] = line
    head["crossings"] = d.n_crossings
    head["components"] = d.n_components
    try:
        head.update(HANDLERS[cfg.verb](d, cfg))
    except KhlabError as exc:
        head["error"] = exc.code
        head["message"] = str(exc)
    return head


def run(cfg: RunConfig) -> tuple[int, object]:
    """Execute a verb; returns (exit status, report)."""
    if cfg.verb == "table":
        rows = []
        for line, name, d in cfg.diagrams:
            if isinstance(d, str):
                rows.append({"line": line, "name": name, "error": d})
            else:
                rows.append({"line": line, "name": name, "crossings": d.n_crossings, "components": d.n_components})
        return EXIT_OK, {"rows": rows, "parsed": sum("error" not in r for r in rows)}

    jobs, skipped = [], []
    for line, name, d in cfg.diagrams:
        if isinstance(d, str):
            skipped.append({"line": line, "name": name, "error": d})
            print(f"warning: line {line} ({name}): {d}", file=sys.stderr)
        else:
            jobs.append((line, name, d, cfg))
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]

    if not cfg.batch:
        report = results[0]
        if "error" in report:
            raise InputError(report["message"])
    else:
        report = {"results": results, "skipped": skipped}
    failed = any(r.get("status") == "FAIL" for r in results)
    return (EXIT_FAIL if failed else EXIT_OK), report


# ---------------------------------------------------------------------------
# output


def _table_lines(cfg: RunConfig, report) -> list[str]:
    if cfg.verb == "table":
        rows = report["rows"]
    else:
        rows = report["results"] if cfg.batch else [report]
    lines = []
    for r in rows:
        name = r.get("name", "")
        if "error" in r:
            lines.append(f"{name:<14} error {r['error']}")
            continue
        if cfg.verb == "table":
            lines.append(f"{name:<14} crossings={r['crossings']} components={r['components']}")
        elif cfg.verb == "homology":
            for t in r["theories"]:
                degs = " ".join(
                    f"{i}:{e.get('dim', e.get('free_rank'))}" + (f"+T{e['torsion']}" if e["torsion"] else "")
                    for i, e in t["degrees"].items()
                    if e.get("dim", e.get("free_rank")) or e["torsion"]
                )
                lines.append(f"{name:<14} {t['theory']:<12} total={t['total']} {degs}")
        elif cfg.verb == "s":
            for rep in r["reports"]:
                lines.append(f"{name:<14} {rep['theory']:<12} s={rep['s']} (s_min={rep['s_min']}, s_max={rep['s_max']})")
        elif cfg.verb == "verify-theorem":
            vals = " ".join(f"{e['theory']}={e.get('s', e.get('error'))}" for e in r["results"])
            lines.append(f"{name:<14} {r['status']} {vals}")
        elif cfg.verb == "verify-twist":
            keys = ("chain_map", "cycles_to_cycles", "homology_isomorphism", "q_preserved", "profile_degree0_equal")
            lines.append(f"{name:<14} {r['status']} {r['src']}->{r['dst']} " + " ".join(f"{k}={r[k]}" for k in keys))
        elif cfg.verb == "verify-torsion":
            for c in r["checks"]:
                lines.append(f"{name:<14} {c['theory']:<12} p={c['prime']} {'PASS' if c['pass'] else 'FAIL'} torsion={c['torsion']}")
        elif cfg.verb == "canonical":
            for t in r["theories"]:
                gens = " ".join(f"{''.join(g['orientation'])}@{g['degree']}:{g['labels']}" for g in t["generators"])
                lines.append(f"{name:<14} {t['theory']:<12} {t['status']} rank={t['span_rank']} {gens}")
    return lines


def emit(cfg_fmt: str, out: str | None, payload, lines: list[str] | None = None) -> None:
    text = "\n".join(lines) + "\n" if cfg_fmt == "table" and lines is not None else json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_criteria(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out += range(int(lo), int(hi) + 1)
        elif part:
            out.append(int(part))
    if not out or any(n < 1 or n > 9 for n in out):
        raise InputError(f"criteria must lie in 1-9: {text!r}")
    return out


def reproduce(args) -> int:
    from .acceptance import CRITERIA

    numbers = _parse_criteria(args.criteria)
    sink = open(args.out, "w") if args.out else sys.stdout
    passed = True
    try:
        for n in numbers:
            fn = CRITERIA[n]
            res = fn() if n in (8, 9) else fn(reduce=not args.no_reduce)
            passed &= res.passed
            print(res.line(), file=sink, flush=True)
    finally:
        if args.out:
            sink.close()
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "reproduce":
            return reproduce(args)
        cfg = config_from_args(args)
        status, report = run(cfg)
    except (KhlabError, InputError, ValueError) as exc:
        print(f"khlab {args.verb}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(cfg.fmt, cfg.out, report, _table_lines(cfg, report) if cfg.fmt == "table" else None)
    return status


if __name__ == "__main__":
    sys.exit(main())
