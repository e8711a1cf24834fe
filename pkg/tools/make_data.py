"""Regenerate the bundled tables from the KnotInfo/LinkInfo database.

Needs the ``database_knotinfo`` package, which the library itself does not
import.  Run from the repository root:

    python3 tools/make_data.py
"""

import csv
import json
import re
from pathlib import Path

from database_knotinfo import link_list

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "khlab" / "data"
REF = ROOT / "tests" / "data"
MAX_CROSSINGS = 9


def pd_text(quads):
    return "PD[" + ", ".join("X[" + ",".join(str(e) for e in q) + "]" for q in quads) + "]"


def braid_text(strands, word):
    return f"braid:{strands}:" + ",".join(str(g) for g in word)


def parse_braid_field(text):
    """KnotInfo stores braids as ``[1,1,1]`` for knots and ``{2, {1, 1}}`` for links."""
    nums = [int(v) for v in re.findall(r"-?\d+", text)]
    if text.strip().startswith("{"):
        return nums[0], nums[1:]
    return max(abs(g) for g in nums) + 1, nums


def knots():
    out = []
    for row in link_list()[1:]:
        n = int(row["crossing_number"])
        if n > MAX_CROSSINGS:
            continue
        quads = json.loads(row["pd_notation"]) if n else []
        strands, word = parse_braid_field(row["braid_notation"]) if n else (1, [])
        out.append((row["name"], quads, strands, word, row["rasmussen_invariant"]))
    return out


def links():
    out = []
    for row in link_list(proper_links=True)[1:]:
        if int(row["crossing_number"]) > MAX_CROSSINGS or row["components"] != "2":
            continue
        quads = [[int(v) for v in re.findall(r"-?\d+", q)] for q in re.findall(r"\{[^{}]*\}", row["pd_notation_vector"])]
        lk = [int(v) for v in re.findall(r"-?\d+", row["linking_matrix"])][1]
        out.append((row["name"], quads, lk))
    return out


def reidemeister_variants(name, quads, strands, word):
    """Diagrams of one knot related by braid moves, each a Markov/Reidemeister sequence."""
    rows = [(f"{name}:pd", pd_text(quads)), (f"{name}:braid", braid_text(strands, word))]
    if word:
        rows.append((f"{name}:conjugate", braid_text(strands, word[1:] + word[:1])))
        rows.append((f"{name}:stabilize", braid_text(strands + 1, word + [strands])))
        rows.append((f"{name}:stabilize-neg", braid_text(strands + 1, word + [-strands])))
        g = abs(word[0])
        rows.append((f"{name}:cancel-pair", braid_text(strands, [g, -g] + word)))
    else:
        rows.append((f"{name}:kink", braid_text(2, [1])))
        rows.append((f"{name}:r2", braid_text(3, [1, -2])))
    return rows


def main():
    ks = knots()
    with open(DATA / "knots-upto-9.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "input"])
        for name, quads, *_ in ks:
            w.writerow([name, pd_text(quads)])
    ls = links()
    with open(DATA / "links-upto-9.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "input"])
        for name, quads, _ in ls:
            w.writerow([name, pd_text(quads)])
    with open(DATA / "reidemeister-pairs.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "input"])
        for name, quads, strands, word, _ in ks:
            if len(quads) <= 7:
                w.writerows(reidemeister_variants(name, quads, strands, word))
    with open(REF / "knotinfo-reference.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "kind", "value"])
        for name, *_, ras in ks:
            w.writerow([name, "rasmussen", ras or 0])
        for name, _, lk in ls:
            w.writerow([name, "linking", lk])


if __name__ == "__main__":
    main()
