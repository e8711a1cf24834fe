"""Filtered rank-two link homology: Khovanov, Lee, Bar-Natan and U_{h,t} theories.

Typical use::

    from khlab import TheoryTriple, parse_input, s_invariant
    d = parse_input("braid:2:1,1,1")
    s_invariant(d, TheoryTriple.parse("lee")).s   # 2
"""

from .cube import FilteredComplex, build_complex
from .exactalg import INTEGERS, RATIONALS, CoefficientRing, SparseMatrix, prime_field, rank, smith_normal_form
from .frobenius import FrobeniusSystem, TheoryTriple, basis_change_map, default_panel
from .homology import compare_uct, compute_complex, filtration_profile, homology_field, homology_integral
from .invariant import (
    SReport,
    canonical_generators,
    s_additivity_check,
    s_invariant,
    verify_main_theorem,
    verify_twist_equivalence,
)
from .linkio import LinkDiagram, connected_sum, mirror, parse_braid, parse_input, parse_pd, read_table, torus_knot
from .reduce import reduce_complex

__version__ = "0.1.0"

__all__ = [
    "CoefficientRing",
    "FilteredComplex",
    "FrobeniusSystem",
    "INTEGERS",
    "LinkDiagram",
    "RATIONALS",
    "SReport",
    "SparseMatrix",
    "TheoryTriple",
    "basis_change_map",
    "build_complex",
    "canonical_generators",
    "compare_uct",
    "compute_complex",
    "connected_sum",
    "default_panel",
    "filtration_profile",
    "homology_field",
    "homology_integral",
    "mirror",
    "parse_braid",
    "parse_input",
    "parse_pd",
    "prime_field",
    "rank",
    "read_table",
    "reduce_complex",
    "s_additivity_check",
    "s_invariant",
    "smith_normal_form",
    "torus_knot",
    "verify_main_theorem",
    "verify_twist_equivalence",
]
