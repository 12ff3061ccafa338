"""Workbench for one-relator groups: words, presentations, rewriting
hierarchies, 2-complexes, Cayley balls and complement towers."""

from __future__ import annotations

from .cayley import (
    Ball,
    EndsClass,
    EndsEstimate,
    OracleBudget,
    ProbeStatus,
    cayley_ball,
    complex_ball,
    count_ends,
    equal_in_group,
    freiheitssatz_probe,
    smallcancel_check,
)
from .complex import (
    CWComplex2,
    EdgeSite,
    FaceSite,
    Subcomplex,
    TreeSet,
    euler_characteristic,
    fundamental_presentation,
    homology,
    internal_collapse,
    internal_expansion,
    is_simply_connected_bounded,
    reroute_trees,
    standard_complex,
)
from .magnus import build_hierarchy, classify_case, expand_case1, rewrite_case1, rewrite_case2
from .presentation import (
    Presentation,
    abelian_invariants,
    normalize_relator,
    parse_presentation,
    parse_word,
)
from .towers import (
    GroupHom,
    Tower,
    bond_surjective,
    pro_pi1,
    semistability_report,
    telescopic_check,
)
from .verdict import Verdict
from .words import Word, cyclic_reduce, exponent_sum, free_reduce, primitive_root, substitute

__version__ = "0.1.0"
