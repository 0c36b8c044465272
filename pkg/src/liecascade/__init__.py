"""Exact root-system combinatorics for commuting pairs of finite-order automorphisms."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .rootsys import (
    RootSystem,
    SystemType,
    all_types,
    build_root_system,
    cartan_int,
    form_value,
    is_strongly_orthogonal,
    root_string,
)
from .weyl import LatticeMap, WeylWord, apply, dominant_representative, is_weyl_element, reflect
from .diagram import DiagramAut, fold, folded_fixed_type, min_outer_fixed_rank, standard_flip, triality
from .cascade import (
    OrthoSet,
    RationalSubspace,
    a_series_chain,
    classify_d_normal_form,
    d_form1,
    d_form2,
    d_normal_form_exhaustion,
    d_series_chain,
    kostant_cascade,
    normal_form,
    parity,
)
from .torusauto import (
    TorusAut,
    check_property_star,
    fixed_subspace,
    lift_sign,
    lifts_to_involution,
    make_pair,
    property_star_sweep,
    rank_bound,
    reflection_order,
    torus_aut,
    torus_sign_action,
)
from .certifier import (
    Certificate,
    crt_cyclic,
    formality_certificate,
    involution_table,
    reverify,
    subgroups_of_Z2xZk,
)
