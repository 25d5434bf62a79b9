"""Porcupine graphs of admissible pairs and the graded *-isomorphism onto I(H,S)."""

from .algebra import (
    Degree,
    Element,
    Monomial,
    check_ck_family,
    degree,
    format_element,
    homogeneous_components,
    multiply,
    normal_form,
    parse_element,
    star,
)
from .graph import OMEGA, Bundle, Edge, Graph, GraphError, Path, VertexKind, parse_graph, to_dot
from .ideal import (
    AdmissiblePair,
    PairError,
    SpanningMonomial,
    breaking_vertices,
    gap_projection,
    hereditary_saturated_closure,
    ideal_spanning_monomials,
    is_hereditary,
    is_saturated,
    make_admissible_pair,
    monomial_in_ideal,
)
from .iso import (
    DepthInsufficient,
    Phi,
    VerifyConfig,
    factorize_into_H,
    factorize_into_S,
    phi_edge,
    phi_element,
    phi_vertex,
    verify_graded_star_iso,
)
from .report import IsoReport
from .spines import (
    PorcupineGraph,
    SpineSets,
    build_hedgehog,
    build_porcupine,
    hedgehog_map_degrees,
    spine_sets,
)

__version__ = "0.1.0"
