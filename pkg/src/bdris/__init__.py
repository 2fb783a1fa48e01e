"""Planar beyond-diagonal RIS architectures.

Graph models of BD-RIS interconnections, planarity and maximal-planarity
checks, circuit (susceptance / scattering) matrices, a straight-line drawing
of the 3-band graph, and sum-rate optimisation in a multi-user MISO downlink.
"""

from .architectures import (
    ArchitectureSpec,
    build_graph,
    classify_planarity,
    closed_form_total,
    component_count,
    is_maximal_planar,
    parse_spec,
)
from .circuit import (
    Z0,
    SusceptancePattern,
    assemble_susceptance,
    extract_components,
    pattern_membership,
    scattering_from_susceptance,
)
from .embedding import band3_recursive_drawing, count_crossings, export_svg
from .graph_core import (
    CircuitGraph,
    PlanarityVerdict,
    connected_components,
    edge_count,
    forbidden_minor_oracle,
    is_acyclic,
    is_planar,
    make_graph,
)
from .sumrate_opt import (
    ChannelRealization,
    OptimizerOptions,
    SystemConfig,
    effective_channels,
    gradient_check,
    optimize,
    sample_rayleigh,
    sinr,
    sum_rate,
)

__version__ = "0.1.0"
