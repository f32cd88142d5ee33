"""Discretely holomorphic parafermions for Z_N clock models.

Constructs lattice parafermions (products of order and disorder operators
with fractional-spin phases) on rhombically embedded covering lattices,
verifies their discrete Cauchy-Riemann contour identities exactly at the
Fateev-Zamolodchikov critical couplings, solves for those couplings from
holomorphicity alone and validates everything geometrically and by exact
enumeration.
"""

from .core import (
    CyclicValue,
    SectorIndex,
    WeightVector,
    central_charge,
    conformal_spin,
    dual_weights,
    fz_weights,
    omega,
    weight_eval,
)
from .enumeration import (
    CorrelatorResult,
    DisorderString,
    SpinConfiguration,
    correlator,
    face_sum_check,
    face_sum_terms,
    make_string,
    partition_function,
    path_independence_check,
    per_configuration_face_check,
    route_to_boundary,
)
from .geometry import (
    CoveringLattice,
    LineArrangement,
    RhombusGeometry,
    VertexRecord,
    build_honeycomb_covering,
    build_multigrid_tiling,
    build_square_covering,
    build_triangular_covering,
    dualize,
    export_svg,
    hexagon_flip,
    load_lattice,
    save_lattice,
    standard_rhombus,
)
from .holomorphy import (
    ResidualReport,
    WeightSolution,
    antiholomorphic_residuals,
    critical_star_triangle,
    disorder_ratio,
    face_residuals,
    fz_sector_solution,
    quadrilateral_rigidity_check,
    solve_weights,
    star_triangle_check,
)

__version__ = "0.1.0"
