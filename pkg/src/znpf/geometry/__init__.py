"""Rhombic covering-lattice geometry: types, builders, flips, IO and SVG."""

from .builders import (
    build_honeycomb_covering,
    build_multigrid_tiling,
    build_square_covering,
    build_triangular_covering,
    dualize,
)
from .flip import hexagon_flip
from .latio import lattice_from_dict, lattice_to_dict, load_lattice, save_lattice
from .svg import export_svg
from .types import (
    CoveringLattice,
    LineArrangement,
    PrimalEdge,
    RhombusGeometry,
    VertexRecord,
    standard_rhombus,
)

__all__ = [
    "CoveringLattice",
    "LineArrangement",
    "PrimalEdge",
    "RhombusGeometry",
    "VertexRecord",
    "build_honeycomb_covering",
    "build_multigrid_tiling",
    "build_square_covering",
    "build_triangular_covering",
    "dualize",
    "export_svg",
    "hexagon_flip",
    "lattice_from_dict",
    "lattice_to_dict",
    "load_lattice",
    "save_lattice",
    "standard_rhombus",
]
