"""Covering-lattice data types: vertices, rhombic faces and whole patches.

The covering lattice is the bipartite planar graph on spin (primal) and
disorder (dual) vertices whose faces are quadrilaterals; in a rhombic
embedding every covering edge has the same length, so every face is a
rhombus.  Each rhombus contains exactly one primal edge and one dual edge
as diagonals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from ..core import WeightVector, fz_weights
from ..errors import LatticeFormatError

#: relative tolerance for geometric predicates (unit-edge normalised inputs)
GEOM_TOL = 1e-10

TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Wrap an angle to the convention [-pi, pi)."""
    t = (theta + math.pi) % TWO_PI - math.pi
    # guard against -pi mapping to +pi through rounding
    return -math.pi if t >= math.pi else t


def signed_angle(u: complex, v: complex) -> float:
    """Signed angle in (-pi, pi] turning from direction u to direction v."""
    if u == 0 or v == 0:
        raise ValueError("zero vector has no direction")
    return cmath.phase(v / u)


@dataclass(frozen=True)
class VertexRecord:
    """One covering-lattice vertex: spin (primal) or disorder (dual) site."""

    id: int
    kind: str  # "primal" | "dual"
    z: complex

    def __post_init__(self) -> None:
        if self.kind not in ("primal", "dual"):
            raise LatticeFormatError(f"vertex kind must be primal|dual, got {self.kind!r}")


@dataclass(frozen=True)
class RhombusGeometry:
    """One quadrilateral face of the covering lattice.

    Attributes:
        corners: counterclockwise 4-tuple (P1 primal, D1 dual, P2 primal,
            D2 dual).
        alpha: interior angle at the primal corners, signed; negative values
            occur for faces of obtuse triangular embeddings.
        edge_thetas: per covering edge, the argument of the directed segment
            from the primal endpoint to the dual endpoint, wrapped to
            [-pi, pi).  Edge order follows the traversal sides
            (P1,D1), (P2,D1), (P2,D2), (P1,D2).
        edge_deltas: the directed sides in counterclockwise traversal order
            P1->D1, D1->P2, P2->D2, D2->P1.
    """

    corners: tuple[VertexRecord, VertexRecord, VertexRecord, VertexRecord]
    alpha: float
    edge_thetas: tuple[float, float, float, float]
    edge_deltas: tuple[complex, complex, complex, complex]

    @classmethod
    def from_corners(
        cls,
        p1: VertexRecord,
        d1: VertexRecord,
        p2: VertexRecord,
        d2: VertexRecord,
    ) -> "RhombusGeometry":
        kinds = (p1.kind, d1.kind, p2.kind, d2.kind)
        if kinds != ("primal", "dual", "primal", "dual"):
            raise LatticeFormatError(f"corner kinds must alternate primal/dual, got {kinds}")
        thetas = (
            wrap_angle(cmath.phase(d1.z - p1.z)),
            wrap_angle(cmath.phase(d1.z - p2.z)),
            wrap_angle(cmath.phase(d2.z - p2.z)),
            wrap_angle(cmath.phase(d2.z - p1.z)),
        )
        deltas = (d1.z - p1.z, p2.z - d1.z, d2.z - p2.z, p1.z - d2.z)
        alpha = signed_angle(d2.z - p2.z, d1.z - p2.z)
        return cls((p1, d1, p2, d2), alpha, thetas, deltas)

    @property
    def side_length(self) -> float:
        return abs(self.edge_deltas[0])

    @property
    def primal_pair(self) -> tuple[int, int]:
        return (self.corners[0].id, self.corners[2].id)

    @property
    def dual_pair(self) -> tuple[int, int]:
        return (self.corners[1].id, self.corners[3].id)

    def validate(self, tol: float = GEOM_TOL, strict: bool = True) -> None:
        """Check closure, equal sides and the alpha / pi-alpha angle pairing.

        With strict=False, degenerate faces (alpha <= 0, from right or obtuse
        triangular embeddings) pass the metric checks but skip the convexity
        requirement.
        """
        p1, d1, p2, d2 = (c.z for c in self.corners)
        scale = max(abs(d) for d in self.edge_deltas)
        if scale == 0.0:
            raise LatticeFormatError("degenerate face with coincident corners")
        if abs(sum(self.edge_deltas)) > tol * scale:
            raise LatticeFormatError("face does not close")
        sides = [abs(d) for d in self.edge_deltas]
        if max(sides) - min(sides) > tol * scale:
            raise LatticeFormatError(f"unequal side lengths {sides}")
        a_p1 = signed_angle(d1 - p1, d2 - p1)
        a_p2 = signed_angle(d2 - p2, d1 - p2)
        if min(abs(a_p1 - a_p2), abs(abs(a_p1 - a_p2) - TWO_PI)) > tol:
            raise LatticeFormatError(f"primal corner angles differ: {a_p1} vs {a_p2}")
        a_d1 = signed_angle(p1 - d1, p2 - d1)
        a_d2 = signed_angle(p2 - d2, p1 - d2)
        if min(abs(a_d1 - a_d2), abs(abs(a_d1 - a_d2) - TWO_PI)) > tol:
            raise LatticeFormatError(f"dual corner angles differ: {a_d1} vs {a_d2}")
        if abs(a_p2 - self.alpha) > tol:
            raise LatticeFormatError("stored alpha disagrees with corner geometry")
        if abs(abs(a_p2) + abs(a_d2) - math.pi) > tol:
            raise LatticeFormatError("corner angles do not pair to alpha, pi - alpha")
        if strict and not 0.0 < self.alpha < math.pi:
            raise LatticeFormatError(f"opening angle {self.alpha} outside (0, pi)")
        for stored, recomputed in zip(
            self.edge_thetas,
            (
                wrap_angle(cmath.phase(d1 - p1)),
                wrap_angle(cmath.phase(d1 - p2)),
                wrap_angle(cmath.phase(d2 - p2)),
                wrap_angle(cmath.phase(d2 - p1)),
            ),
        ):
            if abs(stored - recomputed) > 1e-12:
                raise LatticeFormatError("stored edge theta disagrees with coordinates")


def orient_face(
    pa: VertexRecord, da: VertexRecord, pb: VertexRecord, db: VertexRecord
) -> RhombusGeometry:
    """Order four alternating corners counterclockwise and pick P1.

    The corner cycle is made counterclockwise (positive signed area).  Of the
    two primal starting points the one placing arg(D2 - P2) inside
    [0, pi - alpha) is preferred, matching the textbook drawing of the face;
    residual evaluation does not depend on this choice.
    """
    pts = [pa, da, pb, db]
    area = 0.0
    for i in range(4):
        z0, z1 = pts[i].z, pts[(i + 1) % 4].z
        area += z0.real * z1.imag - z1.real * z0.imag
    if area < 0:
        pts = [pa, db, pb, da]

    def labelled(start: int) -> RhombusGeometry:
        p1, d1, p2, d2 = (pts[(start + i) % 4] for i in range(4))
        return RhombusGeometry.from_corners(p1, d1, p2, d2)

    first = labelled(0)
    phi = wrap_angle(cmath.phase(first.corners[3].z - first.corners[2].z))
    if first.alpha > 0 and 0.0 <= phi < math.pi - first.alpha:
        return first
    second = labelled(2)
    phi2 = wrap_angle(cmath.phase(second.corners[3].z - second.corners[2].z))
    if second.alpha > 0 and 0.0 <= phi2 < math.pi - second.alpha:
        return second
    return first


def standard_rhombus(alpha: float, side: float = 1.0, phi: float = 0.0) -> RhombusGeometry:
    """Free-standing rhombus with opening angle alpha in standard position.

    Corners are P2 at the origin, D2 at angle phi, D1 at angle phi + alpha,
    and P1 closing the parallelogram; vertex ids are 0..3.
    """
    p2 = 0j
    d2 = side * cmath.exp(1j * phi)
    d1 = side * cmath.exp(1j * (phi + alpha))
    p1 = d1 + d2
    return RhombusGeometry.from_corners(
        VertexRecord(0, "primal", p1),
        VertexRecord(1, "dual", d1),
        VertexRecord(2, "primal", p2),
        VertexRecord(3, "dual", d2),
    )


@dataclass(frozen=True)
class PrimalEdge:
    """A spin-model edge: the primal diagonal of exactly one rhombus."""

    p1: int
    p2: int
    face: int
    weights: Optional[WeightVector] = None


@dataclass(frozen=True)
class LineArrangement:
    """A multigrid: M line families with directions, offsets and a window."""

    angles: tuple[float, ...]
    offsets: tuple[float, ...]
    extent: int

    def __post_init__(self) -> None:
        if len(self.angles) != len(self.offsets):
            raise LatticeFormatError("need one offset per grid family")
        if len(self.angles) < 2:
            raise LatticeFormatError("a multigrid needs at least two families")
        if self.extent < 1:
            raise LatticeFormatError("extent must be >= 1")
        # a line direction is defined modulo pi; normalise into (-pi/2, pi/2]
        # (negating the offset keeps the same family of lines)
        angles = list(self.angles)
        offsets = list(self.offsets)
        for i, a in enumerate(angles):
            shifted = wrap_angle(a)
            if shifted <= -math.pi / 2:
                shifted += math.pi
                offsets[i] = -offsets[i]
            elif shifted > math.pi / 2:
                shifted -= math.pi
                offsets[i] = -offsets[i]
            angles[i] = shifted
        object.__setattr__(self, "angles", tuple(angles))
        object.__setattr__(self, "offsets", tuple(offsets))
        m = len(self.angles)
        for i in range(m):
            for j in range(i + 1, m):
                d = abs(wrap_angle(self.angles[i] - self.angles[j]))
                if min(d, abs(math.pi - d)) < 1e-9:
                    raise LatticeFormatError(
                        "coincident family directions: arrangement is not simple"
                    )

    @property
    def m(self) -> int:
        return len(self.angles)


@dataclass(frozen=True)
class CoveringLattice:
    """A finite rhombically embedded patch with free boundary.

    Only complete rhombi are kept, so every primal edge is the diagonal of
    exactly one face.  Boundary lists the dual vertices where disorder
    strings may terminate.
    """

    vertices: tuple[VertexRecord, ...]
    edges: tuple[tuple[int, int], ...]  # (primal id, dual id)
    faces: tuple[RhombusGeometry, ...]
    primal_edges: tuple[PrimalEdge, ...]
    boundary: frozenset[int]
    critical_n: Optional[int] = None

    # -- lookups ---------------------------------------------------------

    def vertex(self, vid: int) -> VertexRecord:
        return self._by_id()[vid]

    def _by_id(self) -> Mapping[int, VertexRecord]:
        cache = getattr(self, "_id_cache", None)
        if cache is None:
            cache = {v.id: v for v in self.vertices}
            object.__setattr__(self, "_id_cache", cache)
        return cache

    @property
    def primal_ids(self) -> tuple[int, ...]:
        return tuple(sorted(v.id for v in self.vertices if v.kind == "primal"))

    @property
    def dual_ids(self) -> tuple[int, ...]:
        return tuple(sorted(v.id for v in self.vertices if v.kind == "dual"))

    def face_of_dual_pair(self) -> dict[tuple[int, int], int]:
        """Map each ordered dual pair (d, d') to the face they flank."""
        out: dict[tuple[int, int], int] = {}
        for i, f in enumerate(self.faces):
            d1, d2 = f.dual_pair
            out[(d1, d2)] = i
            out[(d2, d1)] = i
        return out

    def dual_adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {}
        for f in self.faces:
            d1, d2 = f.dual_pair
            adj.setdefault(d1, []).append(d2)
            adj.setdefault(d2, []).append(d1)
        return adj

    def edge_face_count(self) -> dict[tuple[int, int], int]:
        """How many faces border each covering edge (1 on the patch rim)."""
        count: dict[tuple[int, int], int] = {e: 0 for e in self.edges}
        for f in self.faces:
            p1, d1, p2, d2 = (c.id for c in f.corners)
            for e in ((p1, d1), (p2, d1), (p2, d2), (p1, d2)):
                if e in count:
                    count[e] += 1
        return count

    def interior_faces(self) -> tuple[int, ...]:
        """Faces all of whose covering edges are shared by two faces."""
        count = self.edge_face_count()
        out = []
        for i, f in enumerate(self.faces):
            p1, d1, p2, d2 = (c.id for c in f.corners)
            sides = ((p1, d1), (p2, d1), (p2, d2), (p1, d2))
            if all(count.get(e, 0) == 2 for e in sides):
                out.append(i)
        return tuple(out)

    # -- weight assignment -------------------------------------------------

    def with_critical_weights(self, n: int) -> "CoveringLattice":
        """Assign each primal edge the critical couplings of its rhombus."""
        new_edges = tuple(
            replace(pe, weights=fz_weights(n, self.faces[pe.face].alpha))
            for pe in self.primal_edges
        )
        return replace(self, primal_edges=new_edges, critical_n=n)

    def with_uniform_weights(self, w: WeightVector) -> "CoveringLattice":
        new_edges = tuple(replace(pe, weights=w) for pe in self.primal_edges)
        return replace(self, primal_edges=new_edges, critical_n=None)

    def with_perturbed_weights(self, k: int, delta: float) -> "CoveringLattice":
        """Shift coupling x_k (and its mirror x_{N-k}) by delta on every edge."""
        new_edges = []
        for pe in self.primal_edges:
            if pe.weights is None:
                raise LatticeFormatError("assign weights before perturbing them")
            n = pe.weights.n
            x = list(pe.weights.x)
            x[k % n] += delta
            if (n - k) % n != k % n:
                x[(n - k) % n] += delta
            new_edges.append(replace(pe, weights=WeightVector(n, tuple(x))))
        return replace(self, primal_edges=tuple(new_edges), critical_n=None)

    # -- validation ---------------------------------------------------------

    def validate(self, tol: float = GEOM_TOL, strict: bool = True) -> None:
        ids = [v.id for v in self.vertices]
        if len(ids) != len(set(ids)):
            raise LatticeFormatError("vertex ids are not unique")
        by_id = self._by_id()
        for pid, did in self.edges:
            if by_id[pid].kind != "primal" or by_id[did].kind != "dual":
                raise LatticeFormatError(f"covering edge ({pid},{did}) is not primal-dual")
        if len(self.primal_edges) != len(self.faces):
            raise LatticeFormatError("primal edge / rhombus bijection broken")
        for pe in self.primal_edges:
            f = self.faces[pe.face]
            if {pe.p1, pe.p2} != set(f.primal_pair):
                raise LatticeFormatError("primal edge does not match its face diagonal")
        for f in self.faces:
            f.validate(tol=tol, strict=strict)
        for d in self.boundary:
            if by_id[d].kind != "dual":
                raise LatticeFormatError("boundary may contain only dual vertices")


def boundary_duals(
    vertices: Sequence[VertexRecord],
    edges: Iterable[tuple[int, int]],
    faces: Sequence[RhombusGeometry],
) -> frozenset[int]:
    """Dual vertices incident to a covering edge on the patch rim."""
    count: dict[tuple[int, int], int] = {tuple(e): 0 for e in edges}
    for f in faces:
        p1, d1, p2, d2 = (c.id for c in f.corners)
        for e in ((p1, d1), (p2, d1), (p2, d2), (p1, d2)):
            if e in count:
                count[e] += 1
    rim = {did for (pid, did), c in count.items() if c < 2}
    return frozenset(rim)
