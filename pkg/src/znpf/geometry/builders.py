"""Constructors for rhombically embedded covering lattices.

Square patches (isotropic and anisotropic), triangular patches with
circumcenter duals, their honeycomb duals, and de Bruijn multigrid duals of
simple line arrangements.  All builders are pure and return finite patches
containing only complete rhombi, so the primal-edge/face bijection holds by
construction.
"""

from __future__ import annotations

import cmath
import math

from ..errors import InvalidAngleError, TriplePointError
from .types import (
    CoveringLattice,
    LineArrangement,
    PrimalEdge,
    RhombusGeometry,
    VertexRecord,
    boundary_duals,
    orient_face,
)


def _assemble(
    primals: dict,
    duals: dict,
    face_specs: list[tuple],
    strict: bool = True,
    combinatorial: bool = False,
) -> CoveringLattice:
    """Build a CoveringLattice from keyed primal/dual positions and faces.

    face_specs entries are (primal_key_a, dual_key_a, primal_key_b,
    dual_key_b); ids are allocated primals first, in insertion order.  With
    combinatorial=True the given corner cycle is kept verbatim; builders use
    it when the cycle orientation is meaningful (obtuse triangular faces,
    whose opening angle is negative precisely because the combinatorial and
    geometric orientations disagree).
    """
    records: list[VertexRecord] = []
    pid: dict = {}
    did: dict = {}
    for key, z in primals.items():
        pid[key] = len(records)
        records.append(VertexRecord(len(records), "primal", z))
    for key, z in duals.items():
        did[key] = len(records)
        records.append(VertexRecord(len(records), "dual", z))
    by_id = {v.id: v for v in records}

    faces: list[RhombusGeometry] = []
    primal_edges: list[PrimalEdge] = []
    edge_set: set[tuple[int, int]] = set()
    for pa, da, pb, db in face_specs:
        corner_records = (by_id[pid[pa]], by_id[did[da]], by_id[pid[pb]], by_id[did[db]])
        if combinatorial:
            face = RhombusGeometry.from_corners(*corner_records)
        else:
            face = orient_face(*corner_records)
        face.validate(strict=strict)
        idx = len(faces)
        faces.append(face)
        p1, p2 = face.primal_pair
        primal_edges.append(PrimalEdge(p1, p2, idx))
        d1, d2 = face.dual_pair
        for p in (p1, p2):
            for d in (d1, d2):
                edge_set.add((p, d))
    edges = tuple(sorted(edge_set))
    boundary = boundary_duals(records, edges, faces)
    lat = CoveringLattice(
        vertices=tuple(records),
        edges=edges,
        faces=tuple(faces),
        primal_edges=tuple(primal_edges),
        boundary=boundary,
    )
    lat.validate(strict=strict)
    return lat


def build_square_covering(rows: int, cols: int, alpha: float) -> CoveringLattice:
    """Anisotropic square patch of rows x cols spins.

    The two unit covering-edge vectors are 1 and e^{i alpha}, so vertical
    (y-direction) primal edges span rhombi of opening angle alpha and
    horizontal (x-direction) edges span the complementary pi - alpha rhombi.
    At alpha = pi/2 the covering cells are the unit squares with edge
    directions {-pi, -pi/2, 0, pi/2}.
    """
    if rows < 2 or cols < 2:
        raise ValueError("need at least a 2 x 2 patch")
    if not 0.0 < alpha < math.pi:
        raise InvalidAngleError(f"opening angle must lie in (0, pi), got {alpha!r}")
    a = 1.0 + 0.0j
    b = cmath.exp(1j * alpha)
    u = a - b  # primal step in the x direction
    v = a + b  # primal step in the y direction

    primals = {(i, j): i * u + j * v for j in range(rows) for i in range(cols)}
    duals: dict = {}
    face_specs = []

    def plaq(i: int, j: int) -> tuple:
        key = (i, j)
        if key not in duals:
            duals[key] = i * u + j * v + a
        return key

    # vertical primal edges sit between plaquettes (i-1, j) and (i, j)
    for i in range(cols):
        for j in range(rows - 1):
            face_specs.append(((i, j), plaq(i, j), (i, j + 1), plaq(i - 1, j)))
    # horizontal primal edges sit between plaquettes (i, j-1) and (i, j)
    for i in range(cols - 1):
        for j in range(rows):
            face_specs.append(((i, j), plaq(i, j), (i + 1, j), plaq(i, j - 1)))
    return _assemble(primals, duals, face_specs)


def _circumcenter(z1: complex, z2: complex, z3: complex) -> complex:
    """Circumcenter of a nondegenerate triangle."""
    d = 2.0 * ((z1.real - z3.real) * (z2.imag - z3.imag) - (z2.real - z3.real) * (z1.imag - z3.imag))
    if abs(d) < 1e-14:
        raise InvalidAngleError("degenerate triangle has no circumcenter")
    s1 = abs(z1) ** 2 - abs(z3) ** 2
    s2 = abs(z2) ** 2 - abs(z3) ** 2
    ux = (s1 * (z2.imag - z3.imag) - s2 * (z1.imag - z3.imag)) / d
    uy = (s2 * (z1.real - z3.real) - s1 * (z2.real - z3.real)) / d
    return complex(ux, uy)


def build_triangular_covering(size: int, alpha1: float, alpha2: float) -> CoveringLattice:
    """Triangular patch whose duals sit at the circumcenters of the faces.

    alpha1, alpha2 (and alpha3 = pi - alpha1 - alpha2) are the rhombus
    opening angles attached to the three primal edge directions; the
    triangle angle opposite a direction-i edge is (pi - alpha_i)/2.  The
    equilateral case alpha1 = alpha2 = pi/3 is the isotropic triangular
    lattice.  alpha3 turns negative when the underlying triangle is obtuse;
    the dual vertices then lie outside their faces and the direction-3
    couplings become weakly antiferromagnetic.  alpha3 = 0 (right triangles,
    circumcenter on the primal edge) is allowed but produces degenerate
    faces that cannot carry weights.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    alpha3 = math.pi - alpha1 - alpha2
    for a in (alpha1, alpha2):
        if not 0.0 < a < math.pi:
            raise InvalidAngleError(f"direction angles must lie in (0, pi), got {a!r}")
    if alpha3 <= -math.pi:
        raise InvalidAngleError("alpha1 + alpha2 must stay below 2 pi")
    gamma_c = 0.5 * (math.pi - alpha1)  # triangle angle opposite direction-1 edges
    gamma_b = 0.5 * (math.pi - alpha2)
    gamma_a = 0.5 * (math.pi - alpha3)
    e1 = 1.0 + 0.0j
    e2 = (math.sin(gamma_b) / math.sin(gamma_c)) * cmath.exp(1j * gamma_a)

    primals = {(i, j): i * e1 + j * e2 for j in range(size + 1) for i in range(size + 1)}
    duals: dict = {}

    def centre(kind: str, i: int, j: int) -> tuple:
        key = (kind, i, j)
        if key not in duals:
            if kind == "up":
                tri = (primals[(i, j)], primals[(i + 1, j)], primals[(i, j + 1)])
            else:
                tri = (primals[(i + 1, j)], primals[(i, j + 1)], primals[(i + 1, j + 1)])
            duals[key] = _circumcenter(*tri)
        return key

    face_specs = []
    strict = alpha3 > 1e-12
    # corner cycle rule: D1 is the circumcenter of the triangle on the right
    # of the directed primal edge P1 -> P2; for obtuse triangles this keeps
    # the combinatorial orientation and yields the negative opening angle.
    for i in range(size):
        for j in range(1, size):
            face_specs.append(((i, j), centre("down", i, j - 1), (i + 1, j), centre("up", i, j)))
    for i in range(1, size):
        for j in range(size):
            face_specs.append(((i, j), centre("up", i, j), (i, j + 1), centre("down", i - 1, j)))
    for i in range(size):
        for j in range(size):
            face_specs.append(((i + 1, j), centre("down", i, j), (i, j + 1), centre("up", i, j)))
    return _assemble(primals, duals, face_specs, strict=strict, combinatorial=True)


def dualize(lat: CoveringLattice) -> CoveringLattice:
    """Exchange primal and dual roles; faces keep their geometry.

    Opening angles map to their complements, so the dual of a lattice with
    direction angles alpha_j carries pi - alpha_j.
    """
    flipped = {
        v.id: VertexRecord(v.id, "dual" if v.kind == "primal" else "primal", v.z)
        for v in lat.vertices
    }
    faces = []
    primal_edges = []
    for f in lat.faces:
        p1, d1, p2, d2 = (c.id for c in f.corners)
        # rotate the cycle by one corner: orientation is preserved
        face = RhombusGeometry.from_corners(flipped[d1], flipped[p2], flipped[d2], flipped[p1])
        idx = len(faces)
        faces.append(face)
        a, bq = face.primal_pair
        primal_edges.append(PrimalEdge(a, bq, idx))
    edges = tuple(sorted((d, p) for (p, d) in lat.edges))
    records = tuple(flipped[v.id] for v in lat.vertices)
    boundary = boundary_duals(records, edges, faces)
    out = CoveringLattice(
        vertices=records,
        edges=edges,
        faces=tuple(faces),
        primal_edges=tuple(primal_edges),
        boundary=boundary,
    )
    out.validate(strict=all(f.alpha > 0 for f in faces))
    return out


def build_honeycomb_covering(size: int, alpha1: float, alpha2: float) -> CoveringLattice:
    """Honeycomb patch as the dual of the triangular construction.

    Spins sit at the former circumcenters; the rhombus opening angle at the
    primal corners is pi - alpha_j, so the isotropic case (pi/3, pi/3)
    yields 2 pi/3 everywhere.
    """
    return dualize(build_triangular_covering(size, alpha1, alpha2))


def build_multigrid_tiling(arr: LineArrangement) -> CoveringLattice:
    """De Bruijn dual of a simple line arrangement.

    Family i consists of the lines Re(z e^{-i eta_i}) = n + offset_i with
    n integer and eta_i normal to the stated direction.  Every pairwise
    intersection contributes one unit rhombus whose edges follow the two
    normals; the vertex parity sum two-colours the tiling, fixing the
    primal/dual kinds.
    """
    m = arr.m
    etas = [a + math.pi / 2 for a in arr.angles]
    units = [cmath.exp(1j * e) for e in etas]

    def k_value(z: complex, fam: int) -> float:
        return (z * cmath.exp(-1j * etas[fam])).real - arr.offsets[fam]

    primals: dict = {}
    duals: dict = {}
    face_specs = []
    span = range(-arr.extent, arr.extent + 1)

    def corner(indices: tuple[int, ...]) -> tuple:
        z = sum(c * u for c, u in zip(indices, units))
        kind = sum(indices) % 2
        table = primals if kind == 0 else duals
        if indices not in table:
            table[indices] = z
        return indices, kind

    for i in range(m):
        for j in range(i + 1, m):
            det = (units[i].conjugate() * units[j]).imag  # sin of the normal gap
            for ni in span:
                for nj in span:
                    # intersection of line (i, ni) with line (j, nj)
                    ci = ni + arr.offsets[i]
                    cj = nj + arr.offsets[j]
                    z = _line_intersection(units[i], ci, units[j], cj)
                    base = [0] * m
                    ok = True
                    for k in range(m):
                        if k == i or k == j:
                            continue
                        val = k_value(z, k)
                        if abs(val - round(val)) < 1e-9:
                            raise TriplePointError(
                                f"families {i},{j},{k} meet at one point; perturb offsets"
                            )
                        base[k] = math.ceil(val)
                        if abs(base[k]) > arr.extent + 1:
                            ok = False
                            break
                    if not ok:
                        continue
                    quad = []
                    for ai, aj in ((ni, nj), (ni + 1, nj), (ni + 1, nj + 1), (ni, nj + 1)):
                        idx = list(base)
                        idx[i] = ai
                        idx[j] = aj
                        quad.append(corner(tuple(idx)))
                    if det < 0:
                        quad.reverse()
                    kinds = [k for (_, k) in quad]
                    # counterclockwise alternating corners; primal kind is parity 0
                    keys = [key for (key, _) in quad]
                    if kinds[0] == 0:
                        face_specs.append((keys[0], keys[1], keys[2], keys[3]))
                    else:
                        face_specs.append((keys[1], keys[2], keys[3], keys[0]))
    return _assemble(primals, duals, face_specs)


def _line_intersection(u_i: complex, c_i: float, u_j: complex, c_j: float) -> complex:
    """Solve Re(z conj(u_i)) = c_i, Re(z conj(u_j)) = c_j for z."""
    a11, a12 = u_i.real, u_i.imag
    a21, a22 = u_j.real, u_j.imag
    det = a11 * a22 - a12 * a21
    x = (c_i * a22 - c_j * a12) / det
    y = (a11 * c_j - a21 * c_i) / det
    return complex(x, y)


def assign_critical_weights(lat: CoveringLattice, n: int) -> CoveringLattice:
    """Convenience alias for CoveringLattice.with_critical_weights."""
    return lat.with_critical_weights(n)
