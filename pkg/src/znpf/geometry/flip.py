"""Hexagon flip: retile three rhombi sharing a vertex the other way.

Three rhombi meeting at a common vertex tile a hexagon with opposite sides
parallel.  The same three rhombi tile it in exactly one other way, with the
interior vertex of the opposite kind; flipping realises the star-triangle
move on the covering lattice and adds or removes one spin vertex.
"""

from __future__ import annotations

import cmath
from dataclasses import replace
from typing import Sequence

from ..core import fz_weights
from ..errors import NotFlippableError
from .types import (
    CoveringLattice,
    PrimalEdge,
    RhombusGeometry,
    VertexRecord,
    boundary_duals,
    orient_face,
)


def _hexagon_structure(lat: CoveringLattice, face_ids: Sequence[int]):
    """Locate the shared centre and the ordered hexagon rim."""
    if len(set(face_ids)) != 3:
        raise NotFlippableError("need three distinct faces")
    try:
        corner_sets = [set(c.id for c in lat.faces[i].corners) for i in face_ids]
    except IndexError as exc:
        raise NotFlippableError("face index out of range") from exc
    common = corner_sets[0] & corner_sets[1] & corner_sets[2]
    if len(common) != 1:
        raise NotFlippableError("faces do not share a single common vertex")
    centre_id = common.pop()
    for a in range(3):
        for b in range(a + 1, 3):
            if len(corner_sets[a] & corner_sets[b]) != 2:
                raise NotFlippableError("faces are not pairwise edge-adjacent")
    rim_ids = sorted(
        (corner_sets[0] | corner_sets[1] | corner_sets[2]) - {centre_id},
        key=lambda vid: cmath.phase(lat.vertex(vid).z - lat.vertex(centre_id).z),
    )
    if len(rim_ids) != 6:
        raise NotFlippableError("faces do not tile a hexagon")
    centre = lat.vertex(centre_id)
    rim = [lat.vertex(v) for v in rim_ids]
    # opposite hexagon sides must be parallel (equal up to sign)
    scale = max(abs(r.z - centre.z) for r in rim)
    for k in range(3):
        s1 = rim[(k + 1) % 6].z - rim[k].z
        s2 = rim[(k + 4) % 6].z - rim[(k + 3) % 6].z
        if abs(s1 + s2) > 1e-9 * scale:
            raise NotFlippableError("hexagon sides are not opposite-parallel")
    neighbour_ids = {d if p == centre_id else p for (p, d) in lat.edges if centre_id in (p, d)}
    # rotate the rim so even slots hold the centre's covering neighbours
    if rim[0].id not in neighbour_ids:
        rim = rim[1:] + rim[:1]
    for k, r in enumerate(rim):
        if (r.id in neighbour_ids) != (k % 2 == 0):
            raise NotFlippableError("hexagon rim does not alternate around the centre")
    return centre, rim


def hexagon_flip(lat: CoveringLattice, face_ids: Sequence[int]) -> CoveringLattice:
    """Return the lattice with the three faces retiled the other way.

    The interior vertex is replaced by one of the opposite kind at the
    mirrored position; the rhombus shape multiset is preserved and the
    primal vertex count changes by exactly +-1.  Critical weights, when
    present, are reassigned on the three new primal edges from their face
    angles.
    """
    centre, rim = _hexagon_structure(lat, face_ids)
    new_id = max(v.id for v in lat.vertices) + 1
    new_kind = "dual" if centre.kind == "primal" else "primal"
    new_z = rim[0].z + rim[2].z + rim[4].z - 2 * centre.z
    new_centre = VertexRecord(new_id, new_kind, new_z)

    vertices = tuple(v for v in lat.vertices if v.id != centre.id) + (new_centre,)
    by_id = {v.id: v for v in vertices}

    keep = [f for i, f in enumerate(lat.faces) if i not in set(face_ids)]
    keep_edges = [
        pe for pe in lat.primal_edges if pe.face not in set(face_ids)
    ]
    faces: list[RhombusGeometry] = []
    primal_edges: list[PrimalEdge] = []
    old_to_new_face = {}
    for f, pe in zip(keep, keep_edges):
        old_to_new_face[pe.face] = len(faces)
        faces.append(f)
        primal_edges.append(replace(pe, face=len(faces) - 1))

    # new rhombi span (far_k, near_{k+1}, far_{k+1}, centre')
    for k in (1, 3, 5):
        quad = (rim[k], rim[(k + 1) % 6], rim[(k + 2) % 6], new_centre)
        prim = [v for v in quad if v.kind == "primal"]
        dua = [v for v in quad if v.kind == "dual"]
        face = orient_face(prim[0], dua[0], prim[1], dua[1])
        face.validate(strict=face.alpha > 0)
        idx = len(faces)
        weights = None
        if lat.critical_n is not None:
            weights = fz_weights(lat.critical_n, face.alpha)
        faces.append(face)
        p1, p2 = face.primal_pair
        primal_edges.append(PrimalEdge(p1, p2, idx, weights))

    edge_set: set[tuple[int, int]] = set()
    for f in faces:
        p1, d1, p2, d2 = (c.id for c in f.corners)
        edge_set.update(((p1, d1), (p2, d1), (p2, d2), (p1, d2)))
    edges = tuple(sorted(edge_set))
    boundary = boundary_duals(vertices, edges, faces)
    out = CoveringLattice(
        vertices=vertices,
        edges=edges,
        faces=tuple(faces),
        primal_edges=tuple(primal_edges),
        boundary=boundary,
        critical_n=lat.critical_n,
    )
    out.validate(strict=all(f.alpha > 0 for f in faces))
    return out
