"""Operation handlers: one function per endpoint, shared with the CLI."""

from __future__ import annotations

import math

from ..core import WeightVector, fz_weights
from ..enumeration import (
    correlator,
    face_sum_terms,
    make_string,
    partition_function,
    path_independence_check,
    per_configuration_face_check,
    route_to_boundary,
)
from ..errors import StringRoutingError
from ..geometry import (
    LineArrangement,
    build_honeycomb_covering,
    build_multigrid_tiling,
    build_square_covering,
    build_triangular_covering,
    lattice_from_dict,
    lattice_to_dict,
    standard_rhombus,
)
from ..holomorphy import (
    face_residuals,
    fz_sector_solution,
    solve_weights,
    star_triangle_check,
)
from .models import (
    EnumerateRequest,
    EnumerateResponse,
    LatticeBuildRequest,
    LatticeResponse,
    SolveRequest,
    SolveResponse,
    StarTriangleRequest,
    StarTriangleResponse,
    VerifyRequest,
    VerifyResponse,
    WeightsRequest,
    WeightsResponse,
)


def handle_weights(req: WeightsRequest) -> WeightsResponse:
    w = fz_weights(req.n, req.alpha)
    return WeightsResponse(n=req.n, alpha=req.alpha, x=list(w.x), free=list(w.free))


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    if req.weights is None:
        # per-sector critical default: the permuted critical point where the
        # sector defines one (e.g. the second five-state point for m = 2)
        w = fz_sector_solution(req.n, req.m % req.n, req.alpha) if req.m % req.n else None
        if w is None:
            w = fz_weights(req.n, req.alpha)
    else:
        w = WeightVector.from_free(req.n, req.weights)
    rh = standard_rhombus(req.alpha)
    rep = face_residuals(rh, req.n, req.m, w, anti=req.anti)
    return VerifyResponse(
        n=req.n,
        m=req.m,
        alpha=req.alpha,
        weights=list(w.x),
        residuals=[[r.real, r.imag] for r in rep.residuals],
        max_abs=rep.max_abs,
        tol=req.tol,
        passed=rep.max_abs <= req.tol,
    )


def handle_solve(req: SolveRequest) -> SolveResponse:
    sol = solve_weights(req.n, req.m, req.alpha, both_orientations=req.both_orientations)
    closed = fz_sector_solution(req.n, req.m, req.alpha)
    matches = None
    if closed is not None:
        matches = sol.contains(closed.free, tol=1e-10)
    return SolveResponse(
        n=req.n,
        m=req.m,
        alpha=req.alpha,
        particular=list(sol.particular),
        nullspace=[list(v) for v in sol.nullspace],
        nullspace_dim=sol.nullspace_dim,
        residual_of_fit=sol.residual_of_fit,
        solvable=sol.solvable,
        closed_form=list(closed.free) if closed is not None else None,
        matches_closed_form=matches,
    )


def handle_star_triangle(req: StarTriangleRequest) -> StarTriangleResponse:
    if req.star is not None:
        w_star = [WeightVector.from_free(req.n, f) for f in req.star]
    else:
        w_star = [fz_weights(req.n, math.pi - a) for a in req.alphas]
    if req.triangle is not None:
        w_tri = [WeightVector.from_free(req.n, f) for f in req.triangle]
    else:
        w_tri = [fz_weights(req.n, a) for a in req.alphas]
    if req.perturb:
        free = list(w_star[0].free)
        free[0] += req.perturb
        w_star = [WeightVector.from_free(req.n, free)] + list(w_star[1:])
    ratio, max_dev = star_triangle_check(req.n, req.alphas, w_star, w_tri)
    return StarTriangleResponse(
        n=req.n,
        alphas=list(req.alphas),
        ratio=ratio,
        max_dev=max_dev,
        tol=req.tol,
        passed=max_dev <= req.tol,
    )


def handle_lattice_build(req: LatticeBuildRequest) -> LatticeResponse:
    if req.kind == "square":
        lat = build_square_covering(req.rows, req.cols, req.alpha)
    elif req.kind == "triangular":
        a2 = req.alpha2 if req.alpha2 is not None else req.alpha
        lat = build_triangular_covering(req.size, req.alpha, a2)
    elif req.kind == "honeycomb":
        a2 = req.alpha2 if req.alpha2 is not None else req.alpha
        lat = build_honeycomb_covering(req.size, req.alpha, a2)
    else:
        angles = req.angles or [k * math.pi / 5 - math.pi / 2 + math.pi / 5 for k in range(5)]
        offsets = req.offsets or [0.101 + 0.07 * k for k in range(len(angles))]
        lat = build_multigrid_tiling(LineArrangement(tuple(angles), tuple(offsets), req.extent))
    if req.n is not None:
        lat = lat.with_critical_weights(req.n)
    return LatticeResponse(
        kind=req.kind,
        vertices=len(lat.vertices),
        primal_vertices=len(lat.primal_ids),
        faces=len(lat.faces),
        alphas=sorted({round(f.alpha, 12) for f in lat.faces}),
        boundary=len(lat.boundary),
        lattice=lattice_to_dict(lat),
    )


def handle_enumerate(req: EnumerateRequest) -> EnumerateResponse:
    lat = lattice_from_dict(req.lattice)
    if req.n is None:
        raise ValueError("enumeration requires the modulus n for weight assignment")
    lat = lat.with_critical_weights(req.n)
    if req.perturb_x1:
        lat = lat.with_perturbed_weights(1, req.perturb_x1)

    if req.check == "partition":
        z = partition_function(lat, cap=req.cap, workers=req.workers)
        return EnumerateResponse(
            check=req.check, n=req.n, m=req.m, z=z,
            config_count=req.n ** len(lat.primal_ids),
            tol=req.tol, passed=z > 0,
        )

    if req.check == "correlator":
        strings = [make_string(lat, s.sector, s.path) for s in req.strings]
        res = correlator(lat, strings, req.spectators, cap=req.cap, workers=req.workers)
        return EnumerateResponse(
            check=req.check, n=req.n, m=req.m,
            value=[res.value.real, res.value.imag], z=res.z,
            config_count=res.config_count, neutral=res.neutral,
            tol=req.tol, passed=True,
        )

    if req.check == "face-sum":
        face = req.face if req.face is not None else _default_face(lat)
        spectators = list(req.spectators) or _neutralising_spectator(lat, face, req.m, req.n)
        terms = face_sum_terms(
            lat, face, req.m, spectators, cap=req.cap, workers=req.workers
        )
        residual = abs(sum(terms))
        scale = max(abs(t) for t in terms)
        return EnumerateResponse(
            check=req.check, n=req.n, m=req.m, face=face,
            residual=residual, scale=scale, tol=req.tol,
            passed=residual <= req.tol * max(scale, 1e-300),
        )

    if req.check == "per-config":
        face = req.face if req.face is not None else _default_face(lat)
        worst = per_configuration_face_check(lat, face, req.m, cap=req.cap)
        return EnumerateResponse(
            check=req.check, n=req.n, m=req.m, face=face,
            residual=worst, tol=req.tol, passed=worst <= req.tol,
        )

    # path independence
    anchor = req.anchor if req.anchor is not None else _default_anchor(lat)
    path_a = tuple(req.path_a) if req.path_a else route_to_boundary(lat, anchor)
    path_b = tuple(req.path_b) if req.path_b else _second_route(lat, anchor, path_a)
    dev, gauge = path_independence_check(
        lat, anchor, req.m, path_a, path_b, req.spectators,
        cap=req.cap, workers=req.workers,
    )
    return EnumerateResponse(
        check=req.check, n=req.n, m=req.m,
        deviation=dev, gauge_power=gauge, tol=req.tol, passed=dev <= req.tol,
    )


def _default_face(lat) -> int:
    interior = lat.interior_faces()
    return interior[0] if interior else 0


def _default_anchor(lat) -> int:
    inner = [d for d in lat.dual_ids if d not in lat.boundary]
    if not inner:
        raise StringRoutingError("no interior dual vertex to anchor a string")
    return inner[0]


def _second_route(lat, anchor: int, path_a) -> tuple[int, ...]:
    adj = lat.dual_adjacency()
    for first in adj.get(anchor, ()):
        if len(path_a) > 1 and first == path_a[1]:
            continue
        try:
            rest = route_to_boundary(lat, first, avoid=(anchor,))
        except StringRoutingError:
            continue
        return (anchor,) + rest
    raise StringRoutingError("no alternative route from the anchor")


def _neutralising_spectator(lat, face: int, m: int, n: int) -> list[tuple[int, int]]:
    """A single spin power s^{N-m} far from the face, making correlators
    charge-neutral so the face sum is a nontrivial test.

    Only coupled spins qualify: a patch keeps complete rhombi only, so its
    outermost corners can be edgeless free spins whose insertions factor out
    and average to zero.
    """
    fobj = lat.faces[face]
    centre = sum(c.z for c in fobj.corners) / 4.0
    coupled = {pe.p1 for pe in lat.primal_edges} | {pe.p2 for pe in lat.primal_edges}
    off = [v for v in sorted(coupled) if v not in fobj.primal_pair]
    if not off:
        return []
    far = max(off, key=lambda vid: abs(lat.vertex(vid).z - centre))
    return [(far, (n - m) % n)]
