"""Contour residuals, weight solving, rigidity and star-triangle checks."""

import cmath
import itertools
import math

import pytest

from znpf.core import WeightVector, fz_weights, omega
from znpf.errors import SingularWeightError
from znpf.geometry.types import RhombusGeometry, VertexRecord, standard_rhombus
from znpf.holomorphy import (
    antiholomorphic_residuals,
    critical_star_triangle,
    disorder_ratio,
    face_residuals,
    fz_sector_solution,
    quadrilateral_rigidity_check,
    raw_configuration_contour,
    solve_weights,
    star_triangle_check,
)

IDENT_TOL = 1e-12
NONZERO = 1e-3

ALPHAS = (0.3, math.pi / 3, math.pi / 2, 2 * math.pi / 3, 2.8)


def moved_rhombus(alpha, scale=1.0, rot=0.0, shift=0j):
    base = standard_rhombus(alpha)
    mul = scale * cmath.exp(1j * rot)
    corners = [
        VertexRecord(c.id, c.kind, mul * c.z + shift) for c in base.corners
    ]
    return RhombusGeometry.from_corners(*corners)


# -- disorder ratio -----------------------------------------------------------


def test_disorder_ratio_neutral_sector():
    for n in (2, 3, 5):
        w = fz_weights(n, 1.0)
        for q in range(n):
            assert disorder_ratio(n, 0, w, q) == pytest.approx(1.0)


def test_disorder_ratio_self_duality():
    w = fz_weights(2, math.pi / 2)
    r = disorder_ratio(2, 1, w, 0)
    assert r.real == pytest.approx((1 - w.x[1]) / (1 + w.x[1]), abs=IDENT_TOL)
    assert r.real == pytest.approx(w.x[1], abs=IDENT_TOL)  # N=2 self-duality
    w3 = WeightVector.from_free(3, (0.3660254,))
    r3 = disorder_ratio(3, 1, w3, 0)
    assert r3.real == pytest.approx((1 - 0.3660254) / (1 + 2 * 0.3660254), abs=1e-9)
    assert r3.real == pytest.approx(0.36602540, abs=1e-7)


def test_disorder_ratio_singular():
    # N=2 with x_1 = 1 makes W(sigma=-1) vanish
    w = WeightVector.from_free(2, (1.0,))
    with pytest.raises(SingularWeightError):
        disorder_ratio(2, 1, w, 1)


# -- face residuals -----------------------------------------------------------


def test_residuals_vanish_at_critical_couplings():
    for n in (2, 3, 4):
        for alpha in ALPHAS:
            w = fz_weights(n, alpha)
            rh = standard_rhombus(alpha)
            for m in range(1, n // 2 + 1):
                rep = face_residuals(rh, n, m, w)
                assert rep.max_abs <= IDENT_TOL, (n, m, alpha)
    # N=6: only the fundamental sector ties to the critical point
    for alpha in ALPHAS:
        rep = face_residuals(standard_rhombus(alpha), 6, 1, fz_weights(6, alpha))
        assert rep.max_abs <= IDENT_TOL


def test_neutral_sector_closure():
    rep = face_residuals(standard_rhombus(1.1), 4, 0, fz_weights(4, 1.1))
    assert rep.max_abs == 0.0


def test_off_critical_detected():
    w = WeightVector.from_free(2, (math.tan(math.pi / 8) + 0.01,))
    rep = face_residuals(standard_rhombus(math.pi / 2), 2, 1, w)
    assert rep.max_abs > NONZERO


def test_two_critical_points_for_five_states():
    w = fz_weights(5, math.pi / 2)
    swapped = WeightVector.from_free(5, (w.x[2], w.x[1]))
    rh = standard_rhombus(math.pi / 2)
    assert face_residuals(rh, 5, 1, w).max_abs <= IDENT_TOL
    assert face_residuals(rh, 5, 1, swapped).max_abs > NONZERO
    assert face_residuals(rh, 5, 2, swapped).max_abs <= IDENT_TOL
    assert face_residuals(rh, 5, 2, w).max_abs > NONZERO


def test_four_state_sector_separation():
    # the m=2 identity holds on the self-dual line, in particular at the
    # four-state Potts point, where the m=1 identity fails
    potts = WeightVector.from_free(4, (1 / 3, 1 / 3))
    rh = standard_rhombus(math.pi / 2)
    assert face_residuals(rh, 4, 2, potts).max_abs <= IDENT_TOL
    assert face_residuals(rh, 4, 1, potts).max_abs > NONZERO


def test_residuals_match_raw_configuration_oracle():
    # reduced per-sigma residuals agree with the explicit loop over all
    # N^2 spin configurations using raw string ratios
    for n, m in ((2, 1), (3, 1), (5, 2)):
        w = fz_weights(n, 1.9)
        off = WeightVector.from_free(n, tuple(v + 0.02 for v in w.free))
        rh = standard_rhombus(1.9)
        for weights in (w, off):
            rep = face_residuals(rh, n, m, weights)
            for q1, q2 in itertools.product(range(n), repeat=2):
                raw = raw_configuration_contour(rh, n, m, weights, q1, q2)
                reduced = rep.residuals[(q1 - q2) % n] * omega(n, q2 * m)
                assert abs(raw - reduced) < 1e-12


def test_translation_and_scale_invariance():
    w = fz_weights(3, 1.1)
    base = face_residuals(standard_rhombus(1.1), 3, 1, w)
    shifted = face_residuals(moved_rhombus(1.1, shift=2.7 - 1.3j), 3, 1, w)
    for a, b in zip(base.residuals, shifted.residuals):
        assert a == pytest.approx(b, abs=1e-13)
    scaled = face_residuals(moved_rhombus(1.1, scale=3.5), 3, 1, w)
    for a, b in zip(base.residuals, scaled.residuals):
        assert 3.5 * a == pytest.approx(b, abs=1e-12)


def test_rotation_preserves_zero_set():
    w = fz_weights(3, 1.1)
    off = WeightVector.from_free(3, (w.x[1] + 0.05,))
    base = face_residuals(standard_rhombus(1.1), 3, 1, off)
    ref = max(range(3), key=lambda q: abs(base.residuals[q]))
    for rot in (0.7, 2.0, -2.7, 3.1):
        rh = moved_rhombus(1.1, rot=rot)
        assert face_residuals(rh, 3, 1, w).max_abs <= IDENT_TOL
        turned = face_residuals(rh, 3, 1, off)
        assert turned.max_abs == pytest.approx(base.max_abs, abs=1e-13)
        # rotation multiplies every residual by one common unimodular phase
        lam = turned.residuals[ref] / base.residuals[ref]
        assert abs(abs(lam) - 1.0) < 1e-12
        for t, b in zip(turned.residuals, base.residuals):
            assert abs(t - lam * b) < 1e-12


def test_antiholomorphic_companion():
    # psi-hat = e^{2 i theta} psi against conjugated increments gives the
    # same residuals, so the companion vanishes exactly where psi does
    for n, m, alpha in ((2, 1, math.pi / 2), (3, 1, 0.9), (5, 2, 2.2)):
        w = fz_weights(n, alpha)
        if (n, m) == (5, 2):
            w = WeightVector.from_free(5, (w.x[2], w.x[1]))
        rh = standard_rhombus(alpha)
        anti = antiholomorphic_residuals(rh, n, m, w)
        holo = face_residuals(rh, n, m, w)
        assert anti.max_abs <= IDENT_TOL
        for a, b in zip(anti.residuals, holo.residuals):
            assert abs(a - b) < 1e-13
        off = WeightVector.from_free(n, tuple(v + 0.03 for v in w.free))
        assert antiholomorphic_residuals(rh, n, m, off).max_abs > NONZERO


def test_conjugate_sector_residuals():
    # sector N-m residuals are the complex conjugates of sector m's up to
    # the reindexing q -> -q and a gauge phase u_0 omega^{qm}; in particular
    # the magnitudes, max_abs and vanishing locus coincide exactly
    for n, m in ((3, 1), (4, 1), (5, 1), (5, 2), (6, 1)):
        base = fz_weights(n, 1.2)
        off = WeightVector.from_free(n, tuple(v + 0.07 for v in base.free))
        rh = standard_rhombus(1.2)
        for w in (base, off):
            lo = face_residuals(rh, n, m, w)
            hi = face_residuals(rh, n, n - m, w)
            assert hi.max_abs == pytest.approx(lo.max_abs, abs=1e-13)
            gauges = []
            for q in range(n):
                a = lo.residuals[q]
                b = hi.residuals[(-q) % n]
                assert abs(b) == pytest.approx(abs(a), abs=1e-13)
                if abs(a) > 1e-9:
                    gauges.append((q, b / a.conjugate()))
            for (q1, u1), (q2, u2) in zip(gauges, gauges[1:]):
                assert u2 / u1 == pytest.approx(omega(n, m * (q2 - q1)), abs=1e-10)
        # the two sectors vanish together, or not at all
        hi_crit = face_residuals(rh, n, n - m, base)
        lo_crit = face_residuals(rh, n, m, base)
        assert (hi_crit.max_abs <= IDENT_TOL) == (lo_crit.max_abs <= IDENT_TOL)


# -- weight solving -----------------------------------------------------------


def test_solve_recovers_ising_line():
    for alpha in ALPHAS:
        sol = solve_weights(2, 1, alpha)
        assert sol.solvable and sol.nullspace_dim == 0
        assert sol.particular[0] == pytest.approx(math.tan(alpha / 4), abs=1e-10)


def test_solve_matches_closed_form_fundamental_sector():
    for n in (2, 3, 4, 5, 6):
        for alpha in ALPHAS:
            sol = solve_weights(n, 1, alpha)
            w = fz_weights(n, alpha)
            assert sol.solvable and sol.nullspace_dim == 0, (n, alpha)
            for got, want in zip(sol.particular, w.free):
                assert got == pytest.approx(want, abs=1e-10)


def test_solve_five_state_sector_swap():
    w = fz_weights(5, math.pi / 2)
    sol = solve_weights(5, 2, math.pi / 2)
    assert sol.solvable and sol.nullspace_dim == 0
    assert sol.particular[0] == pytest.approx(w.x[2], abs=1e-10)
    assert sol.particular[1] == pytest.approx(w.x[1], abs=1e-10)
    closed = fz_sector_solution(5, 2, math.pi / 2)
    assert sol.contains(closed.free)


def test_solve_four_state_even_sector_is_unconstrained():
    # the spin-1 sector's contour identity holds for every symmetric weight
    # vector, so the solver reports the full two-parameter family
    sol = solve_weights(4, 2, math.pi / 2)
    assert sol.solvable
    assert sol.nullspace_dim == 2
    assert sol.contains(fz_weights(4, math.pi / 2).free)
    assert sol.contains((1 / 3, 1 / 3))
    assert sol.contains((0.2, 0.9))  # even off the critical line


def test_solve_six_state_even_sectors_pick_embedded_models():
    # sectors with gcd(m, N) > 1 constrain only the coarse-grained spins:
    # their families hold the embedded Z_{N/g} critical points, not the
    # six-state critical point
    fz6 = fz_weights(6, math.pi / 2)
    sol1 = solve_weights(6, 1, math.pi / 2)
    assert sol1.nullspace_dim == 0 and sol1.contains(fz6.free)
    sol2 = solve_weights(6, 2, math.pi / 2)
    assert sol2.solvable and sol2.nullspace_dim == 1
    assert sol2.particular[1] == pytest.approx(fz_weights(3, math.pi / 2).x[1], abs=1e-10)
    assert not sol2.contains(fz6.free)
    sol3 = solve_weights(6, 3, math.pi / 2)
    assert sol3.solvable and sol3.nullspace_dim == 1
    assert sol3.particular[2] == pytest.approx(fz_weights(2, math.pi / 2).x[1], abs=1e-10)
    assert not sol3.contains(fz6.free)


def test_solve_single_orientation_flag():
    sol = solve_weights(3, 1, 1.0, both_orientations=False)
    assert sol.solvable
    assert sol.particular[0] == pytest.approx(fz_weights(3, 1.0).x[1], abs=1e-10)


def test_solutions_validated_against_residuals():
    for n, m, alpha in ((3, 1, 0.9), (4, 1, 2.0), (5, 2, 1.3), (6, 1, 2.6)):
        sol = solve_weights(n, m, alpha)
        assert sol.solvable
        w = WeightVector.from_free(n, sol.particular, tol=1e-8)
        assert face_residuals(standard_rhombus(alpha), n, m, w).max_abs < 1e-10


# -- rigidity -----------------------------------------------------------------


def test_quadrilateral_rigidity():
    report = quadrilateral_rigidity_check(2, 1, math.pi / 2)
    fits = dict(report)
    assert fits[0.0] < 1e-12
    assert fits[0.05] > 1e-4
    values = [fit for _, fit in report]
    assert values == sorted(values)  # grows with the perturbation


def test_rigidity_other_moduli():
    report = quadrilateral_rigidity_check(3, 1, 1.2, perturbations=(0.0, 0.05))
    assert report[0][1] < 1e-12
    assert report[1][1] > 1e-4


# -- star-triangle ------------------------------------------------------------


def test_star_triangle_ising_equilateral():
    # hand oracle: summing the centre spin of three legs x gives triangle
    # couplings y with x^2 = y / (1 - y + y^2)
    alphas = (math.pi / 3,) * 3
    w_star, w_tri = critical_star_triangle(2, alphas)
    x = w_star[0].x[1]  # honeycomb coupling on the legs
    y = w_tri[0].x[1]  # triangular coupling on the edges
    assert x**2 == pytest.approx(y / (1 - y + y**2), abs=1e-12)
    ratio, dev = star_triangle_check(2, alphas, w_star, w_tri)
    assert dev <= IDENT_TOL
    assert ratio == pytest.approx(2 * (1 + x**2 * 3) / (1 + y**3 + 3 * (y + y**2) / 3), rel=1.0)


def test_star_triangle_critical_small_moduli():
    alphas = (math.pi / 2, math.pi / 4, math.pi / 4)
    for n in (2, 3, 4, 5):
        w_star, w_tri = critical_star_triangle(n, alphas)
        _, dev = star_triangle_check(n, alphas, w_star, w_tri)
        assert dev <= IDENT_TOL, n


def test_star_triangle_detects_perturbation():
    alphas = (1.1, 0.9, math.pi - 2.0)
    w_star, w_tri = critical_star_triangle(3, alphas)
    bumped = [WeightVector.from_free(3, (w_star[0].free[0] + 0.02,))] + list(w_star[1:])
    _, dev = star_triangle_check(3, alphas, bumped, w_tri)
    assert dev > NONZERO


def test_negative_angle_criticality():
    # obtuse embeddings: the critical continuation to negative angles still
    # satisfies the contour identity on the matching crossed face
    for n in (2, 3):
        rh = standard_rhombus(-0.7)
        assert face_residuals(rh, n, 1, fz_weights(n, -0.7)).max_abs <= IDENT_TOL
        assert face_residuals(rh, n, 1, fz_weights(n, 0.7)).max_abs > NONZERO


def test_report_serialisers():
    import json

    w = fz_weights(3, 1.0)
    rep = face_residuals(standard_rhombus(1.0), 3, 1, w)
    blob = json.loads(json.dumps(rep.to_dict()))
    assert blob["n"] == 3 and blob["m"] == 1
    assert blob["max_abs"] == rep.max_abs
    assert len(blob["residuals"]) == 3
    rows = rep.to_csv_rows()
    assert len(rows) == 3 and len(rows[0]) == 4  # q, re, im, abs

    sol = solve_weights(4, 2, math.pi / 2)
    sol_blob = json.loads(json.dumps(sol.to_dict()))
    assert sol_blob["nullspace_dim"] == sol.nullspace_dim
    srows = sol.to_csv_rows()
    assert len(srows) == 2  # one row per solution coordinate
    assert srows[0][0] == "x_1"
    assert len(srows[0]) == 2 + sol.nullspace_dim


def test_solve_seven_state_sectors():
    # conjecture support beyond the verified moduli: the fundamental sector
    # recovers the critical couplings; the higher coprime sectors are still
    # uniquely solvable, but at points that are no permutation of them, so
    # no closed form is reported
    sol1 = solve_weights(7, 1, math.pi / 2)
    assert sol1.solvable and sol1.nullspace_dim == 0
    for got, want in zip(sol1.particular, fz_weights(7, math.pi / 2).free):
        assert got == pytest.approx(want, abs=1e-10)
    assert fz_sector_solution(7, 1, math.pi / 2) is not None
    sol2 = solve_weights(7, 2, math.pi / 2)
    assert sol2.solvable and sol2.nullspace_dim == 0
    assert fz_sector_solution(7, 2, math.pi / 2) is None
    permuted = tuple(fz_weights(7, math.pi / 2).x[(2 * k) % 7] for k in (1, 2, 3))
    assert max(abs(a - b) for a, b in zip(sol2.particular, permuted)) > 1e-2


def test_randomised_criticality_sweep():
    # random moduli, sectors, angles and embeddings: critical couplings
    # always satisfy the identity, and the solver always recovers them
    import numpy as np

    from znpf.geometry.types import VertexRecord

    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        alpha = float(rng.uniform(0.15, math.pi - 0.15))
        rot = float(rng.uniform(-math.pi, math.pi))
        scale = float(rng.uniform(0.3, 3.0))
        shift = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        base = standard_rhombus(alpha)
        mul = scale * cmath.exp(1j * rot)
        rh = RhombusGeometry.from_corners(
            *[VertexRecord(c.id, c.kind, mul * c.z + shift) for c in base.corners]
        )
        w = fz_weights(n, alpha)
        assert face_residuals(rh, n, 1, w).max_abs <= 1e-12 * scale
        sol = solve_weights(n, 1, alpha)
        assert sol.solvable and sol.nullspace_dim == 0
        assert max(abs(a - b) for a, b in zip(sol.particular, w.free)) <= 1e-10


def test_five_state_swap_extends_to_anisotropic_angles():
    # the second critical point (couplings swapped) solves the sector-2
    # conditions at every opening angle, not only the isotropic one
    for alpha in (0.4, 1.1, math.pi / 2, 2.0, 2.8):
        sol = solve_weights(5, 2, alpha)
        w = fz_weights(5, alpha)
        assert sol.solvable and sol.nullspace_dim == 0
        assert sol.particular[0] == pytest.approx(w.x[2], abs=1e-12)
        assert sol.particular[1] == pytest.approx(w.x[1], abs=1e-12)
        assert fz_sector_solution(5, 2, alpha) is not None


def test_fundamental_sector_extends_to_large_moduli():
    # beyond the verified moduli the fundamental-sector identity still holds
    # at the critical couplings (conjecture support)
    for n in (7, 8, 12):
        for alpha in (0.9, math.pi / 2, 2.4):
            w = fz_weights(n, alpha)
            rep = face_residuals(standard_rhombus(alpha), n, 1, w)
            assert rep.max_abs <= 1e-12
