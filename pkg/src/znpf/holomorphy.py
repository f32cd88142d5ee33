"""Discrete Cauchy-Riemann contour identities and critical-weight solving.

The sector-m parafermion on a covering edge (r, r~) is
psi^m = exp(-i p_m theta) s_r^m mu_{r~,m} with p_m = m(N-m)/N.  Around one
rhombic face with corners (P1, D1, P2, D2) the contour sum of psi^m dz,
reduced per spin configuration through the disorder-string relation across
the primal edge (P1, P2), leaves N complex residuals indexed by
sigma = omega^q.  All N residuals vanish exactly at the critical couplings
attached to the rhombus opening angle, and the same condition read as a
linear system in the couplings recovers those critical values.

Phase convention: the string through the face is the directed dual segment
D1 -> D2, crossing (P1, P2) with P1 on its left, and substituting
s_P1 -> omega^{-m} s_P1 in the crossed weight.  The exp(-i p_m theta)
factors are evaluated on a continuous branch around the face (anchored at
the stored wrapped angle of the P2->D2 edge); each branch angle equals the
stored edge theta modulo 2 pi.  A fixed global wrapping would break the
identity on faces rotated across the branch cut, while this per-face branch
makes the vanishing locus independent of translation, scale and rotation of
the embedding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import WeightVector, conformal_spin, fz_weights, omega, weight_eval
from .errors import InvalidAngleError, SingularWeightError
from .geometry.types import RhombusGeometry, signed_angle, standard_rhombus

#: relative singular-value cutoff for nullspace extraction
SVD_CUTOFF = 1e-10

#: least-squares residual threshold (relative to system norm) for "solvable"
FIT_TOL = 1e-10


def disorder_ratio(n: int, m: int, w: WeightVector, q: int) -> complex:
    """Factor relating the disorder operators at the two duals of one face.

    Extending a string across a primal edge whose spin difference is
    sigma = omega^q multiplies the disorder operator by

        R_m(sigma) = sum_k x_k omega^{-mk} sigma^k / sum_k x_k sigma^k .

    Raises SingularWeightError when the (real) denominator weight vanishes.
    """
    den = weight_eval(w, q)
    if abs(den) < 1e-14 * max(sum(abs(v) for v in w.x), 1.0):
        raise SingularWeightError(
            f"edge weight vanishes at spin difference q={q}; disorder ratio undefined"
        )
    num = 0j
    for k in range(n):
        num += w.x[k] * omega(n, (q - m) * k)
    return num / den


@dataclass(frozen=True)
class ResidualReport:
    """Per-sigma residuals of the contour identity on one face."""

    n: int
    m: int
    residuals: tuple[complex, ...]
    max_abs: float
    weights_used: WeightVector
    rhombus: RhombusGeometry

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "residuals": [[r.real, r.imag] for r in self.residuals],
            "max_abs": self.max_abs,
            "weights": list(self.weights_used.x),
        }

    def to_csv_rows(self) -> list[list]:
        return [[q, r.real, r.imag, abs(r)] for q, r in enumerate(self.residuals)]


def contour_factors(
    corners: Sequence[complex], p: float, anti: bool = False
) -> tuple[complex, complex, complex, complex]:
    """Per-edge factors exp(-i p theta) dz around a closed quadrilateral.

    Branch angles are anchored at the wrapped argument of P2->D2 and
    continued around the face: the two edges at a common dual vertex differ
    by the turning angle at the primal corner, and the two edges at a common
    primal vertex differ by pi minus the turning at the opposite side.  For
    a rhombus they reduce to (phi - pi, phi + alpha, phi, phi + alpha - pi).
    The antiholomorphic companion uses exponent p - 2 against conjugated
    increments.
    """
    z_p1, z_d1, z_p2, z_d2 = corners
    t3 = cmath.phase(z_d2 - z_p2)
    t2 = t3 + signed_angle(z_d2 - z_p2, z_d1 - z_p2)
    t1 = t3 - math.pi + signed_angle(z_p2 - z_d2, z_d1 - z_p1)
    t4 = t2 - math.pi + signed_angle(z_p2 - z_d1, z_d2 - z_p1)
    deltas = (z_d1 - z_p1, z_p2 - z_d1, z_d2 - z_p2, z_p1 - z_d2)
    expo = (p - 2.0) if anti else p
    if anti:
        deltas = tuple(d.conjugate() for d in deltas)
    return tuple(
        cmath.exp(-1j * expo * t) * d for t, d in zip((t1, t2, t3, t4), deltas)
    )


def face_residuals(
    rh: RhombusGeometry,
    n: int,
    m: int,
    w_edge: WeightVector,
    anti: bool = False,
) -> ResidualReport:
    """Evaluate the N per-sigma contour residuals on one face.

    For sigma = omega^q the residual is

        e^{-i p theta_{P1 D1}} dz_{P1 D1} sigma^m R_m(sigma)
      + e^{-i p theta_{P2 D1}} dz_{D1 P2} R_m(sigma)
      + e^{-i p theta_{P2 D2}} dz_{P2 D2}
      + e^{-i p theta_{P1 D2}} dz_{D2 P1} sigma^m ,

    the contour sum divided by s_{P2}^m mu_{D2,m}.  The identity holds
    configuration by configuration, so all N residuals vanishing is exactly
    discrete holomorphicity of the face.
    """
    if m % n == 0:
        # neutral sector: R = 1 and the sum telescopes to the closure defect
        a = contour_factors([c.z for c in rh.corners], 0.0, anti)
        res = tuple(sum(a) for _ in range(n))
        return ResidualReport(n, m % n, res, max(abs(r) for r in res), w_edge, rh)
    p = float(conformal_spin(n, m % n))
    a1, a2, a3, a4 = contour_factors([c.z for c in rh.corners], p, anti)
    residuals = []
    for q in range(n):
        sig_m = omega(n, q * m)
        r = disorder_ratio(n, m, w_edge, q)
        residuals.append(a1 * sig_m * r + a2 * r + a3 + a4 * sig_m)
    res = tuple(residuals)
    return ResidualReport(n, m % n, res, max(abs(r) for r in res), w_edge, rh)


def antiholomorphic_residuals(
    rh: RhombusGeometry, n: int, m: int, w_edge: WeightVector
) -> ResidualReport:
    """Contour sum of psi-hat = e^{2 i theta} psi against conjugated increments."""
    return face_residuals(rh, n, m, w_edge, anti=True)


def raw_configuration_contour(
    rh: RhombusGeometry, n: int, m: int, w_edge: WeightVector, q1: int, q2: int
) -> complex:
    """Contour sum for one explicit spin configuration (s_P1, s_P2).

    Independent cross-check of face_residuals: uses the raw string-ratio
    definition of the disorder operator instead of the reduced per-sigma
    form; equals s_{P2}^m times the residual at sigma = omega^{q1-q2}.
    """
    p = float(conformal_spin(n, m % n)) if m % n else 0.0
    a1, a2, a3, a4 = contour_factors([c.z for c in rh.corners], p)
    s1m = omega(n, q1 * m)
    s2m = omega(n, q2 * m)
    # mu at D1 carries the extra crossing of (P1, P2); mu at D2 only the
    # tail.  The crossing multiplies the weight ratio with the substituted
    # spin difference, evaluated directly from the weight table.
    ratio = weight_eval(w_edge, q1 - q2 - m) / weight_eval(w_edge, q1 - q2)
    return a1 * s1m * ratio + a2 * s2m * ratio + a3 * s2m + a4 * s1m


@dataclass(frozen=True)
class WeightSolution:
    """Affine solution set of the holomorphicity conditions.

    particular is a least-squares representative over the free couplings
    x_1..x_{N//2}; nullspace spans the homogeneous directions.  An empty
    solution set (no solution within tolerance) is reported through
    solvable=False with the attained residual, not an exception.
    """

    n: int
    m: int
    alpha: float
    particular: tuple[float, ...]
    nullspace: tuple[tuple[float, ...], ...]
    residual_of_fit: float
    solvable: bool

    @property
    def nullspace_dim(self) -> int:
        return len(self.nullspace)

    @property
    def weights(self) -> Optional[WeightVector]:
        if not self.solvable:
            return None
        return WeightVector.from_free(self.n, self.particular, tol=1e-8)

    def sample(self, coeffs: Sequence[float]) -> tuple[float, ...]:
        """Point of the affine set: particular + sum(coeffs * nullspace)."""
        if len(coeffs) != self.nullspace_dim:
            raise ValueError("need one coefficient per nullspace direction")
        pt = np.array(self.particular, dtype=float)
        for c, direction in zip(coeffs, self.nullspace):
            pt = pt + c * np.array(direction)
        return tuple(pt)

    def contains(self, free: Sequence[float], tol: float = 1e-10) -> bool:
        """Whether a point of free couplings lies in the affine solution set."""
        if not self.solvable:
            return False
        d = np.array(free, dtype=float) - np.array(self.particular, dtype=float)
        if self.nullspace_dim:
            basis = np.array(self.nullspace, dtype=float)
            # remove the component representable in the nullspace
            coef, *_ = np.linalg.lstsq(basis.T, d, rcond=None)
            d = d - basis.T @ coef
        return float(np.linalg.norm(d)) <= tol * max(1.0, float(np.linalg.norm(free)))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "alpha": self.alpha,
            "particular": list(self.particular),
            "nullspace": [list(v) for v in self.nullspace],
            "nullspace_dim": self.nullspace_dim,
            "residual_of_fit": self.residual_of_fit,
            "solvable": self.solvable,
        }

    def to_csv_rows(self) -> list[list]:
        rows = []
        for k, val in enumerate(self.particular, start=1):
            rows.append([f"x_{k}", val] + [v[k - 1] for v in self.nullspace])
        return rows


def _fold_columns(n: int, coeffs: Sequence[complex]) -> tuple[np.ndarray, complex]:
    """Collapse length-N coefficient rows onto the free couplings.

    Returns (row over x_1..x_{N//2}, right-hand side) after imposing
    x_0 = 1 and x_k = x_{N-k}.
    """
    h = n // 2
    row = np.zeros(h, dtype=complex)
    for k in range(1, n):
        j = min(k, n - k)
        row[j - 1] += coeffs[k]
    rhs = -coeffs[0]
    return row, rhs


def _primal_row(n: int, m: int, beta: float, q: int) -> list[complex]:
    """Cleared contour condition at sigma = omega^q for opening angle beta.

    Multiplying the residual by the (real) denominator weight turns the
    condition into sum_k x_k * coeff_k = 0 with

        coeff_k = (c_a sigma^m + c_b) omega^{-mk} sigma^k
                - (1 + c_a c_b sigma^m) sigma^k ,

    c_a = e^{i pi p_m}, c_b = e^{i (1 - p_m) beta}.
    """
    p = float(conformal_spin(n, m))
    ca = cmath.exp(1j * math.pi * p)
    cb = cmath.exp(1j * (1.0 - p) * beta)
    sig = omega(n, q)
    sig_m = omega(n, q * m)
    lead = ca * sig_m + cb
    trail = -(1.0 + ca * cb * sig_m)
    return [lead * omega(n, -m * k) * sig**k + trail * sig**k for k in range(n)]


def _dual_row(n: int, m: int, beta: float, q: int) -> list[complex]:
    """Companion condition on the dual couplings, folded back to x by Fourier.

    The dual-orientation face (opening angle beta) constrains the
    Kramers-Wannier dual couplings; since the dual weight evaluated at
    omega^q is proportional to x_{-q mod N}, the cleared condition is linear
    in the original couplings:

        (c_a sigma^m + c_b) x_{(m-q) mod N} - (1 + c_a c_b sigma^m) x_{(-q) mod N} = 0 .
    """
    p = float(conformal_spin(n, m))
    ca = cmath.exp(1j * math.pi * p)
    cb = cmath.exp(1j * (1.0 - p) * beta)
    sig_m = omega(n, q * m)
    coeffs = [0j] * n
    coeffs[(m - q) % n] += ca * sig_m + cb
    coeffs[(-q) % n] += -(1.0 + ca * cb * sig_m)
    return coeffs


def solve_weights(
    n: int,
    m: int,
    alpha: float,
    both_orientations: bool = True,
    cutoff: float = SVD_CUTOFF,
    fit_tol: float = FIT_TOL,
) -> WeightSolution:
    """Solve the holomorphicity conditions for the free couplings.

    Assembles the cleared per-sigma conditions for the alpha-face and (by
    default) the companion (pi - alpha)-face, the latter imposed on the
    Kramers-Wannier dual couplings, which keeps the system linear in
    x_1..x_{N//2}.  Pairing both orientations mirrors the two rhombus
    families of the anisotropic square lattice.

    The affine solution set comes from a least-squares fit plus the SVD
    nullspace; candidate solutions are validated by evaluating the actual
    face residuals, which guards against spurious directions introduced by
    clearing the denominators.
    """
    if not 0.0 < alpha < math.pi:
        raise InvalidAngleError(f"opening angle must lie in (0, pi), got {alpha!r}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"sector must satisfy 1 <= m <= {n - 1}, got {m}")
    rows = []
    rhs = []
    for q in range(n):
        row, b = _fold_columns(n, _primal_row(n, m, alpha, q))
        rows.append(row)
        rhs.append(b)
    if both_orientations:
        for q in range(n):
            row, b = _fold_columns(n, _dual_row(n, m, math.pi - alpha, q))
            rows.append(row)
            rhs.append(b)
    a = np.array(rows, dtype=complex)
    b = np.array(rhs, dtype=complex)
    a_real = np.vstack([a.real, a.imag])
    b_real = np.concatenate([b.real, b.imag])
    scale = max(float(np.linalg.norm(a_real)), float(np.linalg.norm(b_real)), 1.0)

    u_mat, svals, vt = np.linalg.svd(a_real, full_matrices=True)
    smax = svals[0] if len(svals) else 0.0
    if smax <= cutoff * scale:
        rank = 0
    else:
        rank = int(np.sum(svals > cutoff * smax))
    # rank-truncated minimum-norm solution; rounding-level singular values
    # would otherwise steer the particular point arbitrarily
    if rank:
        proj = u_mat[:, :rank].T @ b_real
        sol = vt[:rank].T @ (proj / svals[:rank])
    else:
        sol = np.zeros(a_real.shape[1])
    fit = float(np.linalg.norm(a_real @ sol - b_real))
    solvable = fit <= fit_tol * scale
    null = tuple(tuple(float(x) for x in v) for v in vt[rank:])

    if solvable:
        solvable = _validated(n, m, alpha, sol, null)
    return WeightSolution(
        n=n,
        m=m,
        alpha=alpha,
        particular=tuple(float(x) for x in sol),
        nullspace=null,
        residual_of_fit=fit,
        solvable=solvable,
    )


def _validated(
    n: int, m: int, alpha: float, particular: np.ndarray, null: tuple
) -> bool:
    """Check solutions against direct residual evaluation on the alpha-face."""
    rh = standard_rhombus(alpha)
    candidates = [np.asarray(particular, dtype=float)]
    for v in null:
        candidates.append(np.asarray(particular) + 0.25 * np.asarray(v))
    for cand in candidates:
        w = WeightVector.from_free(n, tuple(float(x) for x in cand), tol=1e-8)
        try:
            rep = face_residuals(rh, n, m, w)
        except SingularWeightError:
            continue  # singular sample point, not a verdict on the whole set
        if rep.max_abs > 1e-8 * max(1.0, float(np.linalg.norm(cand))):
            return False
    return True


def quadrilateral_rigidity_check(
    n: int,
    m: int,
    alpha: float,
    perturbations: Sequence[float] = (0.0, 0.01, 0.02, 0.03, 0.05),
) -> list[tuple[float, float]]:
    """Least-squares residual of the contour conditions on deformed faces.

    Each perturbation t stretches the P1->D1 side of the standard rhombus by
    (1 + t), keeping the quadrilateral closed, and refits the couplings to
    the resulting per-sigma system.  Only the rhombus (t = 0) is solvable;
    the returned (t, residual_of_fit) pairs quantify the rigidity.
    """
    out = []
    base = standard_rhombus(alpha)
    z = [c.z for c in base.corners]
    for t in perturbations:
        corners = list(z)
        corners[1] = corners[0] + (1.0 + t) * (z[1] - z[0])  # move D1 along the side
        fit = _general_quad_fit(n, m, corners)
        out.append((float(t), fit))
    return out


def _general_quad_fit(n: int, m: int, corners: Sequence[complex]) -> float:
    """Best-fit residual of the per-sigma conditions on a closed quadrilateral."""
    p = float(conformal_spin(n, m))
    a1, a2, a3, a4 = contour_factors(corners, p)
    rows = []
    rhs = []
    for q in range(n):
        sig = omega(n, q)
        sig_m = omega(n, q * m)
        coeffs = [
            (a1 * sig_m + a2) * omega(n, -m * k) * sig**k + (a3 + a4 * sig_m) * sig**k
            for k in range(n)
        ]
        row, b = _fold_columns(n, coeffs)
        rows.append(row)
        rhs.append(b)
    a = np.array(rows, dtype=complex)
    b = np.array(rhs, dtype=complex)
    a_real = np.vstack([a.real, a.imag])
    b_real = np.concatenate([b.real, b.imag])
    sol, *_ = np.linalg.lstsq(a_real, b_real, rcond=None)
    return float(np.linalg.norm(a_real @ sol - b_real))


def star_triangle_check(
    n: int,
    alphas: Sequence[float],
    w_star: Sequence[WeightVector],
    w_tri: Sequence[WeightVector],
) -> tuple[float, float]:
    """Verify the star-triangle relation by brute force over N^3 spin triples.

    D(s1,s2,s3) sums the three star legs over the centre spin; T multiplies
    the three triangle weights.  Returns (R, max_dev) with R the fitted
    proportionality constant mean(D/T) and max_dev = max|D - R T| / max|D|.

    At the critical couplings the relation pairs triangle edges x_c(alpha_i)
    with star legs x_c(pi - alpha_i), for any angles with sum pi.
    """
    if len(alphas) != 3 or len(w_star) != 3 or len(w_tri) != 3:
        raise ValueError("need three angles and three weight vectors per side")
    if abs(sum(alphas) - math.pi) > 1e-9:
        raise InvalidAngleError(f"angles must sum to pi, got {sum(alphas)!r}")
    star_tables = [np.array([weight_eval(w, q) for q in range(n)]) for w in w_star]
    tri_tables = [np.array([weight_eval(w, q) for q in range(n)]) for w in w_tri]
    qs = np.arange(n)
    q1, q2, q3 = np.meshgrid(qs, qs, qs, indexing="ij")
    d = np.zeros((n, n, n))
    for q0 in range(n):
        d += (
            star_tables[0][(q1 - q0) % n]
            * star_tables[1][(q2 - q0) % n]
            * star_tables[2][(q3 - q0) % n]
        )
    t = (
        tri_tables[0][(q2 - q3) % n]
        * tri_tables[1][(q1 - q3) % n]
        * tri_tables[2][(q1 - q2) % n]
    )
    if np.any(np.abs(t) < 1e-14 * np.max(np.abs(t))):
        raise SingularWeightError("triangle weight vanishes on some configuration")
    ratio = float(np.mean(d / t))
    max_dev = float(np.max(np.abs(d - ratio * t)) / np.max(np.abs(d)))
    return ratio, max_dev


def critical_star_triangle(
    n: int, alphas: Sequence[float]
) -> tuple[list[WeightVector], list[WeightVector]]:
    """Critical weights for a star-triangle pair with triangle angles alphas."""
    w_tri = [fz_weights(n, a) for a in alphas]
    w_star = [fz_weights(n, math.pi - a) for a in alphas]
    return w_star, w_tri


def fz_sector_solution(n: int, m: int, alpha: float) -> Optional[WeightVector]:
    """Closed-form critical point of the sector-m conditions, when one exists.

    Candidate: the spin relabelling s -> s^m permutes the critical
    couplings, x_k -> x_{c,(mk mod N)} (for m = +-1 mod N this is
    fz_weights itself; for the five-state model it is the second critical
    point with x_1, x_2 swapped).  The candidate is validated against the
    actual contour residuals before being returned, since the permutation
    rule does not survive for every modulus: sectors with gcd(m, N) > 1
    constrain only the embedded Z_{N/g} model, and e.g. the seven-state
    sector-2 conditions single out a point that is no permutation of the
    critical couplings at all.  Returns None when no closed form is known.
    """
    if math.gcd(m, n) != 1:
        return None
    base = fz_weights(n, alpha)
    x = tuple(base.x[(m * k) % n] for k in range(n))
    candidate = WeightVector(n, x, tol=1e-9)
    rep = face_residuals(standard_rhombus(alpha), n, m, candidate)
    if rep.max_abs > 1e-10:
        return None
    return candidate
