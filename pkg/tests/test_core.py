"""Weights, critical couplings and CFT reference values."""

import math
from fractions import Fraction

import pytest

from znpf.core import (
    CyclicValue,
    WeightVector,
    central_charge,
    conformal_spin,
    dual_weights,
    fz_weights,
    omega,
    weight_eval,
)
from znpf.errors import InconsistentWeightsError, InvalidAngleError, InvalidModulusError

TOL = 1e-12


def sinh2k_coupling(target: float) -> float:
    """Independent Ising oracle: solve sinh(2K) = target for x = tanh K."""
    lo, hi = 0.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.sinh(2.0 * mid) < target:
            lo = mid
        else:
            hi = mid
    return math.tanh(0.5 * (lo + hi))


def test_omega_basic():
    assert omega(4, 0) == pytest.approx(1.0)
    assert omega(4, 1) == pytest.approx(1j)
    assert omega(3, 2) == pytest.approx(omega(3, 1).conjugate())
    # periodic in q with period N
    assert omega(5, 7) == pytest.approx(omega(5, 2))
    assert abs(omega(7, 3)) == pytest.approx(1.0)


def test_omega_invalid_modulus():
    with pytest.raises(InvalidModulusError):
        omega(1, 0)
    with pytest.raises(InvalidModulusError):
        omega(0, 2)


def test_cyclic_value():
    v = CyclicValue(2, 5)
    assert complex(v) == pytest.approx(omega(5, 2))
    assert (v * CyclicValue(4, 5)).q == 1
    assert v.conjugate().q == 3
    with pytest.raises(ValueError):
        CyclicValue(5, 5)


def test_fz_square_ising():
    # critical square-lattice coupling tan(pi/8) = sqrt(2) - 1
    w = fz_weights(2, math.pi / 2)
    assert w.x[1] == pytest.approx(math.tan(math.pi / 8), abs=TOL)
    assert w.x[1] == pytest.approx(math.sqrt(2.0) - 1.0, abs=TOL)
    # independent oracle: sinh(2K) = 1 at the square-lattice critical point
    assert w.x[1] == pytest.approx(sinh2k_coupling(1.0), abs=1e-6)


def test_fz_generic_angle_ising():
    for alpha in (0.3, 1.0, math.pi / 2, 2.2, 3.0):
        assert fz_weights(2, alpha).x[1] == pytest.approx(math.tan(alpha / 4), abs=TOL)


def test_fz_triangular_honeycomb_ising_oracles():
    # triangular: sinh(2K) = 1/sqrt(3); honeycomb: sinh(2K) = sqrt(3)
    tri = fz_weights(2, math.pi / 3).x[1]
    assert tri == pytest.approx(sinh2k_coupling(1.0 / math.sqrt(3.0)), abs=1e-6)
    assert tri == pytest.approx(0.2679492, abs=1e-7)
    hex_ = fz_weights(2, 2 * math.pi / 3).x[1]
    assert hex_ == pytest.approx(sinh2k_coupling(math.sqrt(3.0)), abs=1e-6)
    assert hex_ == pytest.approx(0.5773503, abs=1e-7)


def test_fz_three_state():
    w = fz_weights(3, math.pi / 2)
    assert w.x[1] == pytest.approx(0.36602540, abs=1e-8)
    assert w.x[2] == pytest.approx(w.x[1], abs=TOL)
    # cross-check against the three-state Potts self-dual coupling
    assert w.x[1] == pytest.approx(1.0 / (1.0 + math.sqrt(3.0)), abs=TOL)


def test_fz_four_state():
    w = fz_weights(4, math.pi / 2)
    assert w.x[1] == pytest.approx(0.351153, abs=1e-6)
    assert w.x[2] == pytest.approx(0.297693, abs=1e-6)
    assert 2 * w.x[1] + w.x[2] == pytest.approx(1.0, abs=TOL)


def test_fz_symmetry_dense():
    for n in range(2, 9):
        for k in range(1, 120):
            alpha = k * math.pi / 120.0
            if alpha >= math.pi:
                continue
            w = fz_weights(n, alpha)
            for j in range(1, n):
                assert abs(w.x[j] - w.x[n - j]) <= 1e-12


def test_fz_positivity():
    for n in range(2, 9):
        for k in range(1, 40):
            alpha = k * math.pi / 40.0
            if alpha >= math.pi:
                continue
            assert all(v > 0 for v in fz_weights(n, alpha).x)
    # weakly antiferromagnetic window: Boltzmann weights stay positive
    for n in range(2, 9):
        for alpha in (-math.pi / 6, -0.1, -0.35):
            w = fz_weights(n, alpha)
            assert all(weight_eval(w, q) > 0 for q in range(n))


def test_fz_domain_errors():
    for bad in (0.0, math.pi, -math.pi, 4.0):
        with pytest.raises(InvalidAngleError):
            fz_weights(3, bad)


def test_conformal_spin():
    assert conformal_spin(2, 1) == Fraction(1, 2)
    assert conformal_spin(5, 1) == Fraction(4, 5)
    assert conformal_spin(5, 2) == Fraction(6, 5)
    assert conformal_spin(7, 0) == 0
    for n in range(2, 9):
        for m in range(n):
            assert conformal_spin(n, m) == conformal_spin(n, (n - m) % n)


def test_central_charge():
    assert central_charge(2) == Fraction(1, 2)
    assert central_charge(3) == Fraction(4, 5)
    assert central_charge(6) == Fraction(5, 4)


def test_weight_eval():
    w = fz_weights(2, math.pi / 2)
    assert weight_eval(w, 0) == pytest.approx(math.sqrt(2.0), abs=TOL)
    assert weight_eval(WeightVector.from_free(5, (0.0, 0.0)), 3) == pytest.approx(1.0)
    w3 = WeightVector.from_free(3, (0.3660254,))
    assert weight_eval(w3, 1) == pytest.approx(0.6339746, abs=1e-7)


def test_weight_eval_reality():
    for n in range(2, 9):
        w = fz_weights(n, 1.234)
        scale = sum(abs(v) for v in w.x)
        for q in range(n):
            total = sum(w.x[k] * omega(n, q * k) for k in range(n))
            assert abs(total.imag) <= 1e-14 * scale


def test_weight_vector_invariants():
    with pytest.raises(InconsistentWeightsError):
        WeightVector(3, (0.9, 0.2, 0.2))
    with pytest.raises(InconsistentWeightsError):
        WeightVector(4, (1.0, 0.2, 0.3, 0.25))
    with pytest.raises(InconsistentWeightsError):
        WeightVector.from_free(4, (0.1,))
    w = WeightVector.from_free(4, (0.2, 0.5))
    assert w.x == (1.0, 0.2, 0.5, 0.2)
    assert w.free == (0.2, 0.5)


def test_dual_weights_pairs_complementary_angles():
    for n in (2, 3, 4, 5, 6):
        for alpha in (0.3, math.pi / 3, math.pi / 2, 2.8):
            d = dual_weights(fz_weights(n, alpha))
            f = fz_weights(n, math.pi - alpha)
            assert max(abs(a - b) for a, b in zip(d.x, f.x)) < 1e-12
