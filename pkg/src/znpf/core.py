"""Z_N spin arithmetic, edge weights and Fateev-Zamolodchikov critical couplings.

A Z_N spin takes values in the N-th roots of unity omega^q.  A nearest
neighbour edge carries the real weight

    W(s_r s*_r') = sum_k x_k (s_r s*_r')^k ,   x_0 = 1,  x_k = x_{N-k},

so one edge is described by [N/2] free real couplings.  The critical
one-parameter family x_ck(alpha), indexed by the opening angle alpha of the
rhombus the edge spans in the covering lattice, specialises at alpha = pi/2
to the isotropic square-lattice Fateev-Zamolodchikov point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    InconsistentWeightsError,
    InvalidAngleError,
    InvalidModulusError,
    SingularWeightError,
)

#: absolute tolerance for construction and consistency checks
DEFAULT_TOL = 1e-12


def _check_modulus(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {n!r}")


def omega(n: int, q: int) -> complex:
    """q-th power of the primitive N-th root of unity exp(2*pi*i/N)."""
    _check_modulus(n)
    return cmath.exp(2j * math.pi * (q % n) / n)


@dataclass(frozen=True)
class CyclicValue:
    """A Z_N spin value omega^q with 0 <= q < N."""

    q: int
    n: int

    def __post_init__(self) -> None:
        _check_modulus(self.n)
        if not 0 <= self.q < self.n:
            raise ValueError(f"residue must satisfy 0 <= q < {self.n}, got {self.q}")

    @property
    def value(self) -> complex:
        return omega(self.n, self.q)

    def __complex__(self) -> complex:
        return self.value

    def __mul__(self, other: "CyclicValue") -> "CyclicValue":
        if self.n != other.n:
            raise ValueError("cannot multiply values with different moduli")
        return CyclicValue((self.q + other.q) % self.n, self.n)

    def conjugate(self) -> "CyclicValue":
        return CyclicValue((-self.q) % self.n, self.n)


@dataclass(frozen=True)
class SectorIndex:
    """Z_N charge sector of disorder/parafermion operators.

    Sectors m and N - m are charge conjugates of each other.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        _check_modulus(self.n)
        if not 0 <= self.m <= self.n - 1:
            raise ValueError(f"sector must satisfy 0 <= m <= {self.n - 1}, got {self.m}")

    @property
    def conjugate(self) -> "SectorIndex":
        return SectorIndex((self.n - self.m) % self.n, self.n)


@dataclass(frozen=True)
class WeightVector:
    """Couplings x_0..x_{N-1} of one edge weight.

    Invariants enforced at construction: x_0 = 1 (normalisation) and
    x_k = x_{N-k} (reality of the weight).  The full length-N list is kept,
    rather than the [N/2] free parameters, so Fourier-style sums over k and
    loops over spin differences index it directly.
    """

    n: int
    x: tuple[float, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        _check_modulus(self.n)
        if len(self.x) != self.n:
            raise InconsistentWeightsError(
                f"expected {self.n} coefficients, got {len(self.x)}"
            )
        if abs(self.x[0] - 1.0) > self.tol:
            raise InconsistentWeightsError(f"x_0 must be 1, got {self.x[0]!r}")
        for k in range(1, self.n):
            if abs(self.x[k] - self.x[self.n - k]) > self.tol:
                raise InconsistentWeightsError(
                    f"reflection symmetry violated: x_{k}={self.x[k]!r} vs "
                    f"x_{self.n - k}={self.x[self.n - k]!r}"
                )

    @classmethod
    def from_free(cls, n: int, free: Sequence[float], tol: float = DEFAULT_TOL) -> "WeightVector":
        """Build from the [N/2] free couplings x_1..x_{N//2}."""
        _check_modulus(n)
        if len(free) != n // 2:
            raise InconsistentWeightsError(
                f"expected {n // 2} free couplings for N={n}, got {len(free)}"
            )
        x = [1.0] + [0.0] * (n - 1)
        for k, val in enumerate(free, start=1):
            x[k] = float(val)
            x[n - k] = float(val)
        return cls(n, tuple(x), tol)

    @property
    def free(self) -> tuple[float, ...]:
        """The [N/2] free couplings x_1..x_{N//2}."""
        return self.x[1 : self.n // 2 + 1]


def fz_weights(n: int, alpha: float) -> WeightVector:
    """Critical couplings x_ck(alpha) for a rhombus with opening angle alpha.

        x_ck(alpha) = prod_{j=0}^{k-1} sin(pi*j/N + alpha/2N) / sin(pi*(j+1)/N - alpha/2N)

    Args:
        n: modulus of the clock model.
        alpha: rhombus opening angle in radians, in (-pi, pi) and nonzero.
            Negative values are admitted (weakly antiferromagnetic couplings
            arising from obtuse triangular embeddings).

    Returns:
        WeightVector with x_0 = 1; all couplings positive for alpha in (0, pi).
    """
    _check_modulus(n)
    if not -math.pi < alpha < math.pi or alpha == 0.0:
        raise InvalidAngleError(
            f"opening angle must lie in (-pi, pi) and be nonzero, got {alpha!r}"
        )
    x = [1.0] * n
    acc = 1.0
    for k in range(1, n):
        j = k - 1
        num = math.sin(math.pi * j / n + alpha / (2 * n))
        den = math.sin(math.pi * (j + 1) / n - alpha / (2 * n))
        if abs(den) < 1e-15:
            raise InvalidAngleError(f"singular angle: denominator sine vanishes at k={k}")
        acc *= num / den
        x[k] = acc
    return WeightVector(n, tuple(x))


def conformal_spin(n: int, m: int) -> Fraction:
    """Conformal spin p_m = m(N-m)/N of the sector-m parafermion (exact)."""
    _check_modulus(n)
    if not 0 <= m <= n - 1:
        raise ValueError(f"sector must satisfy 0 <= m <= {n - 1}, got {m}")
    return Fraction(m * (n - m), n)


def central_charge(n: int) -> Fraction:
    """Central charge c = 2(N-1)/(N+2) of the parafermionic CFT (exact)."""
    _check_modulus(n)
    return Fraction(2 * (n - 1), n + 2)


def weight_eval(w: WeightVector, q: int) -> float:
    """Edge weight W at spin difference omega^q, i.e. sum_k x_k omega^{qk}.

    The reflection symmetry x_k = x_{N-k} makes the sum real; a residual
    imaginary part above tolerance signals an inconsistent weight vector.
    """
    total = 0j
    for k in range(w.n):
        total += w.x[k] * omega(w.n, q * k)
    scale = sum(abs(v) for v in w.x)
    if abs(total.imag) > 1e-14 * max(scale, 1.0):
        raise InconsistentWeightsError(
            f"weight evaluation is not real (imag={total.imag!r}); inconsistent couplings"
        )
    return total.real


def dual_weights(w: WeightVector) -> WeightVector:
    """Kramers-Wannier dual couplings, the normalised Fourier transform.

        x^_k = sum_j x_j omega^{jk} / sum_j x_j

    The dual of the critical family obeys dual(x_c(alpha)) = x_c(pi - alpha).
    """
    s = weight_eval(w, 0)
    if abs(s) < 1e-15:
        raise SingularWeightError(f"total weight sum vanishes for N={w.n}; dual undefined")
    x = tuple(weight_eval(w, k) / s for k in range(w.n))
    return WeightVector(w.n, x, tol=max(w.tol, 1e-10))
