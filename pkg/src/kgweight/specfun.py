"""Polylogarithms, Bernoulli polynomials, harmonic numbers and zeta values.

Accuracy targets (module constants, pinned by the tests):

* ``POLYLOG_REL_ACCURACY``: relative error of ``polylog(n, x)`` for n >= 2
  on the closed unit disk.
* ``ZETA_REL_ACCURACY``: relative error of ``zeta_value``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .pirational import PiRational

__all__ = [
    "POLYLOG_REL_ACCURACY",
    "ZETA_REL_ACCURACY",
    "UNIT_DISK_TOLERANCE",
    "Polynomial",
    "bernoulli_poly",
    "bernoulli_number",
    "polylog",
    "polylog_on_circle",
    "harmonic_number",
    "zeta_value",
    "zeta_even_exact",
]

POLYLOG_REL_ACCURACY = 1e-13
ZETA_REL_ACCURACY = 1e-14
# |x| may exceed 1 by this much (rounding of e^{2 pi i y}) and still count as on the disk.
UNIT_DISK_TOLERANCE = 1e-12

# Below this modulus the defining series converges fast enough on its own.
_DIRECT_SERIES_RADIUS = 0.5


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with exact rational coefficients; ``coefficients[k]`` multiplies x**k."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0 if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else float(c))
        return acc

    def derivative(self) -> Polynomial:
        return Polynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def antiderivative(self) -> Polynomial:
        return Polynomial((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coefficients)))

    def integral01(self) -> Fraction:
        return sum((c / (k + 1) for k, c in enumerate(self.coefficients)), Fraction(0))

    def scale(self, c) -> Polynomial:
        return Polynomial(tuple(Fraction(c) * a for a in self.coefficients))

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coefficients]})"


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> Polynomial:
    """B_n(x) from B_n' = n B_{n-1} and a vanishing mean on [0, 1] for n >= 1."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return Polynomial((Fraction(1),))
    p = bernoulli_poly(n - 1).antiderivative().scale(n)
    shift = p.integral01()
    coeffs = list(p.coefficients) or [Fraction(0)]
    coeffs[0] -= shift
    return Polynomial(tuple(coeffs))


def bernoulli_number(n: int) -> Fraction:
    """B_n = B_n(0), so B_1 = -1/2."""
    return bernoulli_poly(n)(Fraction(0))


@lru_cache(maxsize=None)
def _bernoulli_float(n: int) -> float:
    return float(bernoulli_number(n))


def zeta_even_exact(n: int) -> PiRational:
    """zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!) as an exact multiple of pi^{2m}."""
    if n < 2 or n % 2:
        raise DomainError("zeta_even_exact needs an even n >= 2")
    m = n // 2
    coeff = (-1) ** (m + 1) * bernoulli_number(n) * Fraction(2**n, 2 * math.factorial(n))
    return PiRational(coeff, n)


@lru_cache(maxsize=None)
def zeta_value(n: int) -> float:
    """Riemann zeta at an integer n >= 2."""
    if n < 2:
        raise DomainError("zeta_value needs n >= 2")
    if n % 2 == 0:
        return float(zeta_even_exact(n))
    # Euler-Maclaurin with cutoff M: the remainder after K correction terms is
    # far below double precision for M = 12, K = 12.
    M, K = 12, 12
    terms = [j ** (-n) for j in range(1, M)]
    terms.append(M ** (1 - n) / (n - 1))
    terms.append(0.5 * M ** (-n))
    rising = n  # n (n+1) ... (n+2k-2)
    for k in range(1, K + 1):
        terms.append(_bernoulli_float(2 * k) / math.factorial(2 * k) * rising * M ** (-n - 2 * k + 1))
        rising *= (n + 2 * k - 1) * (n + 2 * k)
    return math.fsum(terms)


def _zeta_any(k: int) -> float:
    """zeta at any integer k != 1, using zeta(-m) = (-1)^m B_{m+1}/(m+1)."""
    if k >= 2:
        return zeta_value(k)
    m = -k
    return (-1) ** m * _bernoulli_float(m + 1) / (m + 1)


def _polylog_log_expansion(n: int, mu: complex) -> complex:
    """Li_n(e^mu) for n >= 2 and |mu| < 2 pi.

    Uses the expansion of Li_n around x = 1 in powers of mu = log x; the
    coefficients are zeta values at n - k, with the k = n - 1 term replaced by
    the logarithmic piece.
    """
    terms: list[complex] = []
    power = 1.0 + 0j  # mu^k / k!
    small = 0
    for k in range(0, n + 200):
        if k == n - 1:
            t = power * (float(harmonic_number(n - 1, 1)) - cmath.log(-mu))
        else:
            t = power * _zeta_any(n - k)
        terms.append(t)
        if k > n + 2:
            small = small + 1 if abs(t) < 1e-18 else 0
            if small >= 4:
                break
        power = power * mu / (k + 1)
    re = math.fsum(t.real for t in terms)
    im = math.fsum(t.imag for t in terms)
    return complex(re, im)


def _polylog_direct(n: int, x: complex) -> complex:
    total_re, total_im = [], []
    xj = x
    j = 1
    while True:
        t = xj / j**n
        total_re.append(t.real)
        total_im.append(t.imag)
        if abs(t) < 1e-18:
            break
        j += 1
        xj *= x
    return complex(math.fsum(total_re), math.fsum(total_im))


def polylog(n: int, x) -> complex:
    """Li_n(x) for integer n >= 0 on the closed unit disk.

    n = 0 and n = 1 use the closed forms x/(1-x) and -log(1-x) (principal
    branch). For n >= 2 the defining series is summed directly when
    |x| <= 1/2; otherwise the expansion in log x is used, which converges
    geometrically on the whole remaining annulus including the circle.
    """
    if n < 0:
        raise DomainError("negative polylog order is not supported")
    x = complex(x)
    if abs(x) > 1 + UNIT_DISK_TOLERANCE:
        raise DomainError(f"|x| = {abs(x)} lies outside the closed unit disk")
    if n <= 1 and x == 1:
        raise DomainError("Li_0 and Li_1 have a singularity at x = 1")
    if n == 0:
        return x / (1 - x)
    if n == 1:
        return -cmath.log(1 - x)
    if x == 1:
        return complex(zeta_value(n))
    if x == 0:
        return 0j
    if abs(x) <= _DIRECT_SERIES_RADIUS:
        return _polylog_direct(n, x)
    return _polylog_log_expansion(n, cmath.log(x))


def polylog_on_circle(n: int, y: float) -> complex:
    """Li_n(e^{2 pi i y}) for 0 < y < 1 (y in {0, 1} allowed for n >= 2)."""
    if not 0 <= y <= 1:
        raise DomainError("y must lie in [0, 1]")
    if y in (0, 1):
        if n <= 1:
            raise DomainError("Li_0 and Li_1 have a singularity at y = 0")
        return complex(zeta_value(n))
    if n <= 1:
        return polylog(n, cmath.exp(2j * math.pi * y))
    # Work with mu = 2 pi i y' where y' is y reduced to (-1/2, 1/2], so |mu| <= pi.
    yr = y - 1 if y > 0.5 else y
    return _polylog_log_expansion(n, 2j * math.pi * yr)


def harmonic_number(n: int, r: int) -> Fraction:
    """H_{n,r} = sum_{j=1}^n 1/j^r, exactly."""
    if n < 0 or r < 1:
        raise DomainError("need n >= 0 and r >= 1")
    return _harmonic_cached(n, r)


@lru_cache(maxsize=4096)
def _harmonic_cached(n: int, r: int) -> Fraction:
    total = Fraction(0)
    for j in range(1, n + 1):
        total += Fraction(1, j**r)
    return total
