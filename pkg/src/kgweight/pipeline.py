"""Semi-analytic evaluation of the main graph weight and its supporting checks.

The weight is assembled from three ingredients:

* the b-integration, which leaves a piecewise linear function of the boundary
  angles (``f_closed_form``), checked against a two-dimensional Monte Carlo;
* the a-chain, whose weight is proportional to B_4(alpha), i.e. to
  Li_4(U) + c.c. (``F_laurent``);
* the remaining (z, w) integral, expanded exactly by ``series.build_G``.

Integrating over both boundary angles picks the U^0 V^0 coefficient of the
product, which ``pair_zero_mode`` extracts. Every step fixes one rational
representative: all dropped rational prefactors are set to 1 and dropped
rational polynomials to 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import mpmath
import numpy as np

from . import series as S
from .errors import DomainError, NoFitError
from .eulersums import euler_sum_tail
from .geometry import WeightEstimate, batch_generator
from .pirational import PiRational
from .pslq import pslq
from .specfun import bernoulli_poly

__all__ = [
    "FitResult",
    "B_REDUCTION_SLOPE",
    "heaviside",
    "f_closed_form",
    "b_lemma_reduced",
    "b_integrand",
    "b_integration_mc",
    "F_laurent",
    "pair_zero_mode",
    "semianalytic_parts",
    "semianalytic_weight",
    "exact_truncated_pairing",
    "lemma_UV_series",
    "lemma_UV_check",
    "rational_fit",
]

# f_closed_form = B_REDUCTION_SLOPE * (beta - H(beta - alpha))
B_REDUCTION_SLOPE = Fraction(-1, 2)


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple[Fraction, ...]
    residual: float
    max_denominator: int


def heaviside(x: float) -> int:
    """1 for x > 0, 0 for x <= 0."""
    return 1 if x > 0 else 0


def _check_angles(alpha: float, beta: float) -> None:
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise DomainError("angles must lie in (0, 1)")
    if alpha == beta:
        raise DomainError("alpha and beta must differ")


def f_closed_form(alpha: float, beta: float) -> float:
    """Result of integrating the b-vertex out: (1 - beta)/2 above the diagonal, -beta/2 below."""
    _check_angles(alpha, beta)
    return (1 - beta) / 2 if beta > alpha else -beta / 2


def b_lemma_reduced(alpha: float, beta: float) -> float:
    """beta - H(beta - alpha); f_closed_form is -1/2 times this."""
    _check_angles(alpha, beta)
    val = beta - heaviside(beta - alpha)
    if abs(f_closed_form(alpha, beta) - float(B_REDUCTION_SLOPE) * val) > 1e-15:
        raise AssertionError("b-integration closed form is not proportional to beta - H(beta - alpha)")
    return val


def b_integrand(r, phi, alpha: float, beta: float):
    """Integrand over b = r e^{2 pi i phi} after the angular form of (w, b) is used.

    -(1/(pi r)) (1 + 2 Re Li_0(b conj U)) (Im Li_0(b conj V) - Im Li_0(b)), vectorized.
    """
    b = r * np.exp(2j * np.pi * phi)
    U = cmath.exp(2j * math.pi * alpha)
    V = cmath.exp(2j * math.pi * beta)

    def li0(x):
        return x / (1 - x)

    first = 1 + 2 * li0(b * np.conj(U)).real
    second = li0(b * np.conj(V)).imag - li0(b).imag
    return -first * second / (np.pi * r)


def b_integration_mc(alpha: float, beta: float, samples: int, seed: int, batches: int = 64) -> WeightEstimate:
    """Monte Carlo of b_integrand over (r, phi) uniform on the unit square."""
    _check_angles(alpha, beta)
    sums = []
    sizes = [samples // batches + (1 if k < samples % batches else 0) for k in range(batches)]
    for k, n in enumerate(sizes):
        rng = batch_generator(seed, k)
        r = rng.random(n)
        phi = rng.random(n)
        r = np.where(r == 0.0, np.finfo(float).tiny, r)
        sums.append(math.fsum(b_integrand(r, phi, alpha, beta).tolist()))
    means = np.array(sums) / np.array(sizes)
    return WeightEstimate(
        math.fsum(sums) / samples,
        float(np.std(means, ddof=1) / math.sqrt(batches)),
        samples,
        seed,
    )


def F_laurent(M: int) -> dict[int, PiRational]:
    """U-Laurent coefficients of (Li_4(U) + c.c.) / pi^4 up to |power| M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    out = {}
    for m in range(1, M + 1):
        c = PiRational(Fraction(1, m**4), -4)
        out[m] = c
        out[-m] = c
    return out


def pair_zero_mode(F: Mapping[int, object], G0: Mapping[int, object]) -> PiRational:
    """Constant term of F(U) G0(U): sum over m of F[m] G0[-m]."""
    total = PiRational(Fraction(0))
    for m, c in F.items():
        d = G0.get(-m)
        if d is None:
            continue
        total = total + PiRational.coerce(c) * PiRational.coerce(d)
    return total


def exact_truncated_pairing(N: int) -> PiRational:
    """Zero mode of F_laurent(N) against the V^0 slice of build_G(N), exactly."""
    g0 = S.v_zero_slice(S.set_cutoff_one(S.build_G(N)))
    return pair_zero_mode(F_laurent(N), g0)


def _pairing_tail(N: int) -> tuple[float, float]:
    """Tail beyond N of the truncated pairing times pi^6.

    Grouping the paired triple sum by n = j + k, the n-th term is
    -2 H_{n-1,4}/n^2 - H_{n-1,3}/n^3 - H_{n-1,2}/n^4 - H_{n-1,1}/n^5
    (partial fractions in k), so the tail is a combination of Euler sum tails.
    """
    parts = [(-2, 4, 2), (-1, 3, 3), (-1, 2, 4), (-1, 1, 5)]
    vals, bound = [], 0.0
    for c, a, b in parts:
        t = euler_sum_tail(a, b, 1, N)
        vals.append(c * t.value)
        bound += abs(c) * t.tail_bound
    return math.fsum(vals), bound


@dataclass(frozen=True)
class SemiAnalyticParts:
    exact: PiRational
    tail: float
    tail_bound: float
    value: float


def semianalytic_parts(N: int) -> SemiAnalyticParts:
    if N < 10:
        raise ValueError("N must be >= 10")
    exact = exact_truncated_pairing(N)
    if exact.pi_power not in (0, -6):
        raise AssertionError(f"unexpected pi power {exact.pi_power}")
    tail, bound = _pairing_tail(N)
    value = math.fsum([float(exact.coeff), tail]) / math.pi**6
    return SemiAnalyticParts(exact, tail / math.pi**6, bound / math.pi**6, value)


def semianalytic_weight(N: int) -> float:
    """Representative value of the main graph weight from the exact series at order N plus tails."""
    return semianalytic_parts(N).value


@lru_cache(maxsize=16)
def lemma_UV_series(m: int, n: int, N: int) -> dict[tuple[int, int], PiRational]:
    """lambda -> 1 Laurent map of
    int dr/r int dphi (Li_m(w conj V) - (-1)^m c.c.)(Li_n(w conj U) + (-1)^n c.c.).
    """
    first = S.series_sub(
        S.polylog_series(m, "V", False, N),
        S.series_scale(S.polylog_series(m, "V", True, N), (-1) ** m),
    )
    second = S.series_add(
        S.polylog_series(n, "U", False, N),
        S.series_scale(S.polylog_series(n, "U", True, N), (-1) ** n),
    )
    return S.set_cutoff_one(S.integrate_radial(S.phi_average(first, second)))


@lru_cache(maxsize=16)
def _lemma_UV_arrays(m: int, n: int, N: int):
    cut = lemma_UV_series(m, n, N)
    keys = list(cut)
    a = np.array([k[0] for k in keys], dtype=float)
    b = np.array([k[1] for k in keys], dtype=float)
    c = np.array([float(cut[k]) for k in keys])
    return a, b, c


def _oscillatory_tail(X: complex, s: int, N: int) -> tuple[complex, float]:
    """sum_{j > N} X^j / j^s for |X| = 1, X != 1, by two rounds of summation by parts."""
    M = N + 1

    def f(j):
        return float(j) ** (-s)

    d1 = f(M + 1) - f(M)
    d2 = f(M + 2) - 2 * f(M + 1) + f(M)
    q = 1 - X
    val = X**M * f(M) / q + X ** (M + 1) * d1 / q**2 + X ** (M + 2) * d2 / q**3
    # size of the last correction; the neglected remainder is smaller
    bound = abs(d2) / abs(q) ** 3
    return val, bound


def lemma_UV_check(m: int, n: int, alpha: float, beta: float, N: int = 10**5) -> tuple[float, float]:
    """(lhs, rhs) of the Bernoulli evaluation of the (m, n) polylog pairing.

    lhs = 2/(2 pi i)^s * [series value at order N plus the oscillatory tail],
    s = m + n + 1; rhs = -(-1)^n / s! * B_s(alpha - beta + H(beta - alpha)).
    """
    if m + n < 1:
        raise ValueError("need m + n >= 1")
    _check_angles(alpha, beta)
    s = m + n + 1
    a, b, c = _lemma_UV_arrays(m, n, N)
    phase = np.exp(2j * np.pi * (a * alpha + b * beta))
    vals = c * phase
    total = complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))
    X = cmath.exp(2j * math.pi * (alpha - beta))
    T, _ = _oscillatory_tail(X, s, N)
    sgn = (-1) ** n
    total += sgn / 2 * (T + (-1) ** s * T.conjugate())
    lhs = 2 * total / (2j * math.pi) ** s
    if abs(lhs.imag) > 1e-9 * max(1.0, abs(lhs.real)):
        raise AssertionError(f"left side not real: {lhs}")
    x = alpha - beta + heaviside(beta - alpha)
    rhs = -sgn / math.factorial(s) * bernoulli_poly(s)(x)
    return lhs.real, rhs


def rational_fit(
    value: float,
    basis: Sequence[float],
    max_den: int = 10**5,
    tol: float = 1e-8,
    rel_noise: float = 1e-14,
) -> FitResult:
    """Rationals c_i with value ~ sum c_i basis_i, found by integer relation search.

    ``basis[0]`` is 1 by convention. A relation a_0 value + sum a_i basis_i = 0
    is accepted when it holds to relative accuracy ``rel_noise`` (double
    precision inputs), all c_i = -a_i/a_0 have denominators <= max_den, and
    |value - sum c_i basis_i| <= tol.
    """
    if not basis:
        raise ValueError("basis must be nonempty")
    if max_den > 10**6:
        raise ValueError("max_den must be <= 10^6")
    if len(basis) == 1:
        coeffs = (Fraction(value / basis[0]).limit_denominator(max_den),)
    else:
        rel = pslq([value, *basis], rel_noise=rel_noise, max_coeff=max(10**8, 100 * max_den))
        if rel is None or rel[0] == 0:
            raise NoFitError(f"no integer relation found for {value!r}")
        coeffs = tuple(Fraction(-c, rel[0]) for c in rel[1:])
    with mpmath.workdps(40):
        approx = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(x) for c, x in zip(coeffs, basis))
        residual = float(abs(mpmath.mpf(value) - approx))
    if any(c.denominator > max_den for c in coeffs):
        raise NoFitError(f"best relation needs denominators above {max_den}: {coeffs}")
    if residual > tol:
        raise NoFitError(f"best fit residual {residual:.3e} exceeds tolerance {tol:.1e}")
    return FitResult(coeffs, residual, max_den)
