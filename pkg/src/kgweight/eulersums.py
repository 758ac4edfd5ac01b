"""Truncated Euler sums with Euler-Maclaurin tails, and their closed forms.

All sums are ``sum_{n >= 1} H_{n - offset, a} / n^b``. The partial sum up to a
cutoff N is accumulated with compensated summation; the remainder is estimated
by the Euler-Maclaurin formula applied to a smooth interpolant of the summand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import DomainError, UnsupportedParametersError
from .specfun import _bernoulli_float, harmonic_number, zeta_value

__all__ = [
    "SumResult",
    "euler_sum",
    "euler_sum_tail",
    "euler_sum_closed",
    "jjpn_sum",
    "final_constant",
    "EM_TERMS",
]

# Number of Bernoulli correction terms in every Euler-Maclaurin tail.
EM_TERMS = 3
_EPS = 2.0**-52
_EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SumResult:
    """Value of an infinite sum (tail included), its cutoff and an error bound."""

    value: float
    truncation: int
    tail_bound: float


def _harmonic_prefix(N: int, a: int) -> np.ndarray:
    """[H_{0,a}, H_{1,a}, ..., H_{N,a}] as compensated (Kahan-Babuska) prefix sums."""
    out = np.empty(N + 1)
    out[0] = 0.0
    total = comp = 0.0
    for j in range(1, N + 1):
        x = 1.0 / j**a
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out[j] = total + comp
    return out


def _exact_rounded_sum(values: np.ndarray) -> float:
    return math.fsum(values.tolist())


def _em_tail(
    integral: float,
    integral_err: float,
    deriv: Callable[[int], float],
    N: int,
    K: int = EM_TERMS,
) -> tuple[float, float]:
    """sum_{n > N} f(n) from the Euler-Maclaurin formula at the left end N.

    ``deriv(k)`` returns f^{(k)}(N). The remainder after K correction terms is
    bounded by 2 zeta(2K) / (2 pi)^{2K} * |f^{(2K-1)}(N)|, valid when
    f^{(2K)} keeps one sign on [N, inf), which holds for every summand here
    (all are eventually completely monotone up to sign).
    """
    parts = [integral, -0.5 * deriv(0)]
    for k in range(1, K + 1):
        parts.append(-_bernoulli_float(2 * k) / math.factorial(2 * k) * deriv(2 * k - 1))
    value = math.fsum(parts)
    remainder = 2 * zeta_value(2 * K) / (2 * math.pi) ** (2 * K) * abs(deriv(2 * K - 1))
    bound = remainder + integral_err + 8 * _EPS * sum(abs(p) for p in parts)
    return value, bound


def _power_deriv(b: int, k: int, x: float) -> float:
    """k-th derivative of x^{-b}."""
    c = 1.0
    for i in range(k):
        c *= -(b + i)
    return c * x ** (-b - k)


def _harmonic_interp_deriv(a: int, offset: int, k: int, x: float) -> float:
    """k-th derivative of the smooth interpolant of n -> H_{n - offset, a}.

    For a >= 2 the interpolant is zeta(a) - zeta(a, x + 1 - offset); for a = 1
    it is digamma(x + 1 - offset) + euler_gamma.
    """
    q = x + 1 - offset
    if a == 1:
        if k == 0:
            return float(special.digamma(q)) + _EULER_GAMMA
        return float(special.polygamma(k, q))
    if k == 0:
        return zeta_value(a) - float(special.zeta(a, q))
    # d^k/dx^k zeta(a, x) = (-1)^k a (a+1) ... (a+k-1) zeta(a+k, x)
    rising = 1.0
    for i in range(k):
        rising *= a + i
    return (-1) ** (k + 1) * rising * float(special.zeta(a + k, q))


def _summand_deriv(a: int, b: int, offset: int, k: int, x: float) -> float:
    """k-th derivative of f(x) = H(x - offset, a) / x^b by the Leibniz rule."""
    return math.fsum(
        math.comb(k, i) * _harmonic_interp_deriv(a, offset, i, x) * _power_deriv(b, k - i, x)
        for i in range(k + 1)
    )


def _tail_integral(a: int, b: int, offset: int, N: int) -> tuple[float, float]:
    """Integral of f over [N, inf) with the substitution x = N / t."""

    def g(t: float) -> float:
        if t == 0.0:
            return 0.0
        x = N / t
        return _summand_deriv(a, b, offset, 0, x) * N / (t * t)

    val, err = integrate.quad(g, 0.0, 1.0, epsabs=0.0, epsrel=2e-14, limit=400)
    return val, err


def _check_params(a: int, b: int, offset: int) -> None:
    if a < 1:
        raise DomainError("a must be >= 1")
    if b < 2:
        raise DomainError("b must be >= 2 (the sum diverges otherwise)")
    if offset not in (0, 1):
        raise DomainError("offset must be 0 or 1")


def euler_sum_tail(a: int, b: int, offset: int, N: int) -> SumResult:
    """sum_{n > N} H_{n - offset, a} / n^b by Euler-Maclaurin alone."""
    _check_params(a, b, offset)
    if N < 10:
        raise DomainError("N must be >= 10")
    integral, ierr = _tail_integral(a, b, offset, N)
    value, bound = _em_tail(integral, ierr, lambda k: _summand_deriv(a, b, offset, k, float(N)), N)
    return SumResult(value, N, bound)


def euler_sum(a: int, b: int, offset: int, N: int) -> SumResult:
    """sum_{n >= 1} H_{n - offset, a} / n^b: compensated partial sum to N plus tail."""
    _check_params(a, b, offset)
    if N < 10:
        raise DomainError("N must be >= 10")
    partial = partial_euler_sum(a, b, offset, N)
    tail = euler_sum_tail(a, b, offset, N)
    rounding = 4 * _EPS * abs(partial)
    return SumResult(partial + tail.value, N, tail.tail_bound + rounding)


def partial_euler_sum(a: int, b: int, offset: int, N: int) -> float:
    """The compensated partial sum alone (no tail)."""
    _check_params(a, b, offset)
    H = _harmonic_prefix(N, a)
    n = np.arange(1, N + 1, dtype=float)
    return _exact_rounded_sum(H[1 - offset : N + 1 - offset] / n**b)


def euler_sum_closed(a: int, b: int, offset: int) -> float:
    """Closed forms of the Euler sums for the supported parameter families.

    Supported: (4, 2, 0), (4, 2, 1), (r, r, 0) and (r, r, 1) for r >= 2,
    (1, m, 0) for m >= 2.
    """
    z = zeta_value
    if (a, b, offset) == (4, 2, 0):
        return math.fsum([25 / 3 * z(6), -3 * z(2) * z(4), -z(3) ** 2])
    if (a, b, offset) == (4, 2, 1):
        return math.fsum([22 / 3 * z(6), -3 * z(2) * z(4), -z(3) ** 2])
    if a == b and a >= 2 and offset in (0, 1):
        # offset 0 counts the diagonal n = j, offset 1 excludes it.
        sign = 1 if offset == 0 else -1
        return 0.5 * math.fsum([z(a) ** 2, sign * z(2 * a)])
    if a == 1 and b >= 2 and offset == 0:
        m = b
        return 0.5 * math.fsum([(m + 2) * z(m + 1)] + [-z(m - n) * z(n + 1) for n in range(1, m - 1)])
    raise UnsupportedParametersError(f"no closed form for (a, b, offset) = ({a}, {b}, {offset})")


def jjpn_sum(n: int, variant: str, N: int) -> SumResult:
    """sum_{j >= 1} n / (j (n + j))  (plus)  or  sum_{j >= 1, j != n} n / (j (n - j))  (minus).

    The limits are H_{n,1} and H_{n,1} - 2/n. The tail uses the exact
    antiderivative log((N + n) / N) (resp. log((N - n) / N)).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if variant not in ("plus", "minus"):
        raise DomainError("variant must be 'plus' or 'minus'")
    if variant == "minus" and N <= n:
        raise DomainError("minus variant needs N > n")
    j = np.arange(1, N + 1, dtype=float)
    if variant == "plus":
        terms = n / (j * (n + j))
    else:
        j = j[j != n]
        terms = n / (j * (n - j))
    partial = _exact_rounded_sum(terms)
    # summand as 1/x - 1/(x + shift); shift = n (plus) or -n (minus)
    shift = n if variant == "plus" else -n

    def deriv(k: int) -> float:
        x = float(N)
        c = (-1) ** k * math.factorial(k)
        return c * (x ** (-k - 1) - (x + shift) ** (-k - 1))

    integral = math.log1p(shift / N)
    tail, bound = _em_tail(integral, 0.0, deriv, N)
    return SumResult(partial + tail, N, bound + 4 * _EPS * abs(partial))


def final_constant() -> float:
    """-(zeta(6) + zeta(2,4)) / pi^6, the semi-analytic target."""
    return -math.fsum([zeta_value(6), euler_sum_closed(4, 2, 1)]) / math.pi**6


def euler_sum_exact_partial(a: int, b: int, offset: int, N: int):
    """Exact rational partial sum; used as a small-N oracle."""
    from fractions import Fraction

    return sum((harmonic_number(n - offset, a) / Fraction(n) ** b for n in range(1, N + 1)), Fraction(0))
