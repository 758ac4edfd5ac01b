"""Exact truncated Fourier-Laurent series in w = r e^{2 pi i phi}, U and V.

A term is ``c * r^p * e^{2 pi i s phi} * U^a * V^b`` with ``c`` rational. A whole
series shares one power of pi and one power of i (0 or 1): real and imaginary
part extraction only ever multiplies by 1/2 or 1/(2i), so tracking a single
i-flag keeps every coefficient rational. Combining series whose i-flags differ
is an error, as is asking for numbers from a series that still carries an i.

Truncation: polylog expansions stop at order N; products discard r-powers
above 3N (the largest needed when three factors are multiplied).
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DivergenceError, NonRealCoefficientError, TruncationMismatchError
from .pirational import PiRational

__all__ = [
    "PiRational",
    "FourierSeries",
    "CutoffSeries",
    "polylog_series",
    "monomial",
    "series_add",
    "series_sub",
    "series_mul",
    "series_scale",
    "conj",
    "take_re",
    "take_im",
    "integrate_phi",
    "phi_average",
    "integrate_radial",
    "set_cutoff_one",
    "build_G",
    "G_PREFACTOR",
    "v_zero_slice",
    "cutoff_add",
]

Index = tuple[int, int, int, int]

# Normalization of build_G: the integrand's 1/pi * (-1/pi) * 2 times the
# rational 4 of the standard representative, applied to Im * Im * Re.
G_PREFACTOR = PiRational(Fraction(-8), -2)


@dataclass(frozen=True)
class FourierSeries:
    truncation: int
    coeffs: dict = field(default_factory=dict)  # Index -> Fraction, no zeros
    pi_power: int = 0
    imag: bool = False

    def __post_init__(self):
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if v != 0}
        object.__setattr__(self, "coeffs", clean)
        if not clean:
            object.__setattr__(self, "pi_power", 0)
            object.__setattr__(self, "imag", False)

    @property
    def terms(self) -> dict[Index, PiRational]:
        return {k: PiRational(c, self.pi_power) for k, c in self.coeffs.items()}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return series_scale(self, -1)

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return (
            self.truncation == other.truncation
            and self.coeffs == other.coeffs
            and self.pi_power == other.pi_power
            and self.imag == other.imag
        )

    def evaluate(self, r: float, phi: float, U: complex, V: complex) -> complex:
        """Numeric value (for checks against floating point references)."""
        w = cmath.exp(2j * math.pi * phi)
        total = 0j
        for (p, s, a, b), c in self.coeffs.items():
            total += float(c) * r**p * w**s * U**a * V**b
        total *= math.pi**self.pi_power
        return total * (1j if self.imag else 1)


@dataclass(frozen=True)
class CutoffSeries:
    """Sum of ``c * lambda^q * U^a * V^b`` with q >= 1, after the radial integral."""

    coeffs: dict = field(default_factory=dict)  # (q, a, b) -> Fraction
    pi_power: int = 0
    imag: bool = False

    def __post_init__(self):
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if v != 0}
        for q, _, _ in clean:
            if q < 1:
                raise DivergenceError("cutoff power must be >= 1")
        object.__setattr__(self, "coeffs", clean)
        if not clean:
            object.__setattr__(self, "pi_power", 0)
            object.__setattr__(self, "imag", False)

    @property
    def terms(self) -> dict[tuple[int, int, int], PiRational]:
        return {k: PiRational(c, self.pi_power) for k, c in self.coeffs.items()}


def _check_trunc(f: FourierSeries, g: FourierSeries) -> None:
    if f.truncation != g.truncation:
        raise TruncationMismatchError(f"truncations {f.truncation} and {g.truncation} differ")


def polylog_series(n: int, twist: Optional[str], conjugated: bool, N: int) -> FourierSeries:
    """Li_n(w X) expanded to order N, X = conj(U), conj(V) or 1 for twist 'U', 'V', None.

    With ``conjugated`` the complex conjugate series is returned.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if twist not in (None, "U", "V"):
        raise ValueError("twist must be 'U', 'V' or None")
    sgn = -1 if conjugated else 1
    coeffs = {}
    for j in range(1, N + 1):
        a = -sgn * j if twist == "U" else 0
        b = -sgn * j if twist == "V" else 0
        coeffs[(j, sgn * j, a, b)] = Fraction(1, j**n)
    return FourierSeries(N, coeffs)


def monomial(N: int, p: int = 0, s: int = 0, a: int = 0, b: int = 0, c=1, pi_power: int = 0) -> FourierSeries:
    return FourierSeries(N, {(p, s, a, b): Fraction(c)}, pi_power)


def _merge_flags(f: FourierSeries, g: FourierSeries) -> tuple[int, bool]:
    if f.is_zero():
        return g.pi_power, g.imag
    if g.is_zero():
        return f.pi_power, f.imag
    if f.pi_power != g.pi_power:
        raise ValueError(f"cannot add pi^{f.pi_power} and pi^{g.pi_power} series")
    if f.imag != g.imag:
        raise NonRealCoefficientError("cannot add a real series to an i-multiplied series")
    return f.pi_power, f.imag


def series_add(f: FourierSeries, g: FourierSeries) -> FourierSeries:
    _check_trunc(f, g)
    pi_power, imag = _merge_flags(f, g)
    out = dict(f.coeffs)
    for k, c in g.coeffs.items():
        out[k] = out.get(k, 0) + c
    return FourierSeries(f.truncation, out, pi_power, imag)


def series_scale(f: FourierSeries, c) -> FourierSeries:
    c = PiRational.coerce(c)
    if c.is_zero():
        return FourierSeries(f.truncation)
    out = {k: v * c.coeff for k, v in f.coeffs.items()}
    return FourierSeries(f.truncation, out, f.pi_power + c.pi_power, f.imag)


def series_sub(f: FourierSeries, g: FourierSeries) -> FourierSeries:
    return series_add(f, series_scale(g, -1))


def _product_flags(f: FourierSeries, g: FourierSeries) -> tuple[int, bool, int]:
    """(pi_power, imag, sign) of a product; i * i contributes the sign -1."""
    both = f.imag and g.imag
    return f.pi_power + g.pi_power, f.imag != g.imag, -1 if both else 1


def series_mul(f: FourierSeries, g: FourierSeries) -> FourierSeries:
    """Exact product, keeping r-powers up to 3N."""
    _check_trunc(f, g)
    pmax = 3 * f.truncation
    pi_power, imag, sign = _product_flags(f, g)
    out: dict[Index, Fraction] = defaultdict(Fraction)
    for (p1, s1, a1, b1), c1 in f.coeffs.items():
        for (p2, s2, a2, b2), c2 in g.coeffs.items():
            p = p1 + p2
            if p <= pmax:
                out[(p, s1 + s2, a1 + a2, b1 + b2)] += c1 * c2
    if sign < 0:
        out = {k: -v for k, v in out.items()}
    return FourierSeries(f.truncation, out, pi_power, imag)


def conj(f: FourierSeries) -> FourierSeries:
    """Complex conjugate: negate s, a, b; an i-flag turns into a sign change."""
    sgn = -1 if f.imag else 1
    out = {(p, -s, -a, -b): sgn * c for (p, s, a, b), c in f.coeffs.items()}
    return FourierSeries(f.truncation, out, f.pi_power, f.imag)


def take_re(f: FourierSeries) -> FourierSeries:
    """(f + conj f) / 2."""
    return series_scale(series_add(f, conj(f)), Fraction(1, 2))


def take_im(f: FourierSeries) -> FourierSeries:
    """(f - conj f) / (2i) = -i/2 (f - conj f), with the i absorbed into the i-flag."""
    d = series_sub(f, conj(f))
    if d.is_zero():
        return d
    if d.imag:
        # -i/2 * i * g = g/2
        return FourierSeries(d.truncation, {k: v / 2 for k, v in d.coeffs.items()}, d.pi_power, False)
    return FourierSeries(d.truncation, {k: -v / 2 for k, v in d.coeffs.items()}, d.pi_power, True)


def integrate_phi(f: FourierSeries) -> FourierSeries:
    """Integral over phi in [0, 1]: keeps the s = 0 terms."""
    out = {k: c for k, c in f.coeffs.items() if k[1] == 0}
    return FourierSeries(f.truncation, out, f.pi_power, f.imag)


def phi_average(f: FourierSeries, g: FourierSeries) -> FourierSeries:
    """integrate_phi(series_mul(f, g)) without forming the frequency-unbalanced terms."""
    _check_trunc(f, g)
    pmax = 3 * f.truncation
    pi_power, imag, sign = _product_flags(f, g)
    by_freq: dict[int, list] = defaultdict(list)
    for (p, s, a, b), c in g.coeffs.items():
        by_freq[s].append((p, a, b, c))
    out: dict[Index, Fraction] = defaultdict(Fraction)
    for (p1, s1, a1, b1), c1 in f.coeffs.items():
        for p2, a2, b2, c2 in by_freq.get(-s1, ()):
            p = p1 + p2
            if p <= pmax:
                out[(p, 0, a1 + a2, b1 + b2)] += c1 * c2
    if sign < 0:
        out = {k: -v for k, v in out.items()}
    return FourierSeries(f.truncation, out, pi_power, imag)


def integrate_radial(f: FourierSeries) -> CutoffSeries:
    """Integral of dr/r over [0, lambda]: r^p -> lambda^p / p."""
    out = {}
    for (p, s, a, b), c in f.coeffs.items():
        if s != 0:
            raise ValueError("integrate_radial needs a phi-free series; apply integrate_phi first")
        if p == 0:
            raise DivergenceError(f"r^0 term at U^{a} V^{b} makes the radial integral diverge")
        out[(p, a, b)] = c / p
    return CutoffSeries(out, f.pi_power, f.imag)


def cutoff_add(f: CutoffSeries, g: CutoffSeries) -> CutoffSeries:
    if f.coeffs and g.coeffs and (f.pi_power != g.pi_power or f.imag != g.imag):
        raise ValueError("incompatible cutoff series")
    out = dict(f.coeffs)
    for k, c in g.coeffs.items():
        out[k] = out.get(k, 0) + c
    ref = f if f.coeffs else g
    return CutoffSeries(out, ref.pi_power, ref.imag)


def set_cutoff_one(f: CutoffSeries) -> dict[tuple[int, int], PiRational]:
    """Sum over lambda-powers at lambda = 1, per (U-power, V-power)."""
    if f.imag:
        raise NonRealCoefficientError("series still carries a factor of i")
    acc: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for (_, a, b), c in f.coeffs.items():
        acc[(a, b)] += c
    return {k: PiRational(c, f.pi_power) for k, c in acc.items() if c != 0}


def build_G(N: int) -> CutoffSeries:
    """The phi- and r-integrated triple product of the second boundary factor.

    Factors, each expanded to order N:
      A = Im Li_1(w conj V) - Im Li_1(w)
      B = Im Li_0(w conj V) - Im Li_0(w)
      C = Re Li_0(w conj U)
    and the result is G_PREFACTOR * int dr/r int dphi A B C.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    A = take_im(polylog_series(1, "V", False, N)) - take_im(polylog_series(1, None, False, N))
    B = take_im(polylog_series(0, "V", False, N)) - take_im(polylog_series(0, None, False, N))
    C = take_re(polylog_series(0, "U", False, N))
    integrand = series_scale(phi_average(series_mul(A, B), C), G_PREFACTOR)
    return integrate_radial(integrand)


def v_zero_slice(cut: dict[tuple[int, int], PiRational]) -> dict[int, PiRational]:
    """U-Laurent coefficients of the V^0 part of a lambda = 1 map."""
    return {a: c for (a, b), c in cut.items() if b == 0}
