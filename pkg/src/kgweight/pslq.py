"""Integer relation detection (PSLQ, Ferguson-Bailey) in multiprecision arithmetic."""

from __future__ import annotations

from typing import Optional, Sequence

import mpmath
from mpmath import mpf

__all__ = ["pslq"]


def _nint(v) -> int:
    return int(mpmath.nint(v))


def pslq(
    x: Sequence,
    rel_noise: float = 1e-14,
    max_coeff: int = 10**8,
    max_iter: int = 20000,
    dps: int = 50,
) -> Optional[list[int]]:
    """Small integer vector a with sum(a_i x_i) ~ 0, or None.

    A candidate is accepted when |sum a_i x_i| <= rel_noise * sum |a_i x_i|,
    i.e. when the relation holds to the relative accuracy of the inputs.
    The search stops once every relation would need a coefficient above
    ``max_coeff``.
    """
    n = len(x)
    if n < 2:
        raise ValueError("need at least two numbers")
    with mpmath.workdps(dps):
        xs = [mpf(v) for v in x]
        for i, v in enumerate(xs):
            if v == 0:
                return [1 if j == i else 0 for j in range(n)]
        gamma = mpmath.sqrt(mpf(4) / 3) * mpf("1.01")
        s = [mpmath.sqrt(mpmath.fsum(v * v for v in xs[k:])) for k in range(n)]
        s0 = s[0]
        y = [v / s0 for v in xs]
        s = [v / s0 for v in s]
        H = [[mpf(0)] * (n - 1) for _ in range(n)]
        for i in range(n):
            for j in range(min(i + 1, n - 1)):
                if i == j:
                    H[i][j] = s[j + 1] / s[j]
                else:
                    H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
        A = [[int(i == j) for j in range(n)] for i in range(n)]
        B = [[int(i == j) for j in range(n)] for i in range(n)]

        def reduce_row(i, jmax):
            for j in range(jmax, -1, -1):
                if H[j][j] == 0:
                    continue
                t = _nint(H[i][j] / H[j][j])
                if t == 0:
                    continue
                y[j] += t * y[i]
                for k in range(j + 1):
                    H[i][k] -= t * H[j][k]
                for k in range(n):
                    A[i][k] -= t * A[j][k]
                    B[k][j] += t * B[k][i]

        for i in range(1, n):
            reduce_row(i, i - 1)

        def check():
            best = None
            for j in range(n):
                col = [B[k][j] for k in range(n)]
                if not any(col):
                    continue
                r = abs(mpmath.fsum(c * v for c, v in zip(col, xs)))
                scale = mpmath.fsum(abs(c * v) for c, v in zip(col, xs))
                if r <= rel_noise * scale:
                    norm = max(abs(c) for c in col)
                    if best is None or norm < best[0]:
                        best = (norm, col)
            return best[1] if best else None

        found = check()
        if found:
            return _normalize(found)
        for _ in range(max_iter):
            m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(H[i][i]))
            y[m], y[m + 1] = y[m + 1], y[m]
            A[m], A[m + 1] = A[m + 1], A[m]
            H[m], H[m + 1] = H[m + 1], H[m]
            for k in range(n):
                B[k][m], B[k][m + 1] = B[k][m + 1], B[k][m]
            if m < n - 2:
                t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
                t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
                for i in range(m, n):
                    t3, t4 = H[i][m], H[i][m + 1]
                    H[i][m] = t1 * t3 + t2 * t4
                    H[i][m + 1] = -t2 * t3 + t1 * t4
            for i in range(m + 1, n):
                reduce_row(i, min(i - 1, m + 1))
            found = check()
            if found:
                return _normalize(found)
            if max(abs(B[i][j]) for i in range(n) for j in range(n)) > max_coeff:
                return None
            if any(H[i][i] == 0 for i in range(n - 1)):
                return None
        return None


def _normalize(rel: list[int]) -> list[int]:
    from math import gcd

    g = 0
    for c in rel:
        g = gcd(g, abs(c))
    rel = [c // g for c in rel] if g > 1 else list(rel)
    first = next(c for c in rel if c != 0)
    return [-c for c in rel] if first < 0 else rel
