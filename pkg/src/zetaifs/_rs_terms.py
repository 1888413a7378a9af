"""Remainder terms of the Riemann-Siegel formula.

Z(t) = 2 sum_{k<=N} k^-1/2 cos(theta(t) - t log k)
       + (-1)^(N-1) tau^-1/2 sum_j C_j(p) tau^-j + error

with tau = sqrt(t / 2pi), N = floor(tau), p = tau - N. Every C_j is a fixed
linear combination of derivatives of

    Psi(p) = cos(2pi (p^2 - p - 1/16)) / cos(2pi p),

    C_j = sum_k g[j, k] Psi^(3j-4k)(p) / (2pi)^(2j-2k).

The g[j, k] are generated exactly below; each C_j is then expanded as a
polynomial in x = p - 1/2 at high precision and stored as float64. The
polynomials are well conditioned on |x| <= 1/2 (sum of |coefficient| * 2^-i
stays within a factor ~50 of max |C_j|), so double precision evaluation
loses nothing that matters next to the main sum.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

N_TERMS = 16  # C_0 .. C_15
POLY_DEGREE = 64
_SERIES_DPS = 110

# The recurrence pins down g[j, k] only up to multiplication by a power
# series K(L) = 1 + k1 L + k2 L^2 + ... in the operator L that shifts
# (j, k) -> (j + 4, k + 3). The classical expansion has K = 1 + L^2/2048 +
# 5 L^3/8192 + O(L^4); the L^4 coefficient first touches C_16, which is
# why the expansion stops at C_15.
_NORMALISATION = {0: Fraction(1), 2: Fraction(1, 2048), 3: Fraction(5, 8192)}


@lru_cache(maxsize=None)
def _raw_coefficients(n_terms: int) -> dict:
    g = {(0, 0): Fraction(1)}
    for j in range(1, n_terms):
        for k in range(0, 3 * j // 4 + 1):
            v = Fraction(0)
            if (j - 1, k) in g:
                v -= g[(j - 1, k)] / (8 * (3 * j - 4 * k))
            if (j - 1, k - 1) in g:
                v -= Fraction(3 * j - 4 * k + 1, 2) * g[(j - 1, k - 1)]
            g[(j, k)] = v
    return g


@lru_cache(maxsize=None)
def coefficients(n_terms: int = N_TERMS) -> dict:
    """Exact g[j, k] for j < n_terms, keyed by (j, k)."""
    if n_terms > N_TERMS:
        raise ValueError("normalisation is only known through C_%d" % (N_TERMS - 1))
    raw = _raw_coefficients(n_terms)
    g = {}
    for (j, k) in raw:
        v = Fraction(0)
        for c, kc in _NORMALISATION.items():
            key = (j - 4 * c, k - 3 * c)
            if key in raw:
                v += kc * raw[key]
        g[(j, k)] = v
    return g


def psi_taylor(order: int, ctx) -> list:
    """Taylor coefficients of Psi about p = 1/2, in powers of x = p - 1/2.

    With p = x + 1/2, Psi = -cos(2pi x^2 - 5pi/8) / cos(2pi x); both
    numerator and denominator are even power series in x, so the quotient
    comes from plain power-series division.
    """
    a = 2 * ctx.pi
    c, s = ctx.cos(5 * ctx.pi / 8), ctx.sin(5 * ctx.pi / 8)
    num = [ctx.zero] * (order + 1)
    den = [ctx.zero] * (order + 1)
    for j in range(order // 2 + 1):
        # cos(a u - 5pi/8) = cos(a u) c + sin(a u) s, with u = x^2
        if j % 2 == 0:
            num[2 * j] = -(-1) ** (j // 2) * a ** j / ctx.factorial(j) * c
        else:
            num[2 * j] = -(-1) ** (j // 2) * a ** j / ctx.factorial(j) * s
        den[2 * j] = (-1) ** j * a ** (2 * j) / ctx.factorial(2 * j)
    q = [ctx.zero] * (order + 1)
    for i in range(order + 1):
        q[i] = (num[i] - ctx.fsum(q[k] * den[i - k] for k in range(i))) / den[0]
    return q


@lru_cache(maxsize=None)
def correction_matrix() -> np.ndarray:
    """Row j holds the float64 coefficients of C_j(x), lowest degree first."""
    ctx = mpmath.MPContext()
    ctx.dps = _SERIES_DPS
    g = coefficients(N_TERMS)
    max_d = 3 * (N_TERMS - 1)
    q = psi_taylor(max_d + POLY_DEGREE + 1, ctx)
    two_pi = 2 * ctx.pi
    out = np.zeros((N_TERMS, POLY_DEGREE + 1))
    for j in range(N_TERMS):
        row = [ctx.zero] * (POLY_DEGREE + 1)
        for k in range(0, 3 * j // 4 + 1):
            gk = g[(j, k)]
            if gk == 0:
                continue
            d = 3 * j - 4 * k
            f = ctx.mpf(gk.numerator) / gk.denominator / two_pi ** (2 * j - 2 * k)
            for i in range(POLY_DEGREE + 1):
                row[i] += f * q[i + d] * ctx.ff(i + d, d)
        out[j] = [float(v) for v in row]
    return out


def remainder(x: float, inv_tau: float) -> float:
    """sum_j C_j(1/2 + x) tau^-j, using all tabulated terms."""
    powers = x ** np.arange(POLY_DEGREE + 1)
    c = correction_matrix() @ powers
    return float(np.polynomial.polynomial.polyval(inv_tau, c))
