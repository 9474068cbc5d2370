"""Closed-form integrals of polynomial-weighted complex exponentials.

Every interior function handled by the package is a finite sum of complex
exponentials, so all interior integrals reduce to

    M_m(c, L) = int_0^L x^m exp(c x) dx,   m = 0, 1, 2, ...

evaluated here without quadrature.
"""

from __future__ import annotations

import numpy as np

# |c L| below which the power series is used instead of the recurrence.
_SERIES_CUTOFF = 2.0
_SERIES_TERMS = 60


def exp_moment(c: complex, length: float, m: int) -> complex:
    """Return ``int_0^length x**m * exp(c*x) dx`` for complex ``c``.

    Uses the power series in ``c*length`` when it is small (so ``c = 0`` is
    handled exactly) and the upward integration-by-parts recurrence
    otherwise.
    """
    if m < 0:
        raise ValueError("moment order must be non-negative")
    c = complex(c)
    z = c * length
    if abs(z) <= _SERIES_CUTOFF:
        total = 0.0 + 0.0j
        term = 1.0 + 0.0j
        for j in range(_SERIES_TERMS):
            total += term / (m + j + 1)
            term *= z / (j + 1)
        return length ** (m + 1) * total
    e = np.exp(z)
    value = (e - 1.0) / c
    for order in range(1, m + 1):
        value = (length**order * e - order * value) / c
    return complex(value)


def exp_sum_moment(amps_a, rates_a, amps_b, rates_b, length: float, m: int) -> complex:
    """Integrate ``x**m * f(x) * g(x)`` over ``[0, length]``.

    ``f`` and ``g`` are given as sums ``sum_j amps[j] * exp(rates[j] * x)``.
    """
    total = 0.0 + 0.0j
    for ca, ra in zip(amps_a, rates_a):
        for cb, rb in zip(amps_b, rates_b):
            total += ca * cb * exp_moment(ra + rb, length, m)
    return total

