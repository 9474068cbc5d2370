"""Reference computations that share no code path with the package."""

from __future__ import annotations

import cmath

import numpy as np
from scipy.integrate import quad
from scipy.special import lambertw


def delta_shell_poles_lambertw(lam: float, a: float, n_max: int) -> list[complex]:
    """Exact delta-shell poles from 2ik + lam (e^{2ika} - 1) = 0.

    With w = lam a - 2ika the equation becomes w e^w = lam a e^{lam a}, so
    k = (lam a - W_j(lam a e^{lam a})) / (2ia).  Branch 0 returns the
    spurious k = 0; branches -1, -2, ... give the fourth-quadrant poles.
    Overflows for lam a beyond about 700.
    """
    z = lam * a * np.exp(lam * a)
    out = []
    for j in range(1, 3 * n_max + 4):
        for branch in (j, -j):
            k = complex((lam * a - lambertw(z, branch)) / (2j * a))
            if k.real > 0 and k.imag < 0:
                out.append(k)
    out = sorted(set(np.round(out, 14)), key=lambda k: k.real)
    return [complex(k) for k in out[:n_max]]


def barrier_denominator(k: complex, v0: float, length: float) -> float:
    """Relative size of the transmission-amplitude denominator.

    Poles of the rectangular-barrier S matrix are the zeros of
    (k + q)^2 e^{-iqL} - (k - q)^2 e^{iqL}, q^2 = k^2 - v0.
    """
    q = cmath.sqrt(k * k - v0)
    t1 = (k + q) ** 2 * cmath.exp(-1j * q * length)
    t2 = (k - q) ** 2 * cmath.exp(1j * q * length)
    return abs(t1 - t2) / max(abs(t1), abs(t2))


def complex_quad(f, lo: float, hi: float, **kw) -> complex:
    re = quad(lambda x: f(x).real, lo, hi, limit=400, epsabs=1e-15, epsrel=1e-12, **kw)[0]
    im = quad(lambda x: f(x).imag, lo, hi, limit=400, epsabs=1e-15, epsrel=1e-12, **kw)[0]
    return complex(re, im)


def _damped_integral(g, start: float, growth: float, wavenumber: float, eps: float) -> complex:
    """int_start^inf e^{-eps r^2} g(r) dr for |g| <~ e^{growth r}, by composite Gauss-Legendre."""
    r_stop = (growth + np.sqrt(growth**2 + 4 * eps * 45.0)) / (2 * eps) + 10.0
    r_stop = max(r_stop, start + 10.0)
    panel = min(0.5, np.pi / max(wavenumber, 1.0) / 2)
    n_panels = int(np.ceil((r_stop - start) / panel))
    t, w = np.polynomial.legendre.leggauss(20)
    edges = np.linspace(start, r_stop, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    r = (mid[:, None] + half[:, None] * t).ravel()
    wt = (half[:, None] * w).ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        return complex(np.sum(wt * np.exp(-eps * r * r) * g(r)))


def richardson_zero(eps_values, values) -> complex:
    """Extrapolate values(eps) to eps = 0 with the interpolating polynomial."""
    eps_values = np.asarray(eps_values, dtype=float)
    values = np.asarray(values, dtype=complex)
    re = np.polyfit(eps_values, values.real, len(eps_values) - 1)[-1]
    im = np.polyfit(eps_values, values.imag, len(eps_values) - 1)[-1]
    return complex(re, im)


# Large enough that exp(beta^2/eps) stays modest for beta < 0.05, small
# enough that a cubic in eps extrapolates to ~1e-10.
EPS_SEQUENCE = (8e-3, 4e-3, 2e-3, 1e-3)


def eps_tail(k: complex, a: float, m: int, eps_values=EPS_SEQUENCE) -> complex:
    """lim_{eps->0} int_a^inf e^{-eps r^2} r^m e^{2ikr} dr by an eps sequence."""
    k = complex(k)
    growth = 2 * max(-k.imag, 0.0)
    vals = [_damped_integral(lambda r: r**m * np.exp(2j * k * r), a, growth, 2 * abs(k.real), e)
            for e in eps_values]
    return richardson_zero(eps_values, vals)


def eps_exterior_moment(state_fn, k: complex, edge: float, sign: int, m: int, eps_values=EPS_SEQUENCE) -> complex:
    """Regularized int of x^m u(x)^2 over the exterior beyond ``edge`` in direction ``sign``."""
    k = complex(k)
    growth = 2 * max(-k.imag, 0.0)

    def g(y):
        x = edge + sign * y
        return x**m * state_fn(x) ** 2

    vals = []
    for e in eps_values:
        # Gaussian centred on the edge; the eps -> 0 limit does not depend on the centre
        vals.append(_damped_integral(g, 0.0, growth, 2 * abs(k.real), e))
    return richardson_zero(eps_values, vals)
