"""Normalized resonance eigenfunctions and the identities they satisfy.

Inside the interaction region every state is a short sum of complex
exponentials ``u(x) = sum_j c_j exp(r_j x)``:

* delta shell: ``A sin(k r)``, i.e. rates ``+-ik``;
* barrier: ``A exp(iqx) + B exp(-iqx)``.

Outside, ``u`` is purely outgoing (``D exp(ikx)`` to the right,
``F exp(-ikx)`` to the left of the barrier).  Every interior integral used
by the identity checks is evaluated in closed form through
:func:`~resonance_uncertainty._integrals.exp_moment`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._integrals import exp_sum_moment
from .poles import ComplexPole, characteristic_residual, interior_wavenumber
from .potentials import DeltaShellPotential, PotentialModel, RectangularBarrier

__all__ = [
    "InvalidPole",
    "ModelMismatch",
    "GridTooCoarse",
    "ResonanceState",
    "ExpansionCoefficients",
    "QuadratureGrid",
    "build_state",
    "build_states",
    "eval_state",
    "normalization_residual",
    "overlap",
    "overlap_matrix",
    "closure_residual",
    "quadrature_grid",
    "expand",
    "reconstruct",
    "decay_width_residual",
    "time_factor",
    "continuity_residuals",
]


class InvalidPole(ValueError):
    pass


class ModelMismatch(ValueError):
    pass


class GridTooCoarse(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ResonanceState:
    """A resonance state ``u_n`` attached to its pole and potential.

    ``coefficients`` holds the region amplitudes: ``{"A", "D"}`` for the
    delta shell, ``{"F", "A", "B", "D"}`` for the barrier.
    ``interior_wavenumber`` is ``q = sqrt(k**2 - v0)`` for the barrier and
    ``None`` for the delta shell.
    """

    pole: ComplexPole
    model: PotentialModel
    coefficients: dict
    interior_wavenumber: complex | None = None

    @property
    def k(self) -> complex:
        return self.pole.k

    @property
    def index(self) -> int:
        return self.pole.index

    @property
    def energy(self) -> complex:
        return self.pole.energy

    def interior_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """Amplitudes and rates of the interior exponential sum."""
        c = self.coefficients
        if isinstance(self.model, DeltaShellPotential):
            A, k = c["A"], self.k
            return np.array([A / 2j, -A / 2j]), np.array([1j * k, -1j * k])
        q = self.interior_wavenumber
        return np.array([c["A"], c["B"]]), np.array([1j * q, -1j * q])

    def edges(self) -> list[tuple[float, int, complex]]:
        """``(position, outward_sign, u(position))`` for each outgoing edge."""
        out = []
        for x, sign in self.model.geometry.edges:
            out.append((x, sign, self._interior(np.array([x]))[0]))
        return out

    def _interior(self, x: np.ndarray) -> np.ndarray:
        amps, rates = self.interior_terms()
        return np.exp(np.multiply.outer(x, rates)) @ amps

    def _interior_derivative(self, x: np.ndarray, order: int = 1) -> np.ndarray:
        amps, rates = self.interior_terms()
        return np.exp(np.multiply.outer(x, rates)) @ (amps * rates**order)

    def __call__(self, x):
        return eval_state(self, x)

    def conjugate(self) -> "ResonanceState":
        """The time-reversed partner ``u_{-n} = conj(u_n)`` with ``k -> -conj(k)``."""
        c = {key: complex(v).conjugate() for key, v in self.coefficients.items()}
        q = self.interior_wavenumber
        if q is None:
            # conj(A sin(kx)) = -conj(A) sin(-conj(k) x)
            c["A"] = -c["A"]
        else:
            # principal q of the partner is conj(q); the exponentials trade places
            q = complex(q).conjugate()
            c["A"], c["B"] = c["B"], c["A"]
        return ResonanceState(self.pole.mirror(), self.model, c, q)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients ``C_n`` for indices ``n`` and ``C_{-n}`` for their partners."""

    indices: tuple[int, ...]
    positive: np.ndarray
    negative: np.ndarray


@dataclass(frozen=True)
class QuadratureGrid:
    """Composite Gauss-Legendre nodes and weights across the interior."""

    nodes: np.ndarray
    weights: np.ndarray


def _model_residual_check(pole: ComplexPole, model: PotentialModel, tol: float):
    res = characteristic_residual(model, pole)
    if not res < tol:
        raise InvalidPole(f"pole k={pole.k} has characteristic residual {res:.3e} >= {tol:.1e}")


def build_state(pole: ComplexPole, model: PotentialModel, residual_tol: float = 1e-10) -> ResonanceState:
    """Construct the normalized state of ``pole``.

    Delta shell: closed-form amplitudes
    ``A = [2 lam / (lam a + exp(-2ika))]**(1/2)`` and
    ``D = -A (k/lam) exp(-2ika)``.

    Barrier: the null vector of the four matching conditions at ``x = 0``
    and ``x = L`` fixes the amplitudes up to a scale, which is then set by
    the two-edge normalization rule.  The overall sign is chosen so that
    ``A`` has positive real part (positive imaginary part on a tie).

    Raises
    ------
    InvalidPole
        If the characteristic residual at ``pole`` exceeds ``residual_tol``.
    """
    _model_residual_check(pole, model, residual_tol)
    k = complex(pole.k)
    if isinstance(model, DeltaShellPotential):
        lam, a = model.lam, model.a
        e = cmath.exp(-2j * k * a)
        A = cmath.sqrt(2 * lam / (lam * a + e))
        D = -A * (k / lam) * e
        return ResonanceState(pole, model, {"A": A, "D": D})
    if isinstance(model, RectangularBarrier):
        return _build_barrier_state(pole, model)
    raise TypeError(f"unsupported model {model!r}")


def _build_barrier_state(pole: ComplexPole, model: RectangularBarrier) -> ResonanceState:
    k = complex(pole.k)
    L = model.length
    q = complex(interior_wavenumber(k, model.v0))
    th = 0.5 * q * L
    em, ep = cmath.exp(-1j * th), cmath.exp(1j * th)
    # unknowns (F, a', b', D') with A = a' e^{-i th}, B = b' e^{i th}, D = D' e^{-ikL}
    kk = abs(k)
    M = np.array(
        [
            [1, -em, -ep, 0],
            [-1j * k / kk, -1j * q * em / kk, 1j * q * ep / kk, 0],
            [0, ep, em, -1],
            [0, 1j * q * ep / kk, -1j * q * em / kk, -1j * k / kk],
        ],
        dtype=complex,
    )
    _, _, vh = np.linalg.svd(M)
    F, a1, b1, D1 = vh[-1].conj()
    A, B = a1 * em, b1 * ep
    D = D1 * cmath.exp(-1j * k * L)
    raw = ResonanceState(pole, model, {"F": F, "A": A, "B": B, "D": D}, q)
    scale = 1.0 / cmath.sqrt(_norm_lhs(raw))
    if (A * scale).real < 0 or ((A * scale).real == 0 and (A * scale).imag < 0):
        scale = -scale
    coeffs = {key: v * scale for key, v in raw.coefficients.items()}
    return ResonanceState(pole, model, coeffs, q)


def build_states(poles: Sequence[ComplexPole], model: PotentialModel, mirrors: bool = False) -> list[ResonanceState]:
    """Build states for ``poles``; with ``mirrors`` also their partners ``-n``."""
    states = [build_state(p, model) for p in poles]
    if mirrors:
        states = states + [s.conjugate() for s in states]
    return states


def eval_state(state: ResonanceState, x):
    """Evaluate ``u_n(x)`` piecewise; ``x`` may be an array.

    Outside the interaction region the state grows like ``exp(beta |x|)``.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    model, k, c = state.model, state.k, state.coefficients
    out = np.empty(xs.shape, dtype=complex)
    if isinstance(model, DeltaShellPotential):
        if np.any(xs < 0):
            raise ValueError("radial coordinate must be non-negative")
        inside = xs <= model.a
        out[inside] = c["A"] * np.sin(k * xs[inside])
        out[~inside] = c["D"] * np.exp(1j * k * xs[~inside])
    else:
        left, right = xs < 0, xs > model.length
        inside = ~(left | right)
        out[left] = c["F"] * np.exp(-1j * k * xs[left])
        out[inside] = state._interior(xs[inside])
        out[right] = c["D"] * np.exp(1j * k * xs[right])
    return out[0] if np.ndim(x) == 0 else out


def _interior_integral(sa: ResonanceState, sb: ResonanceState, m: int = 0, conj_b: bool = False) -> complex:
    amps_a, rates_a = sa.interior_terms()
    amps_b, rates_b = sb.interior_terms()
    if conj_b:
        amps_b, rates_b = amps_b.conj(), rates_b.conj()
    return exp_sum_moment(amps_a, rates_a, amps_b, rates_b, sa.model.range, m)


def _norm_lhs(state: ResonanceState) -> complex:
    k = state.k
    surface = sum(1j / (2 * k) * u * u for _, _, u in state.edges())
    return _interior_integral(state, state) + surface


def normalization_residual(state: ResonanceState) -> complex:
    """``int u**2 + sum_edges (i/2k) u(edge)**2 - 1``."""
    return _norm_lhs(state) - 1.0


def overlap(state_n: ResonanceState, state_m: ResonanceState) -> complex:
    """``int u_n u_m + sum_edges i/(k_n + k_m) u_n u_m``; equals ``delta_nm``.

    Raises
    ------
    ModelMismatch
        If the states belong to different potentials.
    """
    if state_n.model != state_m.model:
        raise ModelMismatch("overlap needs states of the same potential")
    ks = state_n.k + state_m.k
    surface = sum(
        1j / ks * un * um for (_, _, un), (_, _, um) in zip(state_n.edges(), state_m.edges())
    )
    return _interior_integral(state_n, state_m) + surface


def overlap_matrix(states: Sequence[ResonanceState]) -> np.ndarray:
    n = len(states)
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = overlap(states[i], states[j])
    return out


def closure_residual(states: Sequence[ResonanceState], x: float, x_prime: float) -> complex:
    """Truncated closure sum ``(1/2) sum_{+-n} u_n(x) u_n(x')``.

    ``states`` are the positive-index states; each is paired with its
    partner ``u_{-n} = conj(u_n)`` so the sum is real up to rounding.  For
    ``x != x'`` inside the interaction region the full sum vanishes.
    """
    total = 0.0 + 0.0j
    for s in states:
        un, unp = eval_state(s, x), eval_state(s, x_prime)
        total += 0.5 * (un * unp + np.conj(un) * np.conj(unp))
    return complex(total)


def quadrature_grid(model: PotentialModel, panels: int = 64, order: int = 16) -> QuadratureGrid:
    """Composite Gauss-Legendre rule over the interaction region."""
    g = model.geometry
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(g.left, g.right, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureGrid(nodes, weights)


def expand(psi_samples, states: Sequence[ResonanceState], grid: QuadratureGrid) -> ExpansionCoefficients:
    """Expansion coefficients ``C_n = int_0^a psi u_n`` by Gauss-Legendre.

    ``psi_samples`` are values of ``psi`` at ``grid.nodes``.  Coefficients
    are returned for each state and for its conjugate partner.

    Raises
    ------
    GridTooCoarse
        If the grid has fewer than 8 nodes per interior oscillation of the
        fastest state.
    """
    psi = np.asarray(psi_samples, dtype=complex)
    if psi.shape != grid.nodes.shape:
        raise ValueError("psi_samples must match the grid nodes")
    if states:
        model = states[0].model
        fastest = max(abs(_oscillation_wavenumber(s)) for s in states)
        oscillations = fastest * model.range / (2 * math.pi)
        if oscillations > 0 and grid.nodes.size / oscillations < 8:
            raise GridTooCoarse(
                f"{grid.nodes.size} nodes for {oscillations:.1f} oscillations; need >= 8 per oscillation"
            )
    pos, neg = [], []
    for s in states:
        u = eval_state(s, grid.nodes)
        pos.append(np.sum(grid.weights * psi * u))
        neg.append(np.sum(grid.weights * psi * np.conj(u)))
    return ExpansionCoefficients(tuple(s.index for s in states), np.array(pos), np.array(neg))


def _oscillation_wavenumber(state: ResonanceState) -> float:
    w = state.k if state.interior_wavenumber is None else state.interior_wavenumber
    return complex(w).real


def reconstruct(coeffs: ExpansionCoefficients, states: Sequence[ResonanceState], x) -> np.ndarray:
    """``(1/2) sum_{+-n} C_n u_n(x)`` from :func:`expand` output."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for cp, cn, s in zip(coeffs.positive, coeffs.negative, states):
        u = eval_state(s, x)
        total += 0.5 * (cp * u + cn * np.conj(u))
    return total


def decay_width_residual(state: ResonanceState) -> float:
    """Relative residual of ``Gamma = 2 alpha sum|u(edge)|**2 / int |u|**2``.

    Raises
    ------
    ValueError
        If the pole is not a resonance (``alpha, beta > 0``).
    """
    pole = state.pole
    if not (pole.alpha > 0 and pole.beta > 0):
        raise ValueError("decay width is defined only for resonance poles")
    inside = _interior_integral(state, state, conj_b=True).real
    flux = sum(abs(u) ** 2 for _, _, u in state.edges())
    gamma = 2 * pole.alpha * flux / inside
    return abs(pole.width - gamma) / pole.width


def time_factor(pole: ComplexPole, t):
    """``exp(-i E t) exp(-Gamma t / 2)``, the time dependence of ``u_n``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be non-negative")
    out = np.exp(-1j * pole.resonance_energy * t) * np.exp(-0.5 * pole.width * t)
    return complex(out) if out.ndim == 0 else out


def continuity_residuals(state: ResonanceState) -> dict[str, float]:
    """Relative mismatches of the matching and boundary conditions.

    Keys: ``value@x`` and ``derivative@x`` at each region boundary (for the
    delta shell ``derivative@a`` measures the jump minus ``lam u(a)``), plus
    ``origin`` (``u(0) = 0``) for the delta shell.
    """
    model, k, c = state.model, state.k, state.coefficients
    out = {}
    if isinstance(model, DeltaShellPotential):
        a = model.a
        ui = state._interior(np.array([a]))[0]
        di = state._interior_derivative(np.array([a]))[0]
        ue = c["D"] * cmath.exp(1j * k * a)
        de = 1j * k * ue
        out[f"value@{a:g}"] = abs(ui - ue) / max(abs(ue), abs(ui), 1e-300)
        out[f"derivative@{a:g}"] = abs((de - di) - model.lam * ui) / max(abs(de) + abs(di), model.lam * abs(ui), 1e-300)
        out["origin"] = abs(state._interior(np.array([0.0]))[0]) / max(abs(c["A"]), 1e-300)
        return out
    for x, sign in model.geometry.edges:
        ui = state._interior(np.array([x]))[0]
        di = state._interior_derivative(np.array([x]))[0]
        amp = c["D"] if sign > 0 else c["F"]
        ue = amp * cmath.exp(1j * sign * k * x)
        de = 1j * sign * k * ue
        out[f"value@{x:g}"] = abs(ui - ue) / max(abs(ue), abs(ui), 1e-300)
        out[f"derivative@{x:g}"] = abs(di - de) / max(abs(de), abs(di), 1e-300)
    return out
