"""Expectation values over resonance states under two prescriptions.

``surface_term``
    interior integral plus ``(i/2k) [u O u]`` at each outgoing edge.
``berggren``
    the Gaussian-damped (Zel'dovich) regularization of the full-space
    integral.  The damping limit is never taken numerically: the exterior
    contribution is the closed form of ``lim int e^{-eps x^2} x^m e^{2ikx}``
    returned by :func:`regularization_tail`.

Both return the complex value ``raw``; the physical expectation value is its
real part.  The two prescriptions coincide for ``H``, ``p`` and ``p**2`` and
differ for ``r`` and ``r**2`` by small corrections of relative order
``1/|k a|``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from ._integrals import exp_sum_moment
from .potentials import DeltaShellPotential, RectangularBarrier
from .states import ResonanceState

__all__ = [
    "OPERATORS",
    "PRESCRIPTIONS",
    "UnsupportedOperator",
    "UnsupportedOrder",
    "ExpectationValue",
    "RegularizationTail",
    "regularization_tail",
    "tail",
    "correction_factors",
    "interior_moment",
    "interaction_integral",
    "expval_surface",
    "expval_berggren",
    "expectation",
]

POSITION = "position"
POSITION_SQUARED = "position_squared"
MOMENTUM = "momentum"
MOMENTUM_SQUARED = "momentum_squared"
HAMILTONIAN = "hamiltonian"
OPERATORS = (POSITION, POSITION_SQUARED, MOMENTUM, MOMENTUM_SQUARED, HAMILTONIAN)

SURFACE = "surface_term"
BERGGREN = "berggren"
PRESCRIPTIONS = (SURFACE, BERGGREN)


class UnsupportedOperator(ValueError):
    pass


class UnsupportedOrder(ValueError):
    pass


@dataclass(frozen=True)
class ExpectationValue:
    operator: str
    prescription: str
    raw: complex

    @property
    def physical(self) -> float:
        return self.raw.real


@dataclass(frozen=True)
class RegularizationTail:
    """Regularized exterior integral of order ``m`` at edge ``a``.

    ``value`` is ``lim_{eps->0} int_a^inf e^{-eps r^2} r^m e^{2ikr} dr``;
    ``correction`` is the bracketed factor relative to the surface term,
    ``1`` for ``m = 0``, ``1 + i/(2ka)`` for ``m = 1`` and
    ``1 + i/(ka) - 1/(2 (ka)^2)`` for ``m = 2``.
    """

    order: int
    value: complex
    correction: complex


def _tail_factor(k: complex, b: float, m: int) -> complex:
    """``regularization_tail(k, b, m) * exp(-2ikb)``, finite at ``b = 0``."""
    if m == 0:
        return 1j / (2 * k)
    if m == 1:
        return 1j * b / (2 * k) - 1 / (4 * k**2)
    if m == 2:
        return 1j * b**2 / (2 * k) - b / (2 * k**2) - 1j / (4 * k**3)
    raise UnsupportedOrder(f"tail order must be 0, 1 or 2, got {m}")


def regularization_tail(pole, a: float, m: int) -> complex:
    """``lim_{eps->0} int_a^inf exp(-eps r^2) r^m exp(2ikr) dr`` in closed form.

    Equals ``-d^m/dz^m (exp(z a)/z)`` at ``z = 2ik``:

    * ``m = 0``: ``(i/2k) e^{2ika}``
    * ``m = 1``: ``(i/2k) a e^{2ika} [1 + i/(2ka)]``
    * ``m = 2``: ``(i/2k) a^2 e^{2ika} [1 + i/(ka) - 1/(2(ka)^2)]``

    ``pole`` may be a :class:`~resonance_uncertainty.poles.ComplexPole` or
    a complex wavenumber.
    """
    k = complex(getattr(pole, "k", pole))
    return cmath.exp(2j * k * a) * _tail_factor(k, a, m)


def correction_factors(k: complex, a: float) -> tuple[complex, complex]:
    """First- and second-moment corrections ``i/(2ka)`` and ``i/(ka) - 1/(2(ka)^2)``."""
    ka = complex(k) * a
    return 1j / (2 * ka), 1j / ka - 1 / (2 * ka**2)


def tail(pole, a: float, m: int) -> RegularizationTail:
    """:func:`regularization_tail` together with its correction factor."""
    k = complex(getattr(pole, "k", pole))
    value = regularization_tail(k, a, m)
    if m == 0:
        corr = 1.0 + 0j
    else:
        corr = 1.0 + correction_factors(k, a)[m - 1]
    return RegularizationTail(m, value, corr)


def interior_moment(state: ResonanceState, m: int) -> complex:
    """``int x^m u_n(x)^2 dx`` over the interaction region, in closed form."""
    if m not in (0, 1, 2):
        raise UnsupportedOrder(f"moment order must be 0, 1 or 2, got {m}")
    amps, rates = state.interior_terms()
    return exp_sum_moment(amps, rates, amps, rates, state.model.range, m)


def interaction_integral(state: ResonanceState) -> complex:
    """``int V u_n^2`` over the interaction region.

    For the delta shell the shell sits on the upper limit; its weight there
    is ``model.shell_weight`` (see
    :class:`~resonance_uncertainty.potentials.DeltaShellPotential`).
    """
    model = state.model
    if isinstance(model, DeltaShellPotential):
        (_, _, ua), = state.edges()
        return model.shell_weight * model.lam * ua * ua
    if isinstance(model, RectangularBarrier):
        return model.v0 * interior_moment(state, 0)
    raise TypeError(f"unsupported model {model!r}")


def _norm_lhs(state: ResonanceState) -> complex:
    k = state.k
    return interior_moment(state, 0) + sum(1j / (2 * k) * u * u for _, _, u in state.edges())


def _surface_kinetic(state: ResonanceState) -> complex:
    """``E * norm - int V u^2``.

    For the barrier this is rearranged as ``q^2 int u^2 + E * surface`` so
    that ``E - v0`` comes from the interior wavenumber instead of a
    cancelling difference (``q^2 ~ 1e-3`` against ``v0 = 10`` for wide
    barriers).
    """
    surface = sum(1j / (2 * state.k) * u * u for _, _, u in state.edges())
    if isinstance(state.model, RectangularBarrier):
        q = state.interior_wavenumber
        return q * q * interior_moment(state, 0) + state.energy * surface
    return state.energy * (interior_moment(state, 0) + surface) - interaction_integral(state)


def _momentum_direct(state: ResonanceState, m: int) -> complex:
    """``i^-m int u u^(m) + sum_edges (i/2) k^(m-1) s^m u(edge)^2`` (plus the shell)."""
    amps, rates = state.interior_terms()
    k = state.k
    inner = exp_sum_moment(amps, rates, amps * rates**m, rates, state.model.range, 0) / (1j**m)
    edges = sum(0.5j * k ** (m - 1) * sign**m * u * u for _, sign, u in state.edges())
    if m == 2 and isinstance(state.model, DeltaShellPotential):
        # u'' carries lam delta(r - a) u; its share inside the interior integral
        inner -= interaction_integral(state)
    return inner + edges


def _check_operator(operator: str):
    if operator not in OPERATORS:
        raise UnsupportedOperator(f"unsupported operator {operator!r}; expected one of {OPERATORS}")


def expval_surface(state: ResonanceState, operator: str) -> ExpectationValue:
    """Surface-term expectation value of ``operator``.

    ``hamiltonian`` gives ``E_n`` times the normalization integral, i.e.
    ``E_n``; ``momentum_squared`` uses ``p^2 = H - V``; ``momentum`` is
    integrated with the outgoing edge derivatives and vanishes.
    """
    _check_operator(operator)
    k = state.k
    if operator == HAMILTONIAN:
        raw = state.energy * _norm_lhs(state)
    elif operator == MOMENTUM_SQUARED:
        raw = _surface_kinetic(state)
    elif operator == MOMENTUM:
        raw = _momentum_direct(state, 1)
    else:
        m = 1 if operator == POSITION else 2
        raw = interior_moment(state, m) + sum(1j / (2 * k) * x**m * u * u for x, _, u in state.edges())
    return ExpectationValue(operator, SURFACE, complex(raw))


def expval_berggren(state: ResonanceState, operator: str) -> ExpectationValue:
    """Regularized (Berggren) expectation value of ``operator``.

    Position moments add the closed-form exterior tails at every edge (with
    the ``(-1)^m`` of the left half-line for the barrier).  Momentum moments
    are evaluated directly from ``i^-m int u u^(m)`` plus their tails, which
    reproduces the surface-term values for ``p`` and ``p^2``.
    """
    _check_operator(operator)
    k = state.k
    if operator == HAMILTONIAN:
        raw = _momentum_direct(state, 2) + interaction_integral(state)
    elif operator in (MOMENTUM, MOMENTUM_SQUARED):
        raw = _momentum_direct(state, 1 if operator == MOMENTUM else 2)
    else:
        m = 1 if operator == POSITION else 2
        raw = interior_moment(state, m)
        for x, sign, u in state.edges():
            raw += sign**m * u * u * _tail_factor(k, sign * x, m)
    return ExpectationValue(operator, BERGGREN, complex(raw))


def expectation(state: ResonanceState, operator: str, prescription: str = SURFACE) -> ExpectationValue:
    if prescription == SURFACE:
        return expval_surface(state, operator)
    if prescription == BERGGREN:
        return expval_berggren(state, operator)
    raise ValueError(f"unknown prescription {prescription!r}; expected one of {PRESCRIPTIONS}")
