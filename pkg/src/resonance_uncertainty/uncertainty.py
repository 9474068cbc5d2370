"""Position-momentum uncertainty products of resonance states.

The dispersion of an operator is ``sqrt(<<O^2>> - <<O>>^2)`` built from the
physical (real-part) expectation values.  Since ``<<p>> = 0`` exactly, the
product reduces to ``sqrt((<<r^2>> - <<r>>^2) * <<p^2>>)``.

For ``H`` the second moment is defined by eigenvalue substitution,
``<<H^2>> := Re(E_n)**2``, so ``Delta H = 0`` for every eigenstate.  Using
``Re(E_n**2)`` instead would make the dispersion imaginary for any state
with a nonzero width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .expectation import (
    HAMILTONIAN,
    MOMENTUM,
    MOMENTUM_SQUARED,
    POSITION,
    POSITION_SQUARED,
    PRESCRIPTIONS,
    SURFACE,
    expectation,
)
from .states import ResonanceState

__all__ = [
    "SATISFIED",
    "VIOLATED",
    "UNDEFINED",
    "HEISENBERG_BOUND",
    "ValidityFlags",
    "UncertaintyReport",
    "uncertainty_product",
    "infinite_wall_reference",
    "classify_validity",
    "hamiltonian_dispersion",
]

HEISENBERG_BOUND = 0.5
SATISFIED = "satisfied"
VIOLATED = "violated"
UNDEFINED = "undefined"


@dataclass(frozen=True)
class ValidityFlags:
    proper_pole: bool
    positive_p2: bool
    positive_var: bool

    def all(self) -> bool:
        return self.proper_pole and self.positive_p2 and self.positive_var


@dataclass(frozen=True)
class UncertaintyReport:
    """Dispersions and ``Delta r Delta p`` for one state and prescription.

    ``product`` is ``nan`` whenever ``var_position`` or ``mean_p2`` is
    negative; ``satisfies_bound`` is then ``False``.
    """

    prescription: str
    mean_position: float
    mean_position_squared: float
    mean_momentum: float
    var_position: float
    mean_p2: float
    product: float
    satisfies_bound: bool
    validity_flags: ValidityFlags = field(default_factory=lambda: ValidityFlags(True, True, True))

    @property
    def defined(self) -> bool:
        return not math.isnan(self.product)


def uncertainty_product(state: ResonanceState, prescription: str = SURFACE) -> UncertaintyReport:
    if prescription not in PRESCRIPTIONS:
        raise ValueError(f"unknown prescription {prescription!r}; expected one of {PRESCRIPTIONS}")
    r = expectation(state, POSITION, prescription).physical
    r2 = expectation(state, POSITION_SQUARED, prescription).physical
    p = expectation(state, MOMENTUM, prescription).physical
    p2 = expectation(state, MOMENTUM_SQUARED, prescription).physical
    var = r2 - r * r
    flags = ValidityFlags(
        proper_pole=bool(state.pole.is_proper),
        positive_p2=p2 >= 0,
        positive_var=var >= 0,
    )
    if flags.positive_p2 and flags.positive_var:
        product = math.sqrt(var * p2)
    else:
        product = math.nan
    return UncertaintyReport(
        prescription=prescription,
        mean_position=r,
        mean_position_squared=r2,
        mean_momentum=p,
        var_position=var,
        mean_p2=p2,
        product=product,
        satisfies_bound=(not math.isnan(product)) and product >= HEISENBERG_BOUND,
        validity_flags=flags,
    )


def infinite_wall_reference(n: int) -> float:
    """``Delta r Delta p`` of level ``n`` in the infinite spherical well: ``sqrt(n^2 pi^2/12 - 1/2)``."""
    if n < 1:
        raise ValueError("level index must be >= 1")
    return math.sqrt(n * n * math.pi**2 / 12 - 0.5)


def classify_validity(report: UncertaintyReport) -> str:
    if not report.validity_flags.all() or not report.defined:
        return UNDEFINED
    return SATISFIED if report.product >= HEISENBERG_BOUND else VIOLATED


def hamiltonian_dispersion(state: ResonanceState, prescription: str = SURFACE) -> float:
    """Energy dispersion ``sqrt(<<H^2>> - <<H>>^2)``.

    ``H u = E u`` applied twice and the real part of the product of the
    expectations gives ``<<H^2>> = <<H>>^2``, hence zero for every state.
    """
    mean_h = expectation(state, HAMILTONIAN, prescription).physical
    mean_h2 = mean_h * mean_h
    return math.sqrt(max(mean_h2 - mean_h * mean_h, 0.0))
