"""Finite-range potential models.

Units are fixed to hbar = 2m = 1 throughout the package, so energies and
squared wavenumbers share units and ``E = k**2``.

Two models are provided:

* :class:`DeltaShellPotential` -- ``V(r) = lam * delta(r - a)`` for the
  s-wave radial problem on the half-line ``r >= 0``.
* :class:`RectangularBarrier` -- ``V(x) = v0`` on ``0 <= x <= length`` and
  zero elsewhere, on the full line.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

__all__ = [
    "DeltaShellPotential",
    "RectangularBarrier",
    "Geometry",
    "PotentialModel",
    "evaluate_potential",
    "make_model",
]


@dataclass(frozen=True)
class Geometry:
    """Interaction region and the edges where outgoing conditions apply.

    ``kind`` is ``"half_line"`` (cutoff at ``right``, one surface term) or
    ``"segment"`` (endpoints ``left`` and ``right``, two surface terms).
    """

    kind: str
    left: float
    right: float

    @property
    def length(self) -> float:
        return self.right - self.left

    @property
    def edges(self) -> tuple[tuple[float, int], ...]:
        """``(position, outward_sign)`` for each outgoing edge."""
        if self.kind == "half_line":
            return ((self.right, 1),)
        return ((self.left, -1), (self.right, 1))


@dataclass(frozen=True)
class DeltaShellPotential:
    """s-wave delta-shell potential ``V(r) = lam * delta(r - a)``.

    Parameters
    ----------
    lam : float
        Intensity of the shell (inverse length).
    a : float
        Shell radius.
    shell_weight : float, optional
        Fraction of the shell strength counted inside the interior integral
        ``int_0^a V u**2 dr``.  The shell sits exactly on the upper limit, so
        the integral is ambiguous: ``0`` integrates over the open interval
        ``[0, a)`` and gives ``<<p**2>> = Re E``; ``1`` counts the whole
        delta and gives ``<<p**2>> = Re E - lam * Re u(a)**2``.  With the
        default ``0`` the first-state product ``Delta r Delta p`` reaches
        1/2 near ``lam = 5`` (surface term) and ``lam = 7`` (Berggren).
    """

    lam: float
    a: float = 1.0
    shell_weight: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"delta-shell intensity must be positive, got {self.lam}")
        if not self.a > 0:
            raise ValueError(f"delta-shell radius must be positive, got {self.a}")
        if not 0.0 <= self.shell_weight <= 1.0:
            raise ValueError("shell_weight must lie in [0, 1]")

    kind = "delta_shell"
    parameters = ("lambda", "a")

    @property
    def geometry(self) -> Geometry:
        return Geometry("half_line", 0.0, self.a)

    @property
    def range(self) -> float:
        return self.a

    def with_parameter(self, name: str, value: float) -> "DeltaShellPotential":
        field = {"lambda": "lam", "lam": "lam", "a": "a"}.get(name)
        if field is None:
            raise ValueError(f"delta-shell has no parameter {name!r}")
        return replace(self, **{field: value})

    def get_parameter(self, name: str) -> float:
        if name in ("lambda", "lam"):
            return self.lam
        if name == "a":
            return self.a
        raise ValueError(f"delta-shell has no parameter {name!r}")


@dataclass(frozen=True)
class RectangularBarrier:
    """One-dimensional rectangular barrier of height ``v0`` on ``[0, length]``."""

    v0: float
    length: float

    def __post_init__(self):
        if not self.v0 > 0:
            raise ValueError(f"barrier height must be positive, got {self.v0}")
        if not self.length > 0:
            raise ValueError(f"barrier width must be positive, got {self.length}")

    kind = "rectangular"
    parameters = ("v0", "length")

    @property
    def geometry(self) -> Geometry:
        return Geometry("segment", 0.0, self.length)

    @property
    def range(self) -> float:
        return self.length

    def with_parameter(self, name: str, value: float) -> "RectangularBarrier":
        field = {"v0": "v0", "length": "length", "L": "length"}.get(name)
        if field is None:
            raise ValueError(f"rectangular barrier has no parameter {name!r}")
        return replace(self, **{field: value})

    def get_parameter(self, name: str) -> float:
        if name == "v0":
            return self.v0
        if name in ("length", "L"):
            return self.length
        raise ValueError(f"rectangular barrier has no parameter {name!r}")


PotentialModel = Union[DeltaShellPotential, RectangularBarrier]


def evaluate_potential(model: PotentialModel, x):
    """Evaluate the regular part of the potential at ``x``.

    For the delta shell this is identically zero: the singular shell is never
    sampled and enters the moments analytically.  ``x`` may be an array.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(model, DeltaShellPotential):
        if np.any(x < 0):
            raise ValueError("radial coordinate must be non-negative")
        out = np.zeros_like(x)
    elif isinstance(model, RectangularBarrier):
        out = np.where((x >= 0) & (x <= model.length), model.v0, 0.0)
    else:
        raise TypeError(f"unsupported model {model!r}")
    return out.item() if out.ndim == 0 else out


def make_model(kind: str, **params) -> PotentialModel:
    """Build a model from a type tag and keyword parameters.

    Accepts the config-file spellings ``lambda``/``a`` and ``v0``/``length``.
    """
    kind = kind.strip().lower().replace("-", "_")
    params = dict(params)
    if kind in ("delta_shell", "delta"):
        lam = params.pop("lambda", params.pop("lam", None))
        if lam is None:
            raise ValueError("delta_shell model requires 'lambda'")
        fields = dict(lam=lam, a=params.pop("a", 1.0), shell_weight=params.pop("shell_weight", 0.0))
        cls = DeltaShellPotential
    elif kind in ("rectangular", "barrier", "rectangular_barrier"):
        if "L" in params:
            params.setdefault("length", params.pop("L"))
        try:
            fields = dict(v0=params.pop("v0"), length=params.pop("length"))
        except KeyError as exc:
            raise ValueError(f"rectangular model requires {exc.args[0]!r}") from None
        cls = RectangularBarrier
    else:
        raise ValueError(f"unknown model type {kind!r}")
    if params:
        raise ValueError(f"unknown {kind} parameters: {', '.join(sorted(params))}")
    try:
        values = {k: float(v) for k, v in fields.items()}
    except (TypeError, ValueError):
        raise ValueError(f"{kind} parameters must be numbers, got {fields}") from None
    return cls(**values)
