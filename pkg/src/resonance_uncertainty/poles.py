"""Complex wavenumber poles of the delta-shell and rectangular-barrier models.

Poles are the zeros of a characteristic function ``J(k)``.  They are refined
by Newton-Raphson with analytic derivatives, seeded either from the
large-intensity asymptotic formula (delta shell) or from a coarse grid scan
of ``log|J|`` (both models).  Only fourth-quadrant poles are solved for;
their third-quadrant partners ``-conj(k)`` follow from time reversal.

The barrier is solved in the plane of the interior wavenumber
``q = sqrt(k**2 - v0)``, where its poles are nearly equally spaced by
``pi / length`` even when they crowd together just above the barrier top in
the ``k`` plane.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.ndimage import minimum_filter

from .potentials import DeltaShellPotential, PotentialModel, RectangularBarrier

logger = logging.getLogger(__name__)

__all__ = [
    "BOUND",
    "ANTIBOUND",
    "RESONANCE_PROPER",
    "RESONANCE_IMPROPER",
    "PoleError",
    "SeedOutOfQuadrant",
    "NoConvergence",
    "DerivativeVanished",
    "ContinuityBreak",
    "DivergedToInfinity",
    "ComplexPole",
    "Root",
    "Trajectory",
    "classify",
    "char_fn_delta",
    "char_fn_delta_derivative",
    "char_fn_rect",
    "char_fn_rect_derivative",
    "interior_wavenumber",
    "characteristic_residual",
    "asymptotic_seed_delta",
    "newton_refine",
    "find_poles",
    "mirror_poles",
    "track_poles",
    "write_trajectory_csv",
]

BOUND = "bound"
ANTIBOUND = "antibound"
RESONANCE_PROPER = "resonance_proper"
RESONANCE_IMPROPER = "resonance_improper"

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 60
DERIVATIVE_FLOOR = 1e-30

# Largest n*pi/(lam*a) for which the asymptotic delta-shell seed is trusted.
_SEED_RELIABLE = 0.25
# Accept a refined root only if its relative residual is below this.
_ACCEPT_RESIDUAL = 1e-9


class PoleError(RuntimeError):
    """Base class for pole-search failures."""


class SeedOutOfQuadrant(PoleError):
    pass


class NoConvergence(PoleError):
    """Newton iteration failed; ``partial`` holds any poles already found."""

    def __init__(self, message: str, partial: Sequence["ComplexPole"] = ()):
        super().__init__(message)
        self.partial = list(partial)


class DerivativeVanished(PoleError):
    pass


class ContinuityBreak(PoleError):
    pass


class DivergedToInfinity(PoleError):
    pass


def classify(k: complex, axis_rtol: float = 1e-12) -> str:
    """Classify a pole by its position in the complex ``k`` plane.

    Points within ``axis_rtol * |k|`` of the imaginary axis are bound
    (upper half) or antibound (lower half).  Off-axis points in the lower
    half plane are resonances, *proper* when ``|Re k| > -Im k``.
    """
    k = complex(k)
    alpha, beta = k.real, -k.imag
    if abs(alpha) <= axis_rtol * abs(k):
        if k == 0:
            raise ValueError("k = 0 is not a pole")
        return BOUND if beta < 0 else ANTIBOUND
    if beta < 0:
        raise ValueError(f"off-axis upper-half-plane point {k} is not an outgoing pole")
    return RESONANCE_PROPER if abs(alpha) > beta else RESONANCE_IMPROPER


@dataclass(frozen=True)
class ComplexPole:
    """A pole ``k = alpha - i beta`` with energy ``E = k**2``.

    ``index`` is positive in the fourth quadrant and negative for the
    time-reversed partner ``-conj(k)``.  ``parity`` is ``"even"`` or
    ``"odd"`` for barrier poles (symmetry about the barrier centre) and
    ``None`` for the delta shell.  ``residual`` is the relative residual of
    the characteristic function at ``k``.
    """

    index: int
    k: complex
    residual: float = 0.0
    parity: str | None = None

    @property
    def alpha(self) -> float:
        return self.k.real

    @property
    def beta(self) -> float:
        return -self.k.imag

    @property
    def energy(self) -> complex:
        return self.k * self.k

    @property
    def resonance_energy(self) -> float:
        """Real part of the energy, ``alpha**2 - beta**2``."""
        return self.energy.real

    @property
    def width(self) -> float:
        """Decay width ``Gamma = 4 alpha beta = -2 Im E``."""
        return 4.0 * self.alpha * self.beta

    @property
    def classification(self) -> str:
        return classify(self.k)

    @property
    def is_proper(self) -> bool:
        return self.classification == RESONANCE_PROPER

    def mirror(self) -> "ComplexPole":
        """Time-reversed partner ``k_{-n} = -conj(k_n)``."""
        return ComplexPole(-self.index, -self.k.conjugate(), self.residual, self.parity)


@dataclass(frozen=True)
class Root:
    """Result of :func:`newton_refine`."""

    k: complex
    residual: float
    iterations: int


# ---------------------------------------------------------------------------
# characteristic functions


def char_fn_delta(k, model: DeltaShellPotential):
    """``J(k) = 2ik + lam (exp(2ika) - 1)``; zero at every delta-shell pole."""
    return 2j * k + model.lam * (np.exp(2j * k * model.a) - 1.0)


def char_fn_delta_derivative(k, model: DeltaShellPotential):
    """``dJ/dk = 2i + 2ia lam exp(2ika)``."""
    return 2j + 2j * model.a * model.lam * np.exp(2j * k * model.a)


def _delta_scale(k, model: DeltaShellPotential):
    return 2.0 * np.abs(k) + model.lam * (1.0 + np.abs(np.exp(2j * k * model.a)))


def interior_wavenumber(k, v0: float):
    """Principal branch of ``q = sqrt(k**2 - v0)``."""
    return np.sqrt(np.asarray(k, dtype=complex) ** 2 - v0)


def char_fn_rect(k, model: RectangularBarrier, parity: str, branch: int = 1):
    """Barrier characteristic function for states of given parity.

    ``J(k) = exp(-i q L/2) (k + q) + s exp(i q L/2) (k - q)`` with ``s = +1``
    for states even about the barrier centre and ``s = -1`` for odd ones.
    ``branch=-1`` evaluates with ``-q``; the zero set is unchanged.
    """
    s = _parity_sign(parity)
    q = branch * interior_wavenumber(k, model.v0)
    th = 0.5 * q * model.length
    out = np.exp(-1j * th) * (k + q) + s * np.exp(1j * th) * (k - q)
    return out.item() if np.ndim(out) == 0 else out


def char_fn_rect_derivative(k, model: RectangularBarrier, parity: str):
    """Analytic ``dJ/dk`` of :func:`char_fn_rect` (principal branch)."""
    s = _parity_sign(parity)
    q = interior_wavenumber(k, model.v0)
    L = model.length
    th = 0.5 * q * L
    dq = k / q
    em, ep = np.exp(-1j * th), np.exp(1j * th)
    d_em = -0.5j * L * dq * em
    d_ep = 0.5j * L * dq * ep
    out = d_em * (k + q) + em * (1 + dq) + s * (d_ep * (k - q) + ep * (1 - dq))
    return out.item() if np.ndim(out) == 0 else out


def _parity_sign(parity: str) -> int:
    if parity == "even":
        return 1
    if parity == "odd":
        return -1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def _sinc_over(q, half_length: float):
    """``sin(q L/2) / q`` and its ``q`` derivative, stable near ``q = 0``."""
    th = q * half_length
    small = np.abs(th) < 1e-3
    th_safe = np.where(small, 1.0, th)
    sinc = np.where(small, 1 - th**2 / 6 + th**4 / 120, np.sin(th_safe) / th_safe)
    dsinc = np.where(
        small,
        -th / 3 + th**3 / 30,
        (th_safe * np.cos(th_safe) - np.sin(th_safe)) / th_safe**2,
    )
    return half_length * sinc, half_length**2 * dsinc


def _rect_reduced(q, model: RectangularBarrier, parity: str):
    """Entire reduced forms of the barrier functions in the ``q`` plane.

    even: ``g = k cos(qL/2) - i q sin(qL/2)`` (``J_even = 2 g``)
    odd:  ``g = cos(qL/2) - i k sin(qL/2)/q`` (``J_odd = 2 q g``)

    Returns ``(g, dg/dq, scale)``; dividing out ``q`` removes the spurious
    root of ``J_odd`` at the barrier top.
    """
    q = np.asarray(q, dtype=complex)
    half = 0.5 * model.length
    k = np.sqrt(q * q + model.v0)
    dk = q / k
    th = q * half
    c, s = np.cos(th), np.sin(th)
    grow = np.exp(np.abs(th.imag))
    if parity == "even":
        g = k * c - 1j * q * s
        dg = dk * c - k * s * half - 1j * s - 1j * q * c * half
        scale = (np.abs(k) + np.abs(q)) * grow
    else:
        S, dS = _sinc_over(q, half)
        g = c - 1j * k * S
        dg = -s * half - 1j * dk * S - 1j * k * dS
        scale = (1.0 + np.abs(k) * half) * grow
    return g, dg, scale


def _rect_scan_fn(q, model: RectangularBarrier):
    ge, _, se = _rect_reduced(q, model, "even")
    go, _, so = _rect_reduced(q, model, "odd")
    return (ge / se) * (go / so)


def characteristic_residual(model: PotentialModel, pole: ComplexPole | complex, parity: str | None = None) -> float:
    """Relative residual ``|J(k)| / scale`` of the model's characteristic function.

    ``scale`` is the sum of the magnitudes of the terms in ``J``, so the
    value is comparable to machine precision at a converged pole at any
    potential strength.  For the barrier the residual of the parity factor
    that vanishes (the smaller one when ``parity`` is not given) is used.
    """
    if isinstance(pole, ComplexPole):
        k, parity = pole.k, parity or pole.parity
    else:
        k = complex(pole)
    if isinstance(model, DeltaShellPotential):
        return float(abs(char_fn_delta(k, model)) / _delta_scale(k, model))
    q = complex(interior_wavenumber(k, model.v0))
    parities = (parity,) if parity else ("even", "odd")
    best = math.inf
    for p in parities:
        g, _, scale = _rect_reduced(q, model, p)
        # g is even in q; evaluating at the principal q is branch independent.
        k_of_q = np.sqrt(q * q + model.v0)
        if abs(k_of_q - k) > 1e-8 * abs(k):
            # k is the -sqrt branch of q; J(-k) differs, use the literal form
            j = char_fn_rect(k, model, p)
            g = j / 2.0 if p == "even" else j / (2.0 * q)
        best = min(best, float(abs(g) / scale))
    return best


# ---------------------------------------------------------------------------
# seeds and Newton


def asymptotic_seed_delta(n: int, model: DeltaShellPotential) -> complex:
    """Large-intensity approximation to the ``n``-th delta-shell pole.

    ``k_n ~ (n pi / a)(1 - 1/(lam a)) - (i/a)(n pi / (lam a))**2``.

    Raises
    ------
    SeedOutOfQuadrant
        If ``lam * a <= 1`` so that the approximation leaves the fourth
        quadrant; callers fall back to a grid scan.
    """
    if n < 1:
        raise ValueError("pole index must be positive")
    lam, a = model.lam, model.a
    x = n * math.pi / a
    seed = complex(x * (1.0 - 1.0 / (lam * a)), -((n * math.pi / (lam * a)) ** 2) / a)
    if seed.real <= 0 or seed.imag >= 0:
        raise SeedOutOfQuadrant(f"seed {seed} for n={n}, lam*a={lam * a} is outside the fourth quadrant")
    return seed


def newton_refine(
    f: Callable[[complex], tuple[complex, complex]],
    seed: complex,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    derivative_floor: float = DERIVATIVE_FLOOR,
) -> Root:
    """Newton-Raphson iteration ``k <- k - f(k)/f'(k)``.

    ``f`` returns ``(value, derivative)``.  Iteration stops once
    ``|f| < tol``, or when the step has stalled at the level of rounding
    error (the attainable residual is then reported as is).

    Raises
    ------
    NoConvergence
        If ``max_iter`` iterations pass without meeting either criterion.
    DerivativeVanished
        If ``|f'|`` drops below ``derivative_floor`` (near-degenerate pole).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = complex(seed)
    for it in range(max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            val, der = f(k)
        val, der = complex(val), complex(der)
        if not (np.isfinite(val) and np.isfinite(der)):
            raise NoConvergence(f"non-finite iterate at k={k}")
        if abs(val) < tol:
            if abs(der) >= derivative_floor:
                # one polishing step; keep it only if it helps
                k2 = k - val / der
                val2, _ = f(k2)
                if abs(complex(val2)) < abs(val):
                    return Root(k2, abs(complex(val2)), it + 1)
            return Root(k, abs(val), it)
        if it == max_iter:
            break
        if abs(der) < derivative_floor:
            raise DerivativeVanished(f"|f'(k)| = {abs(der):.3e} at k={k}")
        step = val / der
        k -= step
        if abs(step) <= 8 * np.finfo(float).eps * max(abs(k), 1.0):
            val, _ = f(k)
            return Root(k, abs(complex(val)), it + 1)
    raise NoConvergence(f"no convergence after {max_iter} iterations from seed {seed}; last k={k}, |f|={abs(val):.3e}")


def _delta_newton_fn(model: DeltaShellPotential):
    def f(k):
        s = _delta_scale(k, model)
        return char_fn_delta(k, model) / s, char_fn_delta_derivative(k, model) / s

    return f


def _rect_newton_fn(model: RectangularBarrier, parity: str):
    def f(q):
        g, dg, scale = _rect_reduced(q, model, parity)
        return complex(g / scale), complex(dg / scale)

    return f


# ---------------------------------------------------------------------------
# grid scan


def _scan_minima(fn, re_vals: np.ndarray, im_vals: np.ndarray) -> list[complex]:
    """Local minima of ``log|fn|`` on a rectangular grid."""
    grid = re_vals[None, :] + 1j * im_vals[:, None]
    with np.errstate(all="ignore"):
        vals = np.log(np.abs(fn(grid)) + 1e-300)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    mins = (vals == minimum_filter(vals, size=3, mode="nearest")) & np.isfinite(vals)
    return [complex(z) for z in grid[mins]]


def _dedupe(values: Iterable[tuple[complex, float, str | None]], tol: float):
    out: list[tuple[complex, float, str | None]] = []
    for k, res, par in values:
        thresh = max(10 * tol, 1e-9 * abs(k))
        if all(abs(k - other[0]) > thresh for other in out):
            out.append((k, res, par))
    return out


def _refine_delta(model, seed, tol, max_iter):
    root = newton_refine(_delta_newton_fn(model), seed, tol, max_iter)
    return root.k, root.residual, None


def _refine_rect(model, q_seed, tol, max_iter, parity=None):
    if parity is None:
        ge, _, se = _rect_reduced(q_seed, model, "even")
        go, _, so = _rect_reduced(q_seed, model, "odd")
        parity = "even" if abs(ge / se) <= abs(go / so) else "odd"
    root = newton_refine(_rect_newton_fn(model, parity), q_seed, tol, max_iter)
    q = root.k
    if q.real < 0:
        q = -q
    k = complex(np.sqrt(q * q + model.v0))
    return k, root.residual, parity


def _delta_scan(model: DeltaShellPotential, n_max: int, tol, max_iter):
    a = model.a
    k_max = (n_max + 0.75) * math.pi / a
    beta_max = 0.5 * math.log1p(4.0 * k_max / model.lam) / a + 1.0 / a
    re_vals = np.linspace(k_max / (32 * (n_max + 1)), k_max, 32 * (n_max + 1))
    im_vals = -np.geomspace(1e-4 * beta_max, beta_max, 120)
    found = []
    for seed in _scan_minima(lambda k: char_fn_delta(k, model) / _delta_scale(k, model), re_vals, im_vals):
        try:
            found.append(_refine_delta(model, seed, tol, max_iter))
        except PoleError:
            continue
    return found


def _rect_scan(model: RectangularBarrier, n_max: int, tol, max_iter):
    L, v0 = model.length, model.v0
    q_max = (n_max + 2.0) * math.pi / L
    y_max = (math.log1p(4.0 * q_max**2 / v0) + 3.0) / L
    n_re = max(96, 16 * (n_max + 2))
    re_vals = np.linspace(q_max / n_re, q_max, n_re)
    im_vals = -np.geomspace(1e-7 * y_max, y_max, 160)
    found = []
    for seed in _scan_minima(lambda q: _rect_scan_fn(q, model), re_vals, im_vals):
        # The product has zeros of both parities; refine each factor.
        for parity in ("even", "odd"):
            try:
                found.append(_refine_rect(model, seed, tol, max_iter, parity))
            except PoleError:
                continue
    return found


def _is_fourth_quadrant(k: complex) -> bool:
    return k.real > 1e-12 * abs(k) and k.imag <= 0 and abs(k) > 1e-8


def find_poles(
    model: PotentialModel,
    n_max: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> list[ComplexPole]:
    """Locate the first ``n_max`` fourth-quadrant poles, ordered by ``Re k``.

    The spurious root ``k = 0`` of the delta-shell function (and ``q = 0``
    of the odd barrier function) is never returned.  Use
    :func:`mirror_poles` for the third-quadrant partners.

    Raises
    ------
    NoConvergence
        If fewer than ``n_max`` poles could be resolved; the poles that were
        found are attached as ``partial``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    candidates: list[tuple[complex, float, str | None]] = []
    if isinstance(model, DeltaShellPotential):
        need_scan = False
        for n in range(1, n_max + 1):
            if n * math.pi / (model.lam * model.a) > _SEED_RELIABLE:
                need_scan = True
                continue
            try:
                candidates.append(_refine_delta(model, asymptotic_seed_delta(n, model), tol, max_iter))
            except PoleError:
                need_scan = True
        if need_scan:
            candidates.extend(_delta_scan(model, n_max, tol, max_iter))
    elif isinstance(model, RectangularBarrier):
        candidates.extend(_rect_scan(model, n_max, tol, max_iter))
    else:
        raise TypeError(f"unsupported model {model!r}")

    good = [c for c in candidates if _is_fourth_quadrant(c[0]) and c[1] < _ACCEPT_RESIDUAL]
    good = _dedupe(good, tol)
    good.sort(key=lambda c: c[0].real)
    poles = [
        ComplexPole(n, k, characteristic_residual(model, k, par), par)
        for n, (k, _, par) in enumerate(good[:n_max], start=1)
    ]
    if len(poles) < n_max:
        raise NoConvergence(f"resolved only {len(poles)} of {n_max} poles for {model!r}", poles)
    return poles


def mirror_poles(poles: Iterable[ComplexPole]) -> list[ComplexPole]:
    """Third-quadrant partners ``-conj(k_n)`` with indices ``-n``."""
    return [p.mirror() for p in poles]


# ---------------------------------------------------------------------------
# continuation


@dataclass
class Trajectory:
    """Poles followed along a parameter grid.

    ``poles[n]`` lists the refined pole of index ``n`` at each grid value
    that was reached; ``status[n]`` is ``"ok"``, ``"diverged"``,
    ``"continuity_break"`` or ``"no_convergence"``, and ``stopped_at[n]``
    the grid value where a flagged trajectory ended.
    """

    parameter: str
    values: np.ndarray
    indices: tuple[int, ...]
    poles: dict[int, list[ComplexPole]] = field(default_factory=dict)
    status: dict[int, str] = field(default_factory=dict)
    stopped_at: dict[int, float] = field(default_factory=dict)

    def k(self, n: int) -> np.ndarray:
        return np.array([p.k for p in self.poles[n]])

    def rows(self):
        """``(parameter, n, pole_or_None, status)`` in grid order, then index."""
        for i, value in enumerate(self.values):
            for n in self.indices:
                track = self.poles[n]
                if i < len(track):
                    yield float(value), n, track[i], "ok"
                elif i == len(track) and self.status[n] != "ok":
                    yield float(value), n, None, self.status[n]


def _root_var(model, k: complex) -> complex:
    if isinstance(model, RectangularBarrier):
        q = complex(interior_wavenumber(k, model.v0))
        return -q if q.real < 0 else q
    return k


def _refine_tracked(model, w_seed, parity, tol, max_iter):
    if isinstance(model, RectangularBarrier):
        k, res, par = _refine_rect(model, w_seed, tol, max_iter, parity)
    else:
        k, res, par = _refine_delta(model, w_seed, tol, max_iter)
    if res >= _ACCEPT_RESIDUAL:
        raise NoConvergence(f"residual {res:.2e} too large at k={k}")
    return k, par


def _min_spacing(ks: Sequence[complex]) -> float:
    ks = list(ks)
    if len(ks) < 2:
        return abs(ks[0]) if ks else math.inf
    return min(abs(x - y) for i, x in enumerate(ks) for y in ks[i + 1 :])


def track_poles(
    model: PotentialModel,
    parameter: str,
    grid: Sequence[float],
    indices: Sequence[int],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    beta_ceiling: float | None = None,
    max_halvings: int = 12,
) -> Trajectory:
    """Follow poles by continuation along ``grid`` of ``parameter`` values.

    Each refined pole seeds the next grid point.  A step is accepted only if
    every tracked pole moves by less than half the smallest separation
    between tracked poles; otherwise the parameter step is halved, up to
    ``max_halvings`` times, before the trajectory is flagged
    ``continuity_break``.  A pole whose ``beta`` exceeds ``beta_ceiling``
    (default ``50 / range`` of the current model) is flagged ``diverged`` and no longer followed.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    d = np.diff(grid)
    if d.size and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError("grid must be strictly monotone")
    indices = tuple(sorted(set(int(n) for n in indices)))
    if not indices or indices[0] < 1:
        raise ValueError("indices must be positive")
    first = model.with_parameter(parameter, grid[0])

    def ceiling(m):
        return 50.0 / m.range if beta_ceiling is None else beta_ceiling

    # One extra pole is followed so that the step bound sees a neighbour.
    tracked = list(range(1, indices[-1] + 2))
    try:
        start = find_poles(first, len(tracked), tol, max_iter)
    except NoConvergence as exc:
        start = exc.partial
        if len(start) < indices[-1]:
            raise
        tracked = tracked[: len(start)]

    traj = Trajectory(parameter, grid, indices)
    traj.poles = {n: [start[n - 1]] for n in tracked}
    traj.status = {n: "ok" for n in tracked}
    state = {n: (_root_var(first, start[n - 1].k), start[n - 1].parity) for n in tracked}
    current = {n: start[n - 1].k for n in tracked}
    for n in tracked:
        if start[n - 1].beta > ceiling(first):
            traj.status[n] = "diverged"
            traj.stopped_at[n] = float(grid[0])

    def attempt(p_from, p_to, depth):
        """Advance all live poles from p_from to p_to; returns new values or raises."""
        live = [n for n in tracked if traj.status[n] == "ok"]
        if not live:
            return {}
        m = model.with_parameter(parameter, p_to)
        bound = 0.5 * _min_spacing([current[n] for n in live])
        new = {}
        try:
            for n in live:
                w, par = state[n]
                k_new, par = _refine_tracked(m, w, par, tol, max_iter)
                if abs(k_new - current[n]) >= bound:
                    raise ContinuityBreak(f"pole {n} jumped {abs(k_new - current[n]):.3e} >= {bound:.3e}")
                new[n] = (k_new, par)
        except PoleError:
            if depth >= max_halvings:
                raise
            mid = 0.5 * (p_from + p_to)
            commit(attempt(p_from, mid, depth + 1), mid)
            return attempt(mid, p_to, depth + 1)
        return new

    def commit(new, p):
        m = model.with_parameter(parameter, p)
        for n, (k_new, par) in new.items():
            current[n] = k_new
            state[n] = (_root_var(m, k_new), par)

    for i in range(1, grid.size):
        try:
            new = attempt(grid[i - 1], grid[i], 0)
        except (ContinuityBreak, NoConvergence, DerivativeVanished) as exc:
            status = "continuity_break" if isinstance(exc, ContinuityBreak) else "no_convergence"
            logger.warning("trajectory stopped at %s=%g: %s", parameter, grid[i], exc)
            for n in tracked:
                if traj.status[n] == "ok":
                    traj.status[n] = status
                    traj.stopped_at[n] = float(grid[i])
            break
        commit(new, grid[i])
        m = model.with_parameter(parameter, grid[i])
        for n, (k_new, par) in new.items():
            pole = ComplexPole(n, k_new, characteristic_residual(m, k_new, par), par)
            traj.poles[n].append(pole)
            if pole.beta > ceiling(m):
                traj.status[n] = "diverged"
                traj.stopped_at[n] = float(grid[i])

    for n in list(traj.poles):
        if n not in indices:
            del traj.poles[n], traj.status[n]
            traj.stopped_at.pop(n, None)
    return traj


CSV_COLUMNS = ("parameter", "n", "re_k", "im_k", "re_E", "im_E", "classification", "residual", "status")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trajectory_csv(traj: Trajectory, stream: io.TextIOBase | None = None) -> str:
    """Serialize a trajectory as CSV with a ``# schema=1`` header line."""
    buf = io.StringIO()
    buf.write("# schema=1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for value, n, pole, status in traj.rows():
        if pole is None:
            w.writerow([_fmt(value), n, "nan", "nan", "nan", "nan", "", "nan", status])
        else:
            e = pole.energy
            w.writerow(
                [_fmt(value), n, _fmt(pole.k.real), _fmt(pole.k.imag), _fmt(e.real), _fmt(e.imag),
                 pole.classification, _fmt(pole.residual), status]
            )
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
