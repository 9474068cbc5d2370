import cmath
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_uncertainty import (
    ANTIBOUND,
    BOUND,
    RESONANCE_IMPROPER,
    RESONANCE_PROPER,
    ComplexPole,
    DeltaShellPotential,
    DerivativeVanished,
    NoConvergence,
    RectangularBarrier,
    SeedOutOfQuadrant,
    asymptotic_seed_delta,
    char_fn_delta,
    characteristic_residual,
    classify,
    find_poles,
    mirror_poles,
    newton_refine,
    track_poles,
    write_trajectory_csv,
)

from oracles import barrier_denominator, delta_shell_poles_lambertw


@pytest.mark.parametrize("lam", [0.05, 0.5, 1, 2, 6, 10, 100])
@pytest.mark.parametrize("a", [1.0, 2.0])
def test_delta_poles_match_lambert_w(lam, a):
    ref = delta_shell_poles_lambertw(lam, a, 5)
    got = [p.k for p in find_poles(DeltaShellPotential(lam, a), 5)]
    for k, r in zip(got, ref):
        assert abs(k - r) <= 1e-12 * abs(r)


def test_delta_high_index_poles():
    ref = delta_shell_poles_lambertw(6, 1, 25)
    got = [p.k for p in find_poles(DeltaShellPotential(6), 25)]
    assert np.max(np.abs(np.array(got) - ref) / np.abs(ref)) < 1e-12


@pytest.mark.parametrize("v0, length", [(10, 1), (10, 100), (10, 0.42), (10, 0.2), (1, 5), (50, 3)])
def test_barrier_poles_zero_transmission_denominator(v0, length):
    poles = find_poles(RectangularBarrier(v0, length), 6)
    assert len(poles) == 6
    for p in poles:
        assert barrier_denominator(p.k, v0, length) < 1e-10
        assert p.k.real > 0 and p.k.imag < 0
    assert [p.k.real for p in poles] == sorted(p.k.real for p in poles)


def test_barrier_wide_poles_cluster_above_threshold_with_alternating_parity():
    poles = find_poles(RectangularBarrier(10, 100), 5)
    assert all(3.16 < p.k.real < 3.17 and abs(p.k.imag) < 1e-4 for p in poles)
    parities = [p.parity for p in poles]
    assert parities == ["even", "odd", "even", "odd", "even"]


def test_barrier_zero_width_limit_pole_near_imaginary_axis():
    p = find_poles(RectangularBarrier(10, 0.42), 1)[0]
    assert p.classification == RESONANCE_IMPROPER
    assert p.k.real < 0.1 * -p.k.imag


def test_asymptotic_seed_error_shrinks_quadratically():
    errs = []
    for lam in (1e2, 1e3, 1e4):
        m = DeltaShellPotential(lam)
        errs.append(abs(find_poles(m, 1)[0].k - asymptotic_seed_delta(1, m)))
    for e0, e1 in zip(errs, errs[1:]):
        assert 50 <= e0 / e1 <= 200


def test_seed_out_of_quadrant():
    with pytest.raises(SeedOutOfQuadrant):
        asymptotic_seed_delta(1, DeltaShellPotential(0.5))
    with pytest.raises(ValueError):
        asymptotic_seed_delta(0, DeltaShellPotential(50))


def test_newton_linear_function_one_step():
    root = newton_refine(lambda k: (k - (1 - 1j), 1.0), 3 + 2j, tol=1e-14, max_iter=5)
    assert abs(root.k - (1 - 1j)) < 1e-15
    assert root.iterations <= 2


def test_newton_failures():
    with pytest.raises(DerivativeVanished):
        newton_refine(lambda k: (1.0 + 0j, 0.0), 1 - 1j)
    with pytest.raises(NoConvergence):
        newton_refine(lambda k: (cmath.exp(k), cmath.exp(k)), 0j, max_iter=5)


@pytest.mark.parametrize(
    "k, expected",
    [(3 - 1j, RESONANCE_PROPER), (-3 - 1j, RESONANCE_PROPER), (1 - 3j, RESONANCE_IMPROPER),
     (2j, BOUND), (-2j, ANTIBOUND)],
)
def test_classify(k, expected):
    assert classify(k) == expected


def test_classify_rejects_off_axis_upper_half_plane():
    with pytest.raises(ValueError):
        classify(1 + 1j)


def test_pole_derived_quantities():
    p = ComplexPole(1, 3 - 0.5j)
    assert p.energy == pytest.approx((3 - 0.5j) ** 2)
    assert p.resonance_energy == pytest.approx(9 - 0.25)
    assert p.width == pytest.approx(4 * 3 * 0.5)
    assert p.energy.imag == pytest.approx(-p.width / 2)
    m = p.mirror()
    assert m.index == -1 and m.k == -3 - 0.5j


def test_mirror_poles_are_zeros_too():
    model = DeltaShellPotential(6)
    for p in mirror_poles(find_poles(model, 3)):
        assert p.index < 0
        assert abs(char_fn_delta(p.k, model)) < 1e-12 * abs(p.k)


def test_find_poles_rejects_bad_count():
    with pytest.raises(ValueError):
        find_poles(DeltaShellPotential(6), 0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 1e3), st.floats(0.5, 3.0))
def test_delta_poles_property(lam, a):
    model = DeltaShellPotential(lam, a)
    poles = find_poles(model, 3)
    assert [p.index for p in poles] == [1, 2, 3]
    for p in poles:
        assert p.k.real > 0 > p.k.imag
        assert characteristic_residual(model, p) < 1e-10
        # sign law of the resonance energy
        assert (p.energy.real > 0) == (p.alpha > p.beta)
    reals = [p.k.real for p in poles]
    assert reals == sorted(reals)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 40.0), st.floats(0.3, 30.0))
def test_barrier_poles_property(v0, length):
    poles = find_poles(RectangularBarrier(v0, length), 3)
    for p in poles:
        assert barrier_denominator(p.k, v0, length) < 1e-9
        assert (p.energy.real > 0) == (p.alpha > p.beta)


def test_track_poles_follows_direct_solution():
    grid = np.geomspace(0.5, 50, 60)
    traj = track_poles(DeltaShellPotential(0.5), "lambda", grid, [1, 2, 3])
    assert all(s == "ok" for s in traj.status.values())
    end = find_poles(DeltaShellPotential(50), 3)
    for n in (1, 2, 3):
        assert len(traj.poles[n]) == grid.size
        assert abs(traj.poles[n][-1].k - end[n - 1].k) < 1e-10


def test_track_barrier_down_to_narrow_width():
    grid = np.geomspace(100, 0.42, 150)
    traj = track_poles(RectangularBarrier(10, 100), "length", grid, [1, 2, 3, 4])
    assert all(s == "ok" for s in traj.status.values())
    end = find_poles(RectangularBarrier(10, 0.42), 4)
    for n in (1, 2, 3, 4):
        assert abs(traj.poles[n][-1].k - end[n - 1].k) < 1e-9


def test_track_single_point_and_bad_grids():
    traj = track_poles(DeltaShellPotential(6), "lambda", [6.0], [1])
    assert len(list(traj.rows())) == 1
    with pytest.raises(ValueError):
        track_poles(DeltaShellPotential(6), "lambda", [], [1])
    with pytest.raises(ValueError):
        track_poles(DeltaShellPotential(6), "lambda", [1, 3, 2], [1])
    with pytest.raises(ValueError):
        track_poles(DeltaShellPotential(6), "lambda", [1, 2], [0])


def test_track_flags_divergence():
    # pole 1 heads to -i infinity as the shell vanishes
    traj = track_poles(DeltaShellPotential(1.0), "lambda", np.geomspace(1.0, 1e-30, 80), [1], beta_ceiling=12.0)
    assert traj.status[1] == "diverged"
    assert traj.poles[1][-1].beta > 12.0
    assert math.isfinite(traj.stopped_at[1])


def test_trajectory_csv():
    traj = track_poles(DeltaShellPotential(6), "lambda", [6.0, 7.0], [1, 2])
    text = write_trajectory_csv(traj, io.StringIO())
    lines = text.splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1].startswith("parameter,n,re_k")
    assert len(lines) == 6
    assert text == write_trajectory_csv(traj)
