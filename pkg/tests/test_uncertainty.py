import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resonance_uncertainty import (
    DeltaShellPotential,
    RectangularBarrier,
    UncertaintyReport,
    ValidityFlags,
    build_state,
    classify_validity,
    find_poles,
    hamiltonian_dispersion,
    infinite_wall_reference,
    uncertainty_product,
)

# Frozen regression bound: |surface - berggren| <= C / |k a| for delta-shell
# states with |k a| > 5.  Fitted maximum of |d| |k a| over lambda in [2, 1e4],
# n = 1..3 was 0.134.
PRESCRIPTION_DELTA_C = 0.2


def delta_state(lam, n=1):
    m = DeltaShellPotential(lam)
    return build_state(find_poles(m, n)[n - 1], m)


def product(lam, prescription="surface_term", n=1):
    return uncertainty_product(delta_state(lam, n), prescription).product


def test_infinite_wall_reference_values():
    assert infinite_wall_reference(1) == pytest.approx(0.56786181, abs=5e-9)
    assert infinite_wall_reference(1) == pytest.approx(0.5678622, abs=1e-6)
    assert infinite_wall_reference(2) == pytest.approx(1.670290, abs=5e-7)
    with pytest.raises(ValueError):
        infinite_wall_reference(0)


@given(st.integers(1, 10_000))
def test_infinite_wall_reference_exceeds_bound(n):
    assert infinite_wall_reference(n) > 0.5
    assert infinite_wall_reference(n + 1) > infinite_wall_reference(n)


@pytest.mark.parametrize("prescription", ["surface_term", "berggren"])
def test_infinite_wall_limit(prescription):
    assert product(1e6, prescription) == pytest.approx(infinite_wall_reference(1), abs=1e-5)


def test_monotone_approach_to_infinite_wall():
    for pres in ("surface_term", "berggren"):
        gaps = [abs(product(lam, pres) - infinite_wall_reference(1)) for lam in (10, 1e2, 1e3, 1e4)]
        assert all(g1 < g0 for g0, g1 in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_n_scaling_at_large_lambda(n):
    for pres in ("surface_term", "berggren"):
        assert product(1e3, pres, n) == pytest.approx(infinite_wall_reference(n), rel=0.02)


def _violation_edge(prescription, n):
    grid = np.round(np.arange(0.5, 10.0001, 0.1), 10)
    bad = [lam for lam in grid if not product(lam, prescription, n) >= 0.5]
    return max(bad) if bad else 0.0


def test_validity_region_widens_with_n():
    for pres in ("surface_term", "berggren"):
        edges = [_violation_edge(pres, n) for n in (1, 2, 3)]
        assert edges[0] > 0
        assert edges[0] >= edges[1] >= edges[2]


def test_prescriptions_indistinguishable_for_strong_shells():
    for lam in (20, 50, 100, 1e3):
        assert abs(product(lam, "surface_term") - product(lam, "berggren")) < 1e-2


def test_prescription_delta_bound():
    for lam in np.geomspace(2, 1e4, 25):
        model = DeltaShellPotential(lam)
        for p in find_poles(model, 3):
            ka = abs(p.k * model.a)
            if ka <= 5:
                continue
            s = build_state(p, model)
            d = abs(uncertainty_product(s, "surface_term").product - uncertainty_product(s, "berggren").product)
            assert d <= PRESCRIPTION_DELTA_C / ka


def test_classify_examples():
    assert classify_validity(uncertainty_product(delta_state(100))) == "satisfied"
    assert classify_validity(uncertainty_product(delta_state(3))) in ("violated", "undefined")
    assert classify_validity(uncertainty_product(delta_state(3), "berggren")) in ("violated", "undefined")


def test_undefined_when_flag_false():
    rep = UncertaintyReport("surface_term", 0.5, 0.3, 0.0, 0.05, -1.0, math.nan, False,
                            ValidityFlags(True, False, True))
    assert classify_validity(rep) == "undefined"


def test_improper_pole_gives_sentinel():
    # lambda = 0.1 has beta > alpha for n = 1, so <<p^2>> = Re E < 0
    rep = uncertainty_product(delta_state(0.1))
    assert not rep.validity_flags.proper_pole
    assert not rep.validity_flags.positive_p2
    assert math.isnan(rep.product) and not rep.satisfies_bound
    assert classify_validity(rep) == "undefined"


def test_report_invariants():
    for lam in (5, 7, 100):
        for pres in ("surface_term", "berggren"):
            rep = uncertainty_product(delta_state(lam), pres)
            assert rep.product == pytest.approx(math.sqrt(rep.var_position * rep.mean_p2), rel=1e-15)
            assert rep.satisfies_bound == (rep.product >= 0.5)
            assert rep.var_position == pytest.approx(rep.mean_position_squared - rep.mean_position**2)
            assert abs(rep.mean_momentum) < 1e-12


def test_barrier_reports():
    model = RectangularBarrier(10, 100)
    s = build_state(find_poles(model, 1)[0], model)
    for pres in ("surface_term", "berggren"):
        rep = uncertainty_product(s, pres)
        assert classify_validity(rep) == "satisfied"
        assert rep.mean_position == pytest.approx(50.0, abs=1e-9)
    with pytest.raises(ValueError):
        uncertainty_product(s, "other")


def test_energy_dispersion_vanishes():
    for s in (delta_state(6), delta_state(0.1), delta_state(100, 3)):
        assert hamiltonian_dispersion(s) == 0.0
        assert hamiltonian_dispersion(s, "berggren") == 0.0
