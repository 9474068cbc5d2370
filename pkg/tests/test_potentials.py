import numpy as np
import pytest

from resonance_uncertainty import DeltaShellPotential, RectangularBarrier, evaluate_potential, make_model


@pytest.mark.parametrize("kwargs", [dict(lam=0), dict(lam=-1), dict(lam=1, a=0), dict(lam=1, shell_weight=2)])
def test_delta_shell_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        DeltaShellPotential(**kwargs)


@pytest.mark.parametrize("v0, length", [(0, 1), (-1, 1), (1, 0), (1, -2)])
def test_barrier_rejects_bad_parameters(v0, length):
    with pytest.raises(ValueError):
        RectangularBarrier(v0, length)


def test_geometry_edges():
    assert DeltaShellPotential(3, 2.0).geometry.edges == ((2.0, 1),)
    assert RectangularBarrier(10, 5).geometry.edges == ((0.0, -1), (5, 1))
    assert RectangularBarrier(10, 5).geometry.length == 5


def test_with_parameter_and_aliases():
    m = DeltaShellPotential(6)
    assert m.with_parameter("lambda", 7).lam == 7
    assert m.with_parameter("lambda", 7).a == 1.0
    b = RectangularBarrier(10, 1)
    assert b.with_parameter("L", 3).length == 3
    assert b.with_parameter("v0", 2).get_parameter("v0") == 2
    with pytest.raises(ValueError):
        m.with_parameter("v0", 1)
    with pytest.raises(ValueError):
        b.get_parameter("lambda")
    with pytest.raises(ValueError):
        m.with_parameter("lambda", -1)


def test_models_are_hashable_values():
    assert DeltaShellPotential(6) == DeltaShellPotential(6.0)
    assert len({RectangularBarrier(1, 2), RectangularBarrier(1, 2)}) == 1


def test_evaluate_potential():
    b = RectangularBarrier(10, 2)
    np.testing.assert_array_equal(evaluate_potential(b, [-1, 0, 1, 2, 3]), [0, 10, 10, 10, 0])
    assert evaluate_potential(DeltaShellPotential(5), 1.0) == 0.0
    with pytest.raises(ValueError):
        evaluate_potential(DeltaShellPotential(5), -0.1)


def test_make_model():
    assert make_model("delta_shell", **{"lambda": "6", "a": "2"}) == DeltaShellPotential(6, 2)
    assert make_model("rectangular", v0=10, length=1) == RectangularBarrier(10, 1)
    with pytest.raises(ValueError, match="requires"):
        make_model("rectangular", v0=10)
    with pytest.raises(ValueError, match="unknown"):
        make_model("delta_shell", **{"lambda": 1, "v0": 3})
    with pytest.raises(ValueError, match="unknown model"):
        make_model("coulomb")
    with pytest.raises(ValueError):
        make_model("delta_shell", **{"lambda": "abc"})
