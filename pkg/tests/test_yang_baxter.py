import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floquet_baxter.six_vertex import six_vertex_spec
from floquet_baxter.tensor_core import frobenius, permutation_op
from floquet_baxter.yang_baxter import (
    CrossingData,
    MissingCrossingError,
    PoleError,
    RMatrixSpec,
    boundary_ybe_residual,
    check_spec_invariants,
    constant_permutation_spec,
    crossing_residual,
    inversion_residual,
    partial_transpose,
    perturbed,
    r_check,
    sample_points,
    ybe_residual,
    ybe_residuals,
)

ETAS = [0.7, 0.5j, 0.3 + 0.4j]
complex_pt = st.builds(complex, st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))


def test_permutation_spec_solves_ybe_exactly():
    spec = constant_permutation_spec(3)
    assert ybe_residual(spec, 0.1, 0.2, 0.3) == 0.0


@pytest.mark.parametrize("eta", ETAS)
def test_six_vertex_ybe_all_forms(eta):
    spec = six_vertex_spec(eta)
    for u, v, w in sample_points(spec, 10):
        res = ybe_residuals(spec, u, v, w)
        assert set(res) == {"R", "braid", "difference"}
        assert max(res.values()) < 1e-12


@given(complex_pt, complex_pt, complex_pt)
def test_ybe_property(u, v, w):
    spec = six_vertex_spec(0.5j)
    if any(spec.near_pole(d, 0.05) for d in (u - v, u - w, v - w, u, v, w)):
        return
    assert ybe_residual(spec, u, v, w) < 1e-11


def test_perturbed_gate_breaks_ybe():
    spec = perturbed(six_vertex_spec(0.7), 1e-3)
    u, v, w = sample_points(spec, 1)[0]
    assert ybe_residual(spec, u, v, w) > 1e-5


def test_pole_raises():
    spec = six_vertex_spec(0.7)
    with pytest.raises(PoleError):
        spec.R(-0.7)
    assert spec.near_pole(-0.7 + 1j * np.pi)


def test_regular_and_difference_form():
    inv = check_spec_invariants(six_vertex_spec(0.5j))
    assert inv["regular"] < 1e-15 and inv["difference_form"] < 1e-12


@pytest.mark.parametrize("eta", ETAS)
def test_inversion_is_exact(eta):
    spec = six_vertex_spec(eta)
    for u in (0.3, 0.2 - 0.4j):
        rep = inversion_residual(spec, u)
        assert rep.raw < 1e-13 and abs(rep.scalar - 1) < 1e-13


@pytest.mark.parametrize("eta", [0.7, 0.5j])
def test_crossing_relations(eta):
    spec = six_vertex_spec(eta)
    for u in (0.3, -0.2 + 0.3j):
        r1, r2 = crossing_residual(spec, u)
        assert r1 < 1e-13 and r2 < 1e-13


def test_crossing_fails_with_unsigned_v():
    eta = 0.7
    spec = six_vertex_spec(eta)
    v = np.array([[0, cmath.exp(-eta / 2)], [cmath.exp(eta / 2), 0]])
    bad = RMatrixSpec(N=2, evaluate=spec.evaluate, is_difference_form=True, is_regular=True,
                      crossing=CrossingData(eta, v))
    assert crossing_residual(bad, 0.3)[0] > 0.1


def test_missing_crossing():
    with pytest.raises(MissingCrossingError):
        crossing_residual(constant_permutation_spec(), 0.1)


def test_partial_transpose_involution(rng):
    R = rng.normal(size=(4, 4))
    for w in "ab":
        assert frobenius(partial_transpose(partial_transpose(R, 2, w), 2, w) - R) == 0
    assert frobenius(partial_transpose(partial_transpose(R, 2, "a"), 2, "b") - R.T) == 0


@pytest.mark.parametrize("eta", [0.7, 0.5j])
def test_boundary_ybe_uq_data(eta):
    spec = six_vertex_spec(eta)
    w = spec.crossing.w_op
    one = lambda u: np.eye(2)
    res = boundary_ybe_residual(spec, one, lambda u: w, 0.31 + 0.1j, -0.2)
    assert max(res) < 1e-13
    # K+ = 1 is not admissible
    assert boundary_ybe_residual(spec, one, one, 0.31 + 0.1j, -0.2)[1] > 0.1


def test_r_check_is_R_times_P():
    spec = six_vertex_spec(0.5j)
    assert frobenius(r_check(spec, 0.3) - spec.R(0.3) @ permutation_op(2)) == 0
