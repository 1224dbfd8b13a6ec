import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from floquet_baxter.floquet import (
    FloquetParams,
    anti_chiral_floquet_operator,
    anti_chiral_transfer,
    brick_wall_open,
    brick_wall_open_from_gates,
    floquet_hamiltonian,
    floquet_open,
    floquet_operator,
    isotropic_identity_residual,
    layer_V,
    local_gate,
    regular_identity_residual,
    relative_commutator,
    staggered_floquet,
    staggered_floquet_from_gates,
    staggered_identity_residual,
    staggered_normalization,
    w_factorization_residual,
)
from floquet_baxter.six_vertex import floquet_period, iso_alpha_of_T, six_vertex_spec
from floquet_baxter.tensor_core import (
    Boundary,
    ChainGeometry,
    GeometryError,
    best_scalar_residual,
    frobenius,
    gate_product,
    reflection_op,
    translation_op,
)
from floquet_baxter.transfer import open_transfer, staggered_transfer, transfer_matrix, uq_invariant_boundary
from floquet_baxter.yang_baxter import r_check

INHOMS = {2: (0.0, 0.3 + 0.1j), 3: (0.0, 0.3 + 0.1j, -0.2 + 0.15j)}


@pytest.mark.parametrize("eta", [0.7, 0.5j])
@pytest.mark.parametrize("n,L", [(2, 4), (2, 6), (3, 6)])
def test_periodic_integrability_commutator(eta, n, L):
    spec = six_vertex_spec(eta)
    geo = ChainGeometry(L=L, n=n)
    U = floquet_operator(spec, INHOMS[n], geo).U_F
    for u in (0.31 + 0.2j, -0.45 + 0.1j, 0.6j):
        assert relative_commutator(U, transfer_matrix(spec, u, INHOMS[n], geo)) < 1e-12


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.8, 0.8))
def test_periodic_integrability_random_inhomogeneity(x, y, u):
    spec = six_vertex_spec(0.5j)
    geo = ChainGeometry(L=4)
    inh = (0.0, complex(x, y))
    if spec.near_pole(-inh[1], 0.05) or spec.near_pole(u + 0.1j - inh[1], 0.05):
        return
    try:
        U = floquet_operator(spec, inh, geo).U_F
        T = transfer_matrix(spec, u + 0.1j, inh, geo)
    except ArithmeticError:
        return
    assert relative_commutator(U, T) < 1e-11


def test_depth3_layers_transcribed():
    spec = six_vertex_spec(0.7)
    u1, u2, u3 = INHOMS[3]
    geo = ChainGeometry(L=6, n=3)
    a, b = r_check(spec, u1, u2), r_check(spec, u1, u3)
    ref = {3: [(a, 1, 2), (b, 2, 3), (a, 4, 5), (b, 5, 6)],
           2: [(a, 6, 1), (b, 1, 2), (a, 3, 4), (b, 4, 5)],
           1: [(a, 5, 6), (b, 6, 1), (a, 2, 3), (b, 3, 4)]}
    for k, fac in ref.items():
        assert frobenius(layer_V(k, spec, INHOMS[3], geo) - gate_product(fac, geo)) < 1e-13


def test_local_gate():
    spec = six_vertex_spec(0.5j)
    g = local_gate(spec, INHOMS[3], 3)
    geo = ChainGeometry(L=3, n=1)
    ref = gate_product([(r_check(spec, 0, INHOMS[3][1]), 1, 2), (r_check(spec, 0, INHOMS[3][2]), 2, 3)], geo)
    assert frobenius(g - ref) == 0


def test_layer_errors():
    spec = six_vertex_spec(0.7)
    with pytest.raises(ValueError):
        layer_V(3, spec, INHOMS[2], ChainGeometry(L=4))
    with pytest.raises(GeometryError):
        layer_V(1, spec, INHOMS[2], ChainGeometry(L=4, boundary=Boundary.OPEN))
    with pytest.raises(GeometryError):
        layer_V(1, spec, INHOMS[3], ChainGeometry(L=4))


@pytest.mark.parametrize("n", [2, 3])
def test_w_factorization_and_regular_identity(n):
    spec = six_vertex_spec(0.5j)
    geo = ChainGeometry(L=6, n=n)
    b = floquet_operator(spec, INHOMS[n], geo)
    assert w_factorization_residual(b, geo) < 1e-12
    assert regular_identity_residual(spec, INHOMS[n], geo) < 1e-11


def test_regular_identity_needs_u1_zero():
    with pytest.raises(ValueError):
        regular_identity_residual(six_vertex_spec(0.7), (0.1, 0.2), ChainGeometry(L=4))


@pytest.mark.parametrize("eta,alpha", [(0.7, 0.3), (0.5j, 0.4), (0.5j, 0.2 + 0.3j)])
def test_staggered_identity_exponent(eta, alpha):
    geo = ChainGeometry(L=6)
    assert staggered_identity_residual(eta, alpha, geo) < 1e-12
    # the exponent is L: with L/2 the identity fails
    U = staggered_floquet(eta, alpha, geo).U_F
    T0 = staggered_transfer(eta, 0.0, alpha, geo)
    G = translation_op(geo)
    half = cmath.sqrt(staggered_normalization(eta, alpha, 6).value())
    assert frobenius(U - T0 @ T0 @ G @ G / half) > 1e-3


@pytest.mark.parametrize("eta", [0.7, 0.5j])
@pytest.mark.parametrize("T", [0.3, 1.1])
def test_gate_route_equals_alpha_route(eta, T):
    geo = ChainGeometry(L=6)
    fp = FloquetParams.from_T(eta, T)
    U = staggered_floquet(fp.aniso, fp.alpha, geo).U_F
    assert frobenius(U - staggered_floquet_from_gates(eta, T, geo)) < 1e-12


def test_from_T_reduces_period():
    p = floquet_period(0.5j)
    a = FloquetParams.from_T(0.5j, 0.3)
    b = FloquetParams.from_T(0.5j, 0.3 + p)
    assert abs(a.alpha - b.alpha) < 1e-12 and abs(a.T - b.T) < 1e-12


def test_floquet_hamiltonian_exponentiates_back():
    geo = ChainGeometry(L=4)
    fp = FloquetParams.from_T(0.5j, 0.3)
    b = floquet_hamiltonian(staggered_floquet(fp.aniso, fp.alpha, geo), 0.3)
    assert frobenius(expm(-2j * 0.3 * b.H_F) - b.U_F) < 1e-11
    assert not b.jordan_risk
    with pytest.raises(ValueError):
        floquet_hamiltonian(b, 0.0)


@pytest.mark.parametrize("n", [2, 3])
def test_anti_chiral_smoke(n):
    spec = six_vertex_spec(0.5j)
    geo = ChainGeometry(L=6, n=n)
    U = anti_chiral_floquet_operator(spec, INHOMS[n], geo)
    P = reflection_op(geo)
    mirrored = P @ floquet_operator(spec, tuple(reversed(INHOMS[n])), geo).U_F @ P
    assert frobenius(U - mirrored) < 1e-12
    for u in (0.3 + 0.2j, -0.4):
        assert relative_commutator(U, anti_chiral_transfer(spec, u, INHOMS[n], geo)) < 1e-11


# -- open --------------------------------------------------------------------

@pytest.mark.parametrize("eta,alpha", [(0.7, 0.3), (0.5j, 0.4)])
def test_open_integrability(eta, alpha):
    spec = six_vertex_spec(eta)
    bd = uq_invariant_boundary(eta)
    geo = ChainGeometry(L=4, boundary=Boundary.OPEN)
    inh = (-alpha / 2, alpha / 2)
    U = floquet_open(spec, alpha, bd, geo)
    T = open_transfer(spec, -alpha / 2, inh, bd, geo)
    r, c = best_scalar_residual(T, U)
    assert r / frobenius(T) < 1e-12 and abs(c - 1) < 1e-12
    for u in (0.2 + 0.3j, -0.35):
        assert relative_commutator(U, open_transfer(spec, u, inh, bd, geo)) < 1e-12


def test_open_literal_arguments_fail():
    # T°(α/2, {α/2, −α/2}) is not proportional to U°_F(α)
    spec = six_vertex_spec(0.5j)
    bd = uq_invariant_boundary(0.5j)
    geo = ChainGeometry(L=4, boundary=Boundary.OPEN)
    U = floquet_open(spec, 0.4, bd, geo)
    T = open_transfer(spec, 0.2, (0.2, -0.2), bd, geo)
    assert best_scalar_residual(T, U)[0] / frobenius(T) > 0.5


def test_open_unchecked_ktilde_breaks_identity():
    spec = six_vertex_spec(0.5j)
    bd = uq_invariant_boundary(0.5j)
    geo = ChainGeometry(L=4, boundary=Boundary.OPEN)
    U = floquet_open(spec, 0.4, bd, geo, checked_ktilde=False)
    T = open_transfer(spec, -0.2, (-0.2, 0.2), bd, geo)
    assert best_scalar_residual(T, U)[0] / frobenius(T) > 1e-3


@pytest.mark.parametrize("L", [4, 6])
def test_open_brick_wall_scalar(L):
    eta, alpha = 0.5j, 0.4
    spec = six_vertex_spec(eta)
    geo = ChainGeometry(L=L, boundary=Boundary.OPEN)
    U = floquet_open(spec, alpha, uq_invariant_boundary(eta), geo)
    c = cmath.sinh(2 * eta - alpha) / cmath.sinh(eta - alpha)
    assert frobenius(U - c * brick_wall_open(spec, alpha, geo)) < 1e-12


@pytest.mark.parametrize("eta", [0.7, 0.5j])
def test_open_gate_brick_wall(eta):
    geo = ChainGeometry(L=4, boundary=Boundary.OPEN)
    U = brick_wall_open_from_gates(eta, 0.3, geo)
    fp = FloquetParams.from_T(eta, 0.3)
    Uo = floquet_open(six_vertex_spec(eta), fp.alpha, uq_invariant_boundary(eta), geo)
    assert best_scalar_residual(Uo, U)[0] / frobenius(Uo) < 1e-12
    if eta == 0.7:
        assert frobenius(U.conj().T @ U - np.eye(16)) < 1e-12


def test_isotropic_identity():
    assert isotropic_identity_residual(iso_alpha_of_T(0.3), ChainGeometry(L=4)) < 1e-12
    assert isotropic_identity_residual(0.7 + 0.2j, ChainGeometry(L=6)) < 1e-12
