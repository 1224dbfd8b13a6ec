import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floquet_baxter import bethe
from floquet_baxter.bethe import RootCategory
from floquet_baxter.floquet import staggered_floquet
from floquet_baxter.tensor_core import ChainGeometry
from floquet_baxter.transfer import staggered_transfer

ETA, ALPHA = 0.7, 0.3


def _magnetization_block(U, L, M):
    # computational basis, bit 1 = down spin; site 1 is the most significant bit
    idx = [i for i in range(2 ** L) if bin(i).count("1") == M]
    return U[np.ix_(idx, idx)]


def test_lambda_roundtrip():
    z = 0.3 + 0.2j
    assert bethe.lambda_to_u(bethe.u_to_lambda(z, 0.4, 0.5j), 0.4, 0.5j) == pytest.approx(z)


def test_m0_is_reference_state():
    (sol,) = bethe.solve_bethe(4, 0, ETA, ALPHA)
    assert sol.roots_u == () and sol.residual == 0.0
    assert bethe.uf_eigenvalue(sol, ETA, ALPHA) == 1
    geo = ChainGeometry(L=4)
    U = staggered_floquet(ETA, ALPHA, geo).U_F
    assert abs(U[0, 0] - 1) < 1e-13


def test_m_above_half_raises():
    with pytest.raises(ValueError):
        bethe.solve_bethe(4, 3, ETA, ALPHA)


@pytest.mark.parametrize("eta,alpha", [(0.7, 0.3), (0.5j, 0.4)])
@pytest.mark.parametrize("L", [2, 4, 6])
def test_one_magnon_complete(eta, alpha, L):
    # one magnon: the G^{-2} eigenvalue is an (L/2)-th root of unity and
    # the solutions exhaust the single-flip block of U_F
    sols = bethe.solve_bethe(L, 1, eta, alpha)
    U = _magnetization_block(staggered_floquet(eta, alpha, ChainGeometry(L=L)).U_F, L, 1)
    ev = np.linalg.eigvals(U)
    ms = np.array([bethe.uf_eigenvalue(s, eta, alpha) for s in sols])
    for s in sols:
        z = bethe.g2_inverse_eigenvalue(s, eta, alpha)
        assert abs(z ** (L // 2) - 1) < 1e-10
    assert len(sols) == L
    assert max(np.min(np.abs(ms - e)) for e in ev) < 1e-9


def test_non_solution_has_large_residual():
    assert bethe.bethe_residual([0.1 + 0.2j, -0.4], ETA, ALPHA, 4) > 1e-2


def test_residual_pole_raises():
    with pytest.raises(bethe.BethePoleError):
        bethe.bethe_residual([ALPHA], ETA, ALPHA, 4)


@pytest.mark.parametrize("eta,alpha", [(0.7, 0.3), (0.5j, 0.4)])
@pytest.mark.parametrize("M", [1, 2])
def test_eigenvalues_match_ed(eta, alpha, M):
    L = 4
    geo = ChainGeometry(L=L)
    U = staggered_floquet(eta, alpha, geo).U_F
    mu = np.linalg.eigvals(_magnetization_block(U, L, M))
    sols = bethe.solve_bethe(L, M, eta, alpha)
    assert sols
    u = 0.21 + 0.13j
    T = staggered_transfer(eta, u, alpha, geo)
    for s in sols:
        assert s.residual < 1e-10
        m = bethe.uf_eigenvalue(s, eta, alpha)
        assert np.min(np.abs(mu - m)) < 1e-9
        psi = bethe.bethe_state(s, eta, alpha, geo)
        psi /= np.linalg.norm(psi)
        assert np.linalg.norm(U @ psi - m * psi) < 1e-9
        t = bethe.transfer_eigenvalue(u, s, eta, alpha, L)
        assert np.linalg.norm(T @ psi - t * psi) < 1e-9
        assert bethe.tq_residual(u, s, eta, alpha, L) < 1e-12


def test_lambda_form_agrees():
    for s in bethe.solve_bethe(4, 2, 0.5j, 0.4):
        a = bethe.uf_eigenvalue(s, 0.5j, 0.4)
        b = bethe.uf_eigenvalue_lambda(s.roots_lambda, 0.5j, 0.4)
        assert abs(a - b) < 1e-12


def test_hf_eigenvalue_is_log_of_uf():
    T = 0.3
    from floquet_baxter.floquet import FloquetParams
    fp = FloquetParams.from_T(0.5j, T)
    for s in bethe.solve_bethe(4, 1, fp.aniso, fp.alpha):
        E = bethe.hf_eigenvalue(s, fp.aniso, fp.alpha, T)
        mu = bethe.uf_eigenvalue(s, fp.aniso, fp.alpha)
        assert abs(cmath.exp(-2j * T * E) - mu) < 1e-12
        assert abs(E.imag) < 1e-10


def test_easy_plane_real_alpha_unimodular():
    for M in (1, 2):
        for s in bethe.solve_bethe(6, M, 0.5j, 0.4):
            assert abs(abs(bethe.uf_eigenvalue(s, 0.5j, 0.4)) - 1) < 1e-9
            assert RootCategory.UNCLASSIFIED not in s.categories


def test_transfer_eigenvalue_pole_raises():
    s = bethe.solve_bethe(2, 1, ETA, ALPHA)[0]
    with pytest.raises(bethe.BethePoleError):
        bethe.transfer_eigenvalue(s.roots_u[0], s, ETA, ALPHA, 2)


def test_solver_deterministic():
    a = bethe.solve_bethe(4, 2, 0.5j, 0.4)
    b = bethe.solve_bethe(4, 2, 0.5j, 0.4)
    assert [s.roots_u for s in a] == [s.roots_u for s in b]


def test_classify_roots():
    g = 0.5
    cats = bethe.classify_roots([0.3, 0.1 + 1j * math.pi / 2, 0.2 + 0.4j, 0.2 - 0.4j, 0.5 + 0.3j], 1j * g)
    assert cats == (RootCategory.REAL_LINE, RootCategory.PI_HALF_LINE,
                    RootCategory.CONJUGATE_PAIR_MEMBER, RootCategory.CONJUGATE_PAIR_MEMBER,
                    RootCategory.UNCLASSIFIED)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=4))
def test_conjugation_constraint_real_roots_satisfy(xs):
    assert bethe.conjugation_constraint_residual(xs, 0.5j) < 1e-12


def test_conjugation_constraint_conjugate_pair_and_violation():
    assert bethe.conjugation_constraint_residual([0.2 + 0.3j, 0.2 - 0.3j], 0.5j) < 1e-12
    assert bethe.conjugation_constraint_residual([0.2 + 0.3j], 0.5j) > 1e-3


def test_constraint_alias():
    assert bethe.constraint_check_B5 is bethe.conjugation_constraint_residual
