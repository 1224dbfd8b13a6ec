"""Monodromy and transfer matrices, periodic and open, plus the staggered
Hamiltonian of the 6-vertex chain."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .six_vertex import _as_params, six_vertex_spec, tl_chain_generators, tl_generator
from .tensor_core import (
    Boundary,
    ChainGeometry,
    GeometryError,
    apply_two_site,
    frobenius,
    sigma,
)
from .yang_baxter import RMatrixSpec, boundary_ybe_residual, r_check


# -- scalar prefactors --------------------------------------------------------

@dataclass(frozen=True)
class Prefactor:
    """Product of base**exponent terms, evaluated in log space."""
    terms: tuple = ()

    def times(self, base, exponent) -> "Prefactor":
        return Prefactor(self.terms + ((complex(base), exponent),))

    def inverse(self) -> "Prefactor":
        return Prefactor(tuple((b, -e) for b, e in self.terms))

    def __mul__(self, other: "Prefactor") -> "Prefactor":
        return Prefactor(self.terms + other.terms)

    def log(self) -> complex:
        return sum((e * cmath.log(b) for b, e in self.terms), 0j)

    def value(self) -> complex:
        return cmath.exp(self.log()) if self.terms else 1.0 + 0j


# -- monodromy -----------------------------------------------------------------

@dataclass(frozen=True)
class Monodromy:
    blocks: np.ndarray  # (N, N, D, D): auxiliary matrix elements
    u: complex
    inhoms: tuple
    prefactor: Prefactor = field(default_factory=Prefactor)

    def block(self, a: int, b: int) -> np.ndarray:
        return self.blocks[a, b]

    @property
    def A(self):
        return self.blocks[0, 0]

    @property
    def B(self):
        return self.blocks[0, 1]

    @property
    def C(self):
        return self.blocks[1, 0]

    @property
    def D(self):
        return self.blocks[1, 1]

    def trace(self) -> np.ndarray:
        return np.einsum("aaij->ij", self.blocks)

    def full(self) -> np.ndarray:
        """The monodromy as one (N·D)×(N·D) matrix, auxiliary space leftmost."""
        N, _, D, _ = self.blocks.shape
        return self.blocks.transpose(0, 2, 1, 3).reshape(N * D, N * D)


def _aux_geometry(geo: ChainGeometry, extra: int = 1) -> ChainGeometry:
    return ChainGeometry(L=geo.L + extra, N=geo.N, n=1, max_qubits=geo.max_qubits + 2 * extra)


def _blocks_from_full(M: np.ndarray, N: int) -> np.ndarray:
    D = M.shape[0] // N
    return M.reshape(N, D, N, D).transpose(0, 2, 1, 3)


def _aux_product(factors, geo: ChainGeometry) -> np.ndarray:
    """Ordered product of gates (g, k) acting on (aux, chain site k); the
    auxiliary space is site 1 of an (L+1)-site geometry."""
    ext = _aux_geometry(geo)
    out = np.eye(ext.dim, dtype=complex)
    for g, k in factors:
        out = apply_two_site(g, 1, k + 1, out, ext, side="right")
    return out


def _check_inhoms(inhoms, geo: ChainGeometry) -> tuple:
    inhoms = tuple(complex(x) for x in inhoms)
    if len(inhoms) != geo.n:
        raise GeometryError(f"expected {geo.n} inhomogeneities, got {len(inhoms)}")
    return inhoms


def monodromy(spec: RMatrixSpec, u, inhoms: Sequence, geo: ChainGeometry) -> Monodromy:
    """M_a(u) = Π_m Π_j R_{a, n(m−1)+j}(u, u_j), first factor leftmost."""
    if not geo.periodic:
        raise GeometryError("monodromy: periodic geometry expected; use open_transfer")
    inhoms = _check_inhoms(inhoms, geo)
    n = geo.n
    factors = [(spec.R(u, inhoms[(k - 1) % n]), k) for k in range(1, geo.L + 1)]
    M = _aux_product(factors, geo)
    return Monodromy(_blocks_from_full(M, geo.N), complex(u), inhoms)


def staggered_prefactor(params, u, alpha, L: int) -> Prefactor:
    """[sinh(u+η) sinh(u−α+η)]^{L/2}."""
    p = _as_params(params)
    return (Prefactor().times(cmath.sinh(u + p.eta), L // 2)
            .times(cmath.sinh(u - alpha + p.eta), L // 2))


def transfer_matrix(spec: RMatrixSpec, u, inhoms, geo: ChainGeometry,
                    prefactor: Prefactor | None = None) -> np.ndarray:
    T = monodromy(spec, u, inhoms, geo).trace()
    if prefactor is not None:
        T = prefactor.value() * T
    return T


def staggered_transfer(params, u, alpha, geo: ChainGeometry, normalized: bool = True,
                       spec: RMatrixSpec | None = None) -> np.ndarray:
    """T(u, α) of the staggered 6-vertex model, inhomogeneities {0, α}.

    With ``normalized`` the scalar [sinh(u+η) sinh(u−α+η)]^{L/2} is included.
    """
    p = _as_params(params)
    spec = six_vertex_spec(p) if spec is None else spec
    pre = staggered_prefactor(p, u, alpha, geo.L) if normalized else None
    return transfer_matrix(spec, u, (0.0, alpha), geo, pre)


def exchange_residual(spec: RMatrixSpec, u, v, inhoms, geo: ChainGeometry) -> float:
    """‖R_ab(u,v) M_a(u) M_b(v) − M_b(v) M_a(u) R_ab(u,v)‖ on aux⊗aux⊗chain."""
    inhoms = _check_inhoms(inhoms, geo)
    n = geo.n
    ext = _aux_geometry(geo, extra=2)
    eye = np.eye(ext.dim, dtype=complex)

    def M(site, x):
        out = eye
        for k in range(1, geo.L + 1):
            out = apply_two_site(spec.R(x, inhoms[(k - 1) % n]), site, k + 2, out, ext, side="right")
        return out

    Ma, Mb = M(1, u), M(2, v)
    Rab = apply_two_site(spec.R(u, v), 1, 2, eye, ext)
    return frobenius(Rab @ Ma @ Mb - Mb @ Ma @ Rab)


def two_row_transfer(params, u, alpha, geo: ChainGeometry) -> np.ndarray:
    """T̃(u, α) = T(u, α) T(u+α, α)."""
    return staggered_transfer(params, u, alpha, geo) @ staggered_transfer(params, u + alpha, alpha, geo)


def momentum_normalization(params, alpha, L: int) -> Prefactor:
    """[sinh²η sinh(η−α) sinh(η+α)]^{L/2}, the scalar turning T̃(0, α) into G^{-2}."""
    p = _as_params(params)
    eta = p.eta
    return (Prefactor().times(cmath.sinh(eta), L).times(cmath.sinh(eta - alpha), L // 2)
            .times(cmath.sinh(eta + alpha), L // 2))


def staggered_hamiltonian_coefficients(eta, alpha) -> tuple:
    den = cmath.cosh(2 * eta) - cmath.cosh(2 * alpha)
    if abs(den) < 1e-14:
        raise ZeroDivisionError("cosh 2η = cosh 2α: staggered Hamiltonian coefficients diverge")
    cA = cmath.sinh(alpha) ** 2 * cmath.cosh(eta) / den
    cC = cmath.sinh(alpha) * cmath.cosh(alpha) * cmath.sinh(eta) / den
    c0 = cmath.cosh(eta) * (cmath.cosh(2 * eta) - cmath.cosh(alpha) ** 2) / den
    return cA, cC, c0


def staggered_hamiltonian_closed(params, alpha, geo: ChainGeometry) -> np.ndarray:
    """−Σ_m (e_m + c_A {e_m, e_{m+1}} − (−1)^m c_C [e_m, e_{m+1}] − c_0)."""
    if not geo.periodic or geo.n != 2:
        raise GeometryError("staggered Hamiltonian needs a periodic depth-2 geometry")
    p = _as_params(params)
    cA, cC, c0 = staggered_hamiltonian_coefficients(p.eta, alpha)
    es = tl_chain_generators(tl_generator(p), geo)
    L = geo.L
    H = np.zeros((geo.dim, geo.dim), dtype=complex)
    for m in range(1, L + 1):
        a, b = es[m - 1], es[m % L]
        H -= a + cA * (a @ b + b @ a) - (-1) ** m * cC * (a @ b - b @ a)
    H += L * c0 * np.eye(geo.dim)
    return H


def staggered_hamiltonian_fd(params, alpha, geo: ChainGeometry, h: float = 1e-5) -> np.ndarray:
    """(sinh η / 2) ∂_u log T̃(u, α) at u = 0 by a central difference."""
    p = _as_params(params)
    Tp = two_row_transfer(p, h, alpha, geo)
    Tm = two_row_transfer(p, -h, alpha, geo)
    T0 = two_row_transfer(p, 0.0, alpha, geo)
    dT = (Tp - Tm) / (2 * h)
    return cmath.sinh(p.eta) / 2 * np.linalg.solve(T0, dT)


def spin_flip(geo: ChainGeometry) -> np.ndarray:
    """Π_m σ^x_m."""
    X = sigma("x")
    out = np.array([[1.0 + 0j]])
    for _ in range(geo.L):
        out = np.kron(out, X)
    return out


def dagger_identity_residual(params, u, alpha, geo: ChainGeometry) -> float:
    """Relative ‖T†(u, α) − X T(ū − η, ᾱ) X‖ with X the global spin flip."""
    p = _as_params(params)
    T = staggered_transfer(p, u, alpha, geo)
    X = spin_flip(geo)
    rhs = X @ staggered_transfer(p, np.conj(u) - p.eta, np.conj(alpha), geo) @ X
    return frobenius(T.conj().T - rhs) / max(frobenius(T), 1e-300)


# -- open boundary ----------------------------------------------------------

@dataclass(frozen=True)
class OpenBoundaryData:
    K_minus: Callable
    K_plus: Callable
    w: np.ndarray

    def admission_residual(self, spec: RMatrixSpec, points=None) -> float:
        if points is None:
            points = [(0.31 + 0.1j, -0.2 + 0.05j), (0.7, 0.1), (-0.4 + 0.3j, 0.25),
                      (0.15j, 0.5 - 0.2j), (0.9, -0.6 + 0.1j)]
        return max(max(boundary_ybe_residual(spec, self.K_minus, self.K_plus, u, v))
                   for u, v in points)

    def validated(self, spec: RMatrixSpec, tol: float = 1e-9) -> "OpenBoundaryData":
        r = self.admission_residual(spec)
        if r > tol:
            raise ValueError(f"boundary data violates the boundary YBE (residual {r:.3e})")
        return self


def uq_invariant_boundary(params) -> OpenBoundaryData:
    """K₋ = 1 and K₊ = w = diag(e^η, e^{−η})."""
    p = _as_params(params)
    w = np.diag([cmath.exp(p.eta), cmath.exp(-p.eta)]).astype(complex)
    return OpenBoundaryData(lambda u: np.eye(2, dtype=complex), lambda u, _w=w: _w, w)


def _require_open(geo: ChainGeometry):
    if geo.boundary is not Boundary.OPEN or geo.n != 2 or geo.L % 2:
        raise GeometryError("open boundary with n = 2 and even L expected")


def open_monodromy(spec: RMatrixSpec, u, inhoms, bdata: OpenBoundaryData,
                   geo: ChainGeometry) -> np.ndarray:
    """M°_a(u) = M_a(u) K₋,a(u) M_a^{-1}(−u) K₊,a(u) on aux⊗chain.

    The inverse monodromy is the reversed product of transposed factors
    R^t_{a,k}(u + u_j), never a numerical inverse.
    """
    _require_open(geo)
    if not (spec.is_difference_form and spec.is_regular and spec.crossing is not None):
        raise ValueError("open transfer needs a regular difference-form spec with crossing")
    u1, u2 = (complex(x) for x in inhoms)
    inh = (u1, u2)
    L = geo.L
    fwd = [(spec.R(u - inh[(k - 1) % 2]), k) for k in range(1, L + 1)]
    bwd = [(spec.R(u + inh[(k - 1) % 2]).T, k) for k in range(L, 0, -1)]
    ext = _aux_geometry(geo)
    out = _aux_product(fwd, geo)
    Km = np.kron(bdata.K_minus(u), np.eye(geo.dim))
    out = out @ Km
    for g, k in bwd:
        out = apply_two_site(g, 1, k + 1, out, ext, side="right")
    return out @ np.kron(bdata.K_plus(u), np.eye(geo.dim))


def open_transfer(spec: RMatrixSpec, u, inhoms, bdata: OpenBoundaryData,
                  geo: ChainGeometry) -> np.ndarray:
    M = open_monodromy(spec, u, inhoms, bdata, geo)
    return np.einsum("aiaj->ij", M.reshape(geo.N, geo.dim, geo.N, geo.dim))


def k_tilde_plus(spec: RMatrixSpec, alpha, bdata: OpenBoundaryData, checked: bool = True) -> np.ndarray:
    """K̃₊,1 = Tr_a[Ř^t_{a,1}(−α) K₊,a(α/2)] as an N×N operator on site 1.

    ``checked=False`` uses R^t in place of Ř^t (the other reading).
    """
    N = spec.N
    g = (r_check(spec, -alpha) if checked else spec.R(-alpha)).T
    K = np.kron(bdata.K_plus(alpha / 2), np.eye(N))
    t = (g @ K).reshape(N, N, N, N)
    return np.einsum("aiaj->ij", t)
