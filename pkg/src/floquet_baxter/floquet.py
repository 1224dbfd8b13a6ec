"""Depth-n Floquet evolution operators, periodic and open, and H_F."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .six_vertex import (
    AnisotropyParams,
    Regime,
    _as_params,
    alpha_of_T,
    exp_gate,
    floquet_period,
    iso_alpha_of_T,
    iso_spec,
    reduce_alpha,
    six_vertex_spec,
)
from .tensor_core import (
    Boundary,
    ChainGeometry,
    GeometryError,
    LogResult,
    apply_one_site,
    apply_two_site,
    frobenius,
    gate_product,
    matrix_log_principal,
    reflection_op,
    translation_inverse_op,
    translation_op,
)
from .transfer import (
    OpenBoundaryData,
    Prefactor,
    k_tilde_plus,
    staggered_transfer,
    transfer_matrix,
)
from .yang_baxter import RMatrixSpec, r_check


@dataclass(frozen=True)
class FloquetParams:
    aniso: AnisotropyParams
    T: float
    alpha: complex
    inhoms: tuple

    @classmethod
    def from_T(cls, eta, T, branch_m: int = 0) -> "FloquetParams":
        p = _as_params(eta)
        if p.regime is Regime.ISOTROPIC:
            a = iso_alpha_of_T(T)
        else:
            if p.regime is Regime.EASY_PLANE:
                T = math.fmod(T, floquet_period(p))
            a = reduce_alpha(alpha_of_T(p, T, branch_m))
        return cls(p, float(T), a, (0j, a))

    @classmethod
    def from_alpha(cls, eta, alpha, T=float("nan")) -> "FloquetParams":
        return cls(_as_params(eta), T, complex(alpha), (0j, complex(alpha)))


@dataclass(frozen=True)
class FloquetOperatorBundle:
    U_F: np.ndarray
    layers: tuple  # (V_1, ..., V_n)
    W: Optional[np.ndarray] = None
    H_F: Optional[np.ndarray] = None
    log_info: Optional[LogResult] = None
    geometry: Optional[ChainGeometry] = None

    @property
    def jordan_risk(self) -> bool:
        return bool(self.log_info is not None and self.log_info.jordan_risk)


# -- periodic ----------------------------------------------------------------

def layer_factors(k: int, spec: RMatrixSpec, inhoms, geo: ChainGeometry) -> list:
    """(gate, i, j) factors of V_k in product order."""
    n = geo.n
    if not 1 <= k <= n:
        raise ValueError(f"layer index k={k} outside 1..{n}")
    if not geo.periodic:
        raise GeometryError("layer_V builds periodic layers; use floquet_open")
    inhoms = tuple(inhoms)
    if len(inhoms) != n:
        raise GeometryError(f"expected {n} inhomogeneities, got {len(inhoms)}")
    out = []
    for m in range(1, geo.L // n + 1):
        for j in range(1, n):
            s = n * (m - 1) + k + j
            out.append((r_check(spec, inhoms[0], inhoms[j]), geo.wrap(s), geo.wrap(s + 1)))
    return out


def layer_V(k: int, spec: RMatrixSpec, inhoms, geo: ChainGeometry) -> np.ndarray:
    return gate_product(layer_factors(k, spec, inhoms, geo), geo)


def local_gate(spec: RMatrixSpec, inhoms, n: int) -> np.ndarray:
    """The n-site gate Π_j Ř_{j,j+1}(u_1, u_{j+1}) on its own n sites."""
    g = ChainGeometry(L=n, N=spec.N, n=1)
    return gate_product([(r_check(spec, inhoms[0], inhoms[j]), j, j + 1) for j in range(1, n)], g)


def floquet_operator(spec: RMatrixSpec, inhoms, geo: ChainGeometry) -> FloquetOperatorBundle:
    """U_F = V_n V_{n−1} ... V_1 together with W = V_n G^{-1}."""
    layers = tuple(layer_V(k, spec, inhoms, geo) for k in range(1, geo.n + 1))
    U = np.eye(geo.dim, dtype=complex)
    for V in reversed(layers):
        U = U @ V
    W = layers[-1] @ translation_inverse_op(geo)
    return FloquetOperatorBundle(U, layers, W, geometry=geo)


def anti_chiral_floquet_operator(spec: RMatrixSpec, inhoms, geo: ChainGeometry) -> np.ndarray:
    """Floquet operator from the reversed local gates
    Ũ = Ř_{m+n−1,m+n−2}(u_n,u_{n−1}) ... Ř_{m+1,m}(u_n,u_1).

    Layer k holds Ũ on the blocks mirrored (m → L−m+1) from those of V_k;
    layers are multiplied in the same order n, ..., 1.
    """
    n, L = geo.n, geo.L
    inhoms = tuple(inhoms)
    if len(inhoms) != n:
        raise GeometryError(f"expected {n} inhomogeneities, got {len(inhoms)}")
    U = np.eye(geo.dim, dtype=complex)
    for k in range(n, 0, -1):
        fac = []
        for m in range(1, L // n + 1):
            lo = L - (n * (m - 1) + k) - n + 1  # first site of the mirrored block
            for j in range(n - 1, 0, -1):
                a, b = geo.wrap(lo + j), geo.wrap(lo + j - 1)
                fac.append((r_check(spec, inhoms[n - 1], inhoms[j - 1]), a, b))
        U = U @ gate_product(fac, geo)
    return U


def anti_chiral_transfer(spec: RMatrixSpec, u, inhoms, geo: ChainGeometry) -> np.ndarray:
    """The commuting family of the anti-chiral circuit: the reflected
    transfer matrix with reversed inhomogeneities."""
    P = reflection_op(geo)
    return P @ transfer_matrix(spec, u, tuple(reversed(tuple(inhoms))), geo) @ P


def relative_commutator(A, B) -> float:
    return frobenius(A @ B - B @ A) / max(frobenius(A) * frobenius(B), 1e-300)


def w_factorization_residual(bundle: FloquetOperatorBundle, geo: ChainGeometry) -> float:
    G = translation_op(geo)
    rhs = np.linalg.matrix_power(bundle.W, geo.n) @ np.linalg.matrix_power(G, geo.n)
    return frobenius(bundle.U_F - rhs)


def regular_identity_residual(spec: RMatrixSpec, inhoms, geo: ChainGeometry) -> float:
    """‖U_F − Tⁿ(0, inhoms) Gⁿ‖ with the unnormalized transfer matrix."""
    if not spec.is_regular:
        raise ValueError("regular_identity_residual needs a regular spec")
    if abs(complex(inhoms[0])) > 1e-15:
        raise ValueError("regular identity needs u_1 = 0")
    U = floquet_operator(spec, inhoms, geo).U_F
    T0 = transfer_matrix(spec, 0.0, inhoms, geo)
    G = translation_op(geo)
    rhs = np.linalg.matrix_power(T0, geo.n) @ np.linalg.matrix_power(G, geo.n)
    return frobenius(U - rhs)


def staggered_normalization(params, alpha, L: int) -> Prefactor:
    """[sinh η sinh(η − α)]^{L}: the scalar between T²(0,{0,α}) G² and U_F."""
    p = _as_params(params)
    return Prefactor().times(cmath.sinh(p.eta), L).times(cmath.sinh(p.eta - alpha), L)


def staggered_identity_residual(params, alpha, geo: ChainGeometry) -> float:
    """‖U_F − T²(0,{0,α}) G² / [sinh η sinh(η−α)]^L‖ with the normalized T."""
    p = _as_params(params)
    U = staggered_floquet(p, alpha, geo).U_F
    T0 = staggered_transfer(p, 0.0, alpha, geo)
    G = translation_op(geo)
    c = staggered_normalization(p, alpha, geo.L).inverse().value()
    return frobenius(U - c * T0 @ T0 @ G @ G)


def staggered_floquet(params, alpha, geo: ChainGeometry, spec: RMatrixSpec | None = None
                      ) -> FloquetOperatorBundle:
    """U_F({0, α}) = Π Ř_{2m−1,2m}(−α) Π Ř_{2m,2m+1}(−α)."""
    if geo.n != 2:
        raise GeometryError("staggered Floquet operator has depth 2")
    p = _as_params(params)
    if spec is None:
        spec = iso_spec() if p.regime is Regime.ISOTROPIC else six_vertex_spec(p)
    return floquet_operator(spec, (0j, complex(alpha)), geo)


def staggered_floquet_from_gates(params, T, geo: ChainGeometry) -> np.ndarray:
    """Same operator from the exponential gates exp(−iT e) (independent route)."""
    g = exp_gate(params, T)
    L = geo.L
    V_odd = gate_product([(g, 2 * m - 1, 2 * m) for m in range(1, L // 2 + 1)], geo)
    V_even = gate_product([(g, 2 * m, geo.wrap(2 * m + 1)) for m in range(1, L // 2 + 1)], geo)
    return V_odd @ V_even


def floquet_hamiltonian(bundle: FloquetOperatorBundle, T: float) -> FloquetOperatorBundle:
    """Attach H_F = (i / 2T) log U_F (principal branch) to the bundle."""
    if not T > 0:
        raise ValueError("floquet_hamiltonian needs T > 0")
    lr = matrix_log_principal(bundle.U_F)
    H = 1j / (2 * T) * lr.log
    return FloquetOperatorBundle(bundle.U_F, bundle.layers, bundle.W, H, lr, bundle.geometry)


# -- open boundary ----------------------------------------------------------

def _require_open(geo: ChainGeometry):
    if geo.boundary is not Boundary.OPEN or geo.n != 2 or geo.L % 2:
        raise GeometryError("open boundary with n = 2 and even L expected")


def floquet_open(spec: RMatrixSpec, alpha, bdata: OpenBoundaryData, geo: ChainGeometry,
                 checked_ktilde: bool = True) -> np.ndarray:
    """U°_F(α) = Π Ř_{2m−1,2m}(−α) K₋,L(α/2) Π Ř^t_{2m,2m+1}(−α) K̃₊,1(α/2)."""
    _require_open(geo)
    L = geo.L
    g = r_check(spec, -alpha)
    out = gate_product([(g, 2 * m - 1, 2 * m) for m in range(1, L // 2 + 1)], geo)
    out = apply_one_site(bdata.K_minus(alpha / 2), L, out, geo, side="right")
    for m in range(1, L // 2):
        out = apply_two_site(g.T, 2 * m, 2 * m + 1, out, geo, side="right")
    Kt = k_tilde_plus(spec, alpha, bdata, checked=checked_ktilde)
    return apply_one_site(Kt, 1, out, geo, side="right")


def brick_wall_open(spec: RMatrixSpec, alpha, geo: ChainGeometry) -> np.ndarray:
    """Π Ř_{2m−1,2m}(−α) Π_{m<L/2} Ř_{2m,2m+1}(−α) with no boundary factors."""
    _require_open(geo)
    L = geo.L
    g = r_check(spec, -alpha)
    fac = [(g, 2 * m - 1, 2 * m) for m in range(1, L // 2 + 1)]
    fac += [(g, 2 * m, 2 * m + 1) for m in range(1, L // 2)]
    return gate_product(fac, geo)


def isotropic_identity_residual(alpha, geo: ChainGeometry) -> float:
    """‖U_F − T_st(0)² G² / [i(i−α)]^L‖ for the rational chain, with
    T_st(u) = [i(i−α)]^{L/2} Tr M(u, {0, α})."""
    L = geo.L
    spec = iso_spec()
    U = staggered_floquet(0.0, alpha, geo, spec=spec).U_F
    c = 1j * (1j - alpha)
    T0 = c ** (L // 2) * transfer_matrix(spec, 0.0, (0j, complex(alpha)), geo)
    G = translation_op(geo)
    return frobenius(U - T0 @ T0 @ G @ G / c ** L)


def brick_wall_open_from_gates(params, T, geo: ChainGeometry) -> np.ndarray:
    """Open brick wall of exp(−iT e) gates; equals U°_F up to a scalar."""
    _require_open(geo)
    g = exp_gate(params, T)
    L = geo.L
    fac = [(g, 2 * m - 1, 2 * m) for m in range(1, L // 2 + 1)]
    fac += [(g, 2 * m, 2 * m + 1) for m in range(1, L // 2)]
    return gate_product(fac, geo)
