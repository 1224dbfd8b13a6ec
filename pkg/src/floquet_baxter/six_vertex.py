"""Temperley-Lieb generators, the 6-vertex R matrix and the Floquet gate."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math
from typing import Optional

import numpy as np
import scipy.linalg

from .tensor_core import (
    ChainGeometry,
    embed_two_site,
    frobenius,
    permutation_op,
    sigma,
    translation_inverse_op,
    translation_op,
)
from .yang_baxter import CrossingData, PoleError, RMatrixSpec

ROOT_DENOMINATOR_MAX = 64
POLE_TOL = 1e-13  # |sinh(u+η)| below this is treated as the pole


class Regime(str, Enum):
    EASY_AXIS = "easy_axis"
    EASY_PLANE = "easy_plane"
    ISOTROPIC = "isotropic"
    GENERIC = "generic"  # complex η off both axes


@dataclass(frozen=True)
class RootOfUnity:
    l1: int
    l2: int
    epsilon: int


@dataclass(frozen=True)
class AnisotropyParams:
    eta: complex
    q: complex
    beta: complex
    delta: complex
    regime: Regime
    root_of_unity: Optional[RootOfUnity] = None

    @classmethod
    def from_eta(cls, eta) -> "AnisotropyParams":
        eta = complex(eta)
        q = cmath.exp(eta)
        return cls(eta=eta, q=q, beta=q + 1 / q, delta=cmath.cosh(eta),
                   regime=_classify_eta(eta), root_of_unity=_detect_root(eta))

    @property
    def gamma(self) -> float:
        """Im η for easy-plane anisotropy."""
        return self.eta.imag


def _classify_eta(eta: complex, tol: float = 1e-14) -> Regime:
    if abs(eta) < tol or (abs(eta.real) < tol and abs(eta.imag - math.pi) < tol):
        return Regime.ISOTROPIC
    if abs(eta.imag) < tol:
        return Regime.EASY_AXIS
    if abs(eta.real) < tol and 0 < eta.imag < math.pi:
        return Regime.EASY_PLANE
    return Regime.GENERIC


def _detect_root(eta: complex, tol: float = 1e-12) -> Optional[RootOfUnity]:
    if abs(eta.real) > tol or abs(eta.imag) < tol:
        return None
    x = eta.imag / math.pi
    f = Fraction(x).limit_denominator(ROOT_DENOMINATOR_MAX)
    if abs(float(f) - x) > tol:
        return None
    l1, l2 = f.numerator, f.denominator
    return RootOfUnity(l1, l2, 2 if l1 % 2 else 1)


def _as_params(p) -> AnisotropyParams:
    return p if isinstance(p, AnisotropyParams) else AnisotropyParams.from_eta(p)


# -- TL generator -----------------------------------------------------------

def tl_generator_from_pauli(q: complex, sz_sign: float = 1.0) -> np.ndarray:
    """e_{1,2} assembled from Pauli strings; ``sz_sign`` flips the
    antisymmetric σ^z term (only useful as a negative control)."""
    X, Y, Z, I = sigma("x"), sigma("y"), sigma("z"), sigma("i")
    b = q + 1 / q
    return (b / 4 * np.kron(I, I)
            - 0.5 * (np.kron(X, X) + np.kron(Y, Y) + b / 2 * np.kron(Z, Z))
            - sz_sign * (q - 1 / q) / 4 * (np.kron(Z, I) - np.kron(I, Z)))


def tl_generator(params) -> np.ndarray:
    p = _as_params(params)
    q = p.q
    e = np.zeros((4, 4), dtype=complex)
    e[1, 1], e[2, 2] = 1 / q, q
    e[1, 2] = e[2, 1] = -1
    return e


def tl_chain_generators(e: np.ndarray, geo: ChainGeometry) -> list:
    """[e_1, ..., e_L] with e_m on (m, m+1) and e_L on (L, 1)."""
    last = geo.L if geo.periodic else geo.L - 1
    return [embed_two_site(e, m, geo.wrap(m + 1), geo) for m in range(1, last + 1)]


def atl_relations_residual(params, geo: ChainGeometry, e: np.ndarray | None = None) -> float:
    if not geo.periodic or geo.L < 4:
        raise ValueError("aTL relations are checked on periodic chains with L >= 4")
    p = _as_params(params)
    e = tl_generator(p) if e is None else e
    es = tl_chain_generators(e, geo)
    L = geo.L
    G, Gi = translation_op(geo), translation_inverse_op(geo)
    res = 0.0
    for m in range(L):
        a = es[m]
        res = max(res, frobenius(a @ a - p.beta * a))
        for nb in ((m + 1) % L, (m - 1) % L):
            res = max(res, frobenius(a @ es[nb] @ a - a))
        res = max(res, frobenius(G @ a @ Gi - es[(m + 1) % L]))
        for k in range(L):
            if min((m - k) % L, (k - m) % L) >= 2:
                res = max(res, frobenius(a @ es[k] - es[k] @ a))
    return res


# -- R matrices ---------------------------------------------------------------

def six_vertex_R(u, eta) -> np.ndarray:
    """R(u) with the 1/sinh(u+η) normalization."""
    s = cmath.sinh(u + eta)
    if abs(s) < POLE_TOL:
        raise PoleError(f"6-vertex pole at u = {u} (sinh(u+η) = 0)", u)
    su, se = cmath.sinh(u), cmath.sinh(eta)
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = R[3, 3] = 1.0
    R[1, 1] = R[2, 2] = su / s
    R[1, 2] = cmath.exp(u) * se / s
    R[2, 1] = cmath.exp(-u) * se / s
    return R


def crossing_v(eta) -> np.ndarray:
    # The relative sign is needed for R(u) ∝ v_a R^{t_b}(−u−η) v_a^{-1};
    # w = vᵗv = diag(e^η, e^{−η}) does not see it.
    return np.array([[0, cmath.exp(-eta / 2)], [-cmath.exp(eta / 2), 0]], dtype=complex)


def six_vertex_spec(params) -> RMatrixSpec:
    p = _as_params(params)
    if p.regime is Regime.ISOTROPIC:
        raise ValueError("six_vertex_spec needs a non-isotropic η; use iso_spec")
    eta = p.eta
    v = crossing_v(eta)

    def evaluate(u, w, _eta=eta):
        return six_vertex_R(u - w, _eta)

    return RMatrixSpec(N=2, evaluate=evaluate, is_difference_form=True, is_regular=True,
                       crossing=CrossingData(eta, v), name=f"6v(eta={eta})",
                       poles=(-eta,), pole_period=1j * math.pi)


def r_check_6v(u, params) -> np.ndarray:
    """Ř(u) = 1 − sinh u / sinh(u+η) · e, directly from the TL generator."""
    p = _as_params(params)
    s = cmath.sinh(u + p.eta)
    if abs(s) < POLE_TOL:
        raise PoleError(f"6-vertex pole at u = {u}", u)
    return np.eye(4) - cmath.sinh(u) / s * tl_generator(p)


def iso_tl_generator() -> np.ndarray:
    return tl_generator(0.0)


def iso_spec() -> RMatrixSpec:
    e = iso_tl_generator()
    P = permutation_op(2)

    def evaluate(u, w):
        x = u - w
        if abs(x + 1j) < POLE_TOL:
            raise PoleError(f"rational pole at u = {x}", x)
        return (np.eye(4) - x / (x + 1j) * e) @ P

    return RMatrixSpec(N=2, evaluate=evaluate, is_difference_form=True, is_regular=True,
                       name="iso", poles=(-1j,))


def iso_alpha_of_T(T) -> complex:
    z = cmath.exp(2j * T)
    if abs(z + 1) < 1e-14:
        raise ValueError(f"iso_alpha_of_T: e^(2iT) = -1 at T = {T}")
    return 1j * (z - 1) / (z + 1)


# -- exponential gate and α(T) -----------------------------------------------

def _require_beta(p: AnisotropyParams):
    if abs(p.beta) < 1e-12:
        raise ValueError("β = 0 (η = iπ/2) is not supported")


def exp_gate(params, T) -> np.ndarray:
    """exp(−iT e) in the closed form 1 + (e^{−iβT} − 1)/β · e."""
    p = _as_params(params)
    _require_beta(p)
    return np.eye(4) + (cmath.exp(-1j * p.beta * T) - 1) / p.beta * tl_generator(p)


def exp_gate_expm(params, T) -> np.ndarray:
    """Same gate through a generic matrix exponential (independent route)."""
    p = _as_params(params)
    return scipy.linalg.expm(-1j * T * tl_generator(p))


def alpha_of_T(params, T, branch_m: int = 0) -> complex:
    p = _as_params(params)
    if p.regime is Regime.ISOTROPIC:
        raise ValueError("alpha_of_T: isotropic η; use iso_alpha_of_T")
    _require_beta(p)
    c = p.delta
    num = cmath.cosh(p.eta + 1j * T * c)
    den = cmath.cosh(p.eta - 1j * T * c)
    if abs(num) < 1e-14 or abs(den) < 1e-14:
        raise ValueError(f"alpha_of_T: branch point of the log at T = {T}")
    return -0.5 * cmath.log(num / den) + 1j * math.pi * branch_m


def reduce_alpha(alpha, tol: float = 1e-9) -> complex:
    """α modulo iπ with Im α in (−π/2, π/2]; values within ``tol`` of −π/2
    are mapped to +π/2."""
    im = math.remainder(alpha.imag, math.pi)  # in [-π/2, π/2]
    if im <= -math.pi / 2 + tol:
        im += math.pi
    return complex(alpha.real, im)


def floquet_period(params) -> float:
    """Period of U_F in T: π/|cosh η| (real for easy-plane and easy-axis η)."""
    p = _as_params(params)
    _require_beta(p)
    return math.pi / abs(p.delta)
