"""Spectra of U_F and H_F: regimes, unimodularity, GPT symmetry, the
α → ±∞ limit operator and roots of unity."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .floquet import (
    FloquetOperatorBundle,
    FloquetParams,
    staggered_floquet,
    staggered_floquet_from_gates,
)
from .six_vertex import (
    Regime,
    _as_params,
    tl_generator,
)
from .tensor_core import (
    ChainGeometry,
    eig,
    embed_two_site,
    frobenius,
    gate_product,
    principal_log,
    reflection_op,
    translation_inverse_op,
    translation_op,
)

TRANSITION_TOL = 1e-9
CLUSTER_RADIUS = 1e-4


class FloquetRegime(str, Enum):
    I = "I"
    II = "II"
    TRANSITION = "transition"
    EASY_AXIS = "easy_axis"
    ISOTROPIC = "isotropic"


def regime_boundaries(params) -> tuple[float, float, float]:
    """(T₁, T₂, period) for easy-plane η = iγ; Regime II is T₁ < T < T₂.

    Substituting η = iγ the complex bounds become (π ∓ 2γ)/(2 cos γ) for
    γ < π/2; for γ > π/2 cos γ < 0 and the bounds read (2γ − π)/(2|cos γ|)
    and (3π − 2γ)/(2|cos γ|).
    """
    p = _as_params(params)
    if p.regime is not Regime.EASY_PLANE:
        raise ValueError("regime boundaries are defined for easy-plane η")
    g = p.gamma
    c = math.cos(g)
    if abs(c) < 1e-12:
        raise ValueError("γ = π/2 (β = 0) is not supported")
    period = math.pi / abs(c)
    if g < math.pi / 2:
        return (math.pi - 2 * g) / (2 * c), (math.pi + 2 * g) / (2 * c), period
    return (2 * g - math.pi) / (2 * abs(c)), (3 * math.pi - 2 * g) / (2 * abs(c)), period


def classify_regime(params, T: float, tol: float = TRANSITION_TOL) -> FloquetRegime:
    p = _as_params(params)
    if p.regime is Regime.EASY_AXIS:
        return FloquetRegime.EASY_AXIS
    if p.regime is Regime.ISOTROPIC:
        return FloquetRegime.ISOTROPIC
    t1, t2, period = regime_boundaries(p)
    t = math.fmod(T, period)
    if t < 0:
        t += period
    if abs(t - t1) <= tol or abs(t - t2) <= tol:
        return FloquetRegime.TRANSITION
    return FloquetRegime.II if t1 < t < t2 else FloquetRegime.I


# -- spectrum ---------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    uf_eigenvalues: np.ndarray
    hf_eigenvalues: np.ndarray
    max_abs_deviation_from_unit_circle: float
    regime: FloquetRegime
    conjugation_pairing: list
    jordan_risk: bool
    eig_cond: float = float("nan")

    @property
    def max_pairing_residual(self) -> float:
        return max((r for _, _, r in self.conjugation_pairing), default=0.0)

    @property
    def max_hf_imag(self) -> float:
        return float(np.max(np.abs(self.hf_eigenvalues.imag)))


def hf_from_uf(mu: np.ndarray, T: float) -> np.ndarray:
    return 1j / (2 * T) * principal_log(mu)


def conjugate_pairs(E: np.ndarray, real_period: float | None = None) -> list:
    """Greedy matching of every E_i to the nearest unused conj(E_j).

    Real parts are compared modulo ``real_period`` when given (branch
    ambiguity of the log). Returns (i, j, residual) triples; i == j for
    self-conjugate (real) values.
    """
    E = np.asarray(E)
    used = np.zeros(len(E), bool)
    out = []
    for i in range(len(E)):
        if used[i]:
            continue
        d = E - np.conj(E[i])
        if real_period:
            d = d - real_period * np.round(d.real / real_period)
        d = np.abs(d)
        d[used] = np.inf
        j = int(np.argmin(d))
        out.append((i, j, float(d[j])))
        used[i] = used[j] = True
    return out


def analyze(bundle: FloquetOperatorBundle, params: FloquetParams) -> SpectrumReport:
    res = eig(bundle.U_F)
    mu = res.values
    T = params.T
    E = hf_from_uf(mu, T)
    dev = float(np.max(np.abs(np.abs(mu) - 1)))
    pairs = conjugate_pairs(E, math.pi / T)
    return SpectrumReport(mu, E, dev, classify_regime(params.aniso, T), pairs,
                          res.jordan_risk, res.cond)


def analyze_T(eta, T: float, geo: ChainGeometry, branch_m: int = 0) -> SpectrumReport:
    fp = FloquetParams.from_T(eta, T, branch_m)
    return analyze(staggered_floquet(fp.aniso, fp.alpha, geo), fp)


def inverse_conjugate_residual(mu: np.ndarray) -> float:
    """Worst distance of the spectrum to its image under μ → 1/μ̄."""
    img = 1 / np.conj(mu)
    return float(max(np.min(np.abs(mu - x)) for x in img))


# -- GPT symmetry -----------------------------------------------------------

def gpt_residual(U: np.ndarray, geo: ChainGeometry) -> float:
    """‖G P conj(U) P G^{-1} U − 1‖: the anti-unitary G·P·T maps U to U^{-1}."""
    if isinstance(U, FloquetOperatorBundle):
        U = U.U_F
    G, Gi, P = translation_op(geo), translation_inverse_op(geo), reflection_op(geo)
    return frobenius(G @ P @ np.conj(U) @ P @ Gi @ U - np.eye(geo.dim))


def tl_time_reversal_residual(params) -> float:
    """‖conj(e_{a,b}) − e_{b,a}‖ on two sites (zero for easy-plane η)."""
    from .tensor_core import permutation_op
    e = tl_generator(params)
    P = permutation_op(2)
    return frobenius(np.conj(e) - P @ e @ P)


def parity_residuals(params, geo: ChainGeometry) -> tuple[float, float]:
    """P² = 1 and P e_{m,m+1} P = e_{L−m+1,L−m} (the reflected ordered
    pair); the second is reported as a max over m."""
    P = reflection_op(geo)
    r1 = frobenius(P @ P - np.eye(geo.dim))
    e = tl_generator(params)
    L = geo.L
    r2 = 0.0
    for m in range(1, L):
        lhs = P @ embed_two_site(e, m, m + 1, geo) @ P
        rhs = embed_two_site(e, L - m + 1, L - m, geo)
        r2 = max(r2, frobenius(lhs - rhs))
    return r1, r2


# -- α → ±∞ --------------------------------------------------------------

def limit_gate(params, sign: int) -> np.ndarray:
    p = _as_params(params)
    return np.eye(4) - cmath.exp(-sign * p.eta) * tl_generator(p)


def limit_operator(params, sign: int, geo: ChainGeometry) -> np.ndarray:
    """Π (1 − e^{∓η} e_{2m−1,2m}) Π (1 − e^{∓η} e_{2m,2m+1}).

    With Ř(−α) = 1 + sinh α / sinh(η − α) e, the sign = +1 operator
    (factor e^{−η}) is the α → −∞ limit of U_F and sign = −1 the α → +∞ one.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    p = _as_params(params)
    if p.regime is not Regime.EASY_PLANE:
        raise ValueError("limit_operator is defined for easy-plane η")
    g = limit_gate(p, sign)
    L = geo.L
    fac = [(g, 2 * m - 1, 2 * m) for m in range(1, L // 2 + 1)]
    fac += [(g, 2 * m, geo.wrap(2 * m + 1)) for m in range(1, L // 2 + 1)]
    return gate_product(fac, geo)


def limit_alpha(sign: int, magnitude: float = 20.0) -> float:
    """The finite α that probes limit_operator(sign)."""
    return -sign * magnitude


@dataclass(frozen=True)
class Cluster:
    value: complex
    multiplicity: int
    spread: float


def clustered_eigenvalues(op, radius: float = CLUSTER_RADIUS) -> list:
    """Eigenvalues grouped by single-linkage within ``radius``; each group is
    represented by its mean, which stays accurate when the group is a
    numerically split Jordan block."""
    w = np.linalg.eigvals(np.asarray(op))
    if len(w) == 1:
        return [Cluster(complex(w[0]), 1, 0.0)]
    lab = fcluster(linkage(np.c_[w.real, w.imag], "single"), radius, "distance")
    out = []
    for k in np.unique(lab):
        grp = w[lab == k]
        m = grp.mean()
        out.append(Cluster(complex(m), len(grp), float(np.max(np.abs(grp - m)))))
    out.sort(key=lambda c: (round(cmath.phase(c.value), 10), round(abs(c.value), 10)))
    return out


@dataclass(frozen=True)
class RootReport:
    order: int
    passed: bool
    max_distance: float
    nearest: list  # (value, n, distance, multiplicity)
    census: dict  # n -> multiplicity
    mirror_axes: list  # s with census(n) == census(s − n)

    @property
    def all_occupied(self) -> bool:
        return len(self.census) == self.order

    @property
    def strict_subset(self) -> bool:
        return 0 < len(self.census) < self.order

    @property
    def mirror_symmetric(self) -> bool:
        return bool(self.mirror_axes)

    @property
    def symmetric_under_negation(self) -> bool:
        return 0 in self.mirror_axes


def root_of_unity_check(eigs, l2: int, L: int, tol: float) -> RootReport:
    """Compare eigenvalues with exp(2iπn/K), K = l2·L/2.

    ``eigs`` is either a plain sequence or the output of
    :func:`clustered_eigenvalues` (multiplicities then come from clusters).
    """
    K = l2 * L // 2
    if eigs and isinstance(eigs[0], Cluster):
        items = [(c.value, c.multiplicity) for c in eigs]
    else:
        items = [(complex(x), 1) for x in eigs]
    nearest, census = [], {}
    for z, mult in items:
        n = int(np.round(cmath.phase(z) * K / (2 * math.pi))) % K
        d = abs(z - cmath.exp(2j * math.pi * n / K))
        nearest.append((z, n, d, mult))
        if d < tol:
            census[n] = census.get(n, 0) + mult
    maxd = max((d for _, _, d, _ in nearest), default=0.0)
    axes = [s for s in range(K)
            if all(census.get((s - n) % K) == m for n, m in census.items())]
    return RootReport(K, maxd < tol, maxd, nearest, dict(sorted(census.items())), axes)


def limit_census(params, sign: int, geo: ChainGeometry, tol: float = 1e-8) -> RootReport:
    p = _as_params(params)
    if p.root_of_unity is None:
        raise ValueError("η is not at a root of unity")
    clusters = clustered_eigenvalues(limit_operator(p, sign, geo))
    return root_of_unity_check(clusters, p.root_of_unity.l2, geo.L, tol)


# -- I ↔ II flip ----------------------------------------------------------

def unit_circle_deviation(eta, T: float, geo: ChainGeometry) -> float:
    # built from the exp(−iTe) gates, which stay regular where α(T) branches
    mu = np.linalg.eigvals(staggered_floquet_from_gates(eta, T, geo))
    return float(np.max(np.abs(np.abs(mu) - 1)))


def locate_flip(eta, t_lo: float, t_hi: float, geo: ChainGeometry,
                threshold: float = 1e-6, width: float = 1e-8) -> float:
    """Bisect for the T where max||μ|−1| first exceeds ``threshold``.

    ``t_lo`` must be unimodular and ``t_hi`` not; purely spectral, it does
    not consult regime_boundaries. The bracket may point either way, so
    t_lo > t_hi locates the upper edge of Regime II.
    """
    broken = lambda t: unit_circle_deviation(eta, t, geo) > threshold
    if broken(t_lo) or not broken(t_hi):
        raise ValueError("locate_flip needs a unimodular t_lo and a broken t_hi")
    while abs(t_hi - t_lo) > width:
        mid = 0.5 * (t_lo + t_hi)
        if broken(mid):
            t_hi = mid
        else:
            t_lo = mid
    return 0.5 * (t_lo + t_hi)
