"""Dense linear algebra on the chain space (C^N)^{⊗L}.

Conventions used throughout the package:

* sites are numbered 1..L, site 1 is the leftmost tensor factor
  (most significant index of the computational basis);
* chain operators and two-site gates are plain complex ``numpy`` arrays;
* a two-site gate of local dimension N is an (N², N²) matrix whose first
  tensor factor is the first site it is embedded on.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
import scipy.linalg

__all__ = [
    "Boundary",
    "ChainGeometry",
    "GeometryError",
    "EigenSolverError",
    "EigResult",
    "LogResult",
    "JORDAN_RISK_COND",
    "embed_two_site",
    "embed_one_site",
    "apply_two_site",
    "apply_one_site",
    "gate_product",
    "permutation_op",
    "translation_op",
    "translation_inverse_op",
    "reflection_op",
    "partial_trace_first",
    "frobenius",
    "best_scalar_residual",
    "eig",
    "matrix_log_principal",
    "sigma",
]

# Eigenvector-matrix condition number beyond which a matrix is reported
# as numerically close to defective.
JORDAN_RISK_COND = 1e8

# Dense budget: L * log2(N) above this is rejected.
MAX_QUBITS = 14


class GeometryError(ValueError):
    """Invalid site index, boundary or dimension."""


class EigenSolverError(RuntimeError):
    """LAPACK failed to converge or produced non-finite output."""


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


@dataclass(frozen=True)
class ChainGeometry:
    L: int
    N: int = 2
    n: int = 2
    boundary: Boundary = Boundary.PERIODIC
    max_qubits: float = MAX_QUBITS

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.L < 1 or self.N < 1 or self.n < 1:
            raise GeometryError(f"L, N, n must be positive, got {self.L}, {self.N}, {self.n}")
        if self.L % self.n:
            raise GeometryError(f"L={self.L} is not a multiple of the depth n={self.n}")
        if self.boundary is Boundary.OPEN and (self.n != 2 or self.L % 2):
            raise GeometryError("open boundary requires n = 2 and even L")
        if self.L * math.log2(max(self.N, 1)) > self.max_qubits:
            raise GeometryError(
                f"dimension {self.N}**{self.L} exceeds the dense budget "
                f"(L*log2(N) > {self.max_qubits})"
            )

    @property
    def dim(self) -> int:
        return self.N**self.L

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def wrap(self, site: int) -> int:
        """Reduce a 1-based site index into 1..L (periodic chains only)."""
        if 1 <= site <= self.L:
            return site
        if not self.periodic:
            raise GeometryError(f"site {site} outside 1..{self.L} on an open chain")
        return (site - 1) % self.L + 1

    def with_sites(self, L: int) -> "ChainGeometry":
        """Same local dimension on ``L`` sites, depth 1, periodic (internal spaces)."""
        return ChainGeometry(L=L, N=self.N, n=1, boundary=Boundary.PERIODIC,
                             max_qubits=self.max_qubits + 2 * math.log2(self.N))


def sigma(name: str) -> np.ndarray:
    """Pauli matrix by name ('x', 'y', 'z' or 'i')."""
    return {
        "i": np.eye(2, dtype=complex),
        "x": np.array([[0, 1], [1, 0]], dtype=complex),
        "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "z": np.array([[1, 0], [0, -1]], dtype=complex),
    }[name]


def _check_sites(geo: ChainGeometry, *sites: int) -> tuple[int, ...]:
    out = []
    for s in sites:
        if not 1 <= s <= geo.L:
            if geo.periodic:
                s = geo.wrap(s)
            else:
                raise GeometryError(f"site {s} outside 1..{geo.L} on an open chain")
        out.append(s)
    if len(set(out)) != len(out):
        raise GeometryError(f"sites must be distinct, got {sites}")
    return tuple(out)


def _local_dim(gate: np.ndarray, k: int) -> int:
    n = round(gate.shape[0] ** (1.0 / k))
    if gate.shape != (n**k, n**k):
        raise GeometryError(f"gate of shape {gate.shape} is not a {k}-site operator")
    return n


def apply_two_site(gate, i: int, j: int, op: np.ndarray, geo: ChainGeometry,
                   side: str = "left") -> np.ndarray:
    """Return ``G_ij @ op`` (side='left') or ``op @ G_ij`` (side='right').

    Works by contraction on the reshaped operator, never forming G_ij.
    """
    gate = np.asarray(gate, dtype=complex)
    N = geo.N
    if _local_dim(gate, 2) != N:
        raise GeometryError(f"gate local dimension does not match N={N}")
    i, j = _check_sites(geo, i, j)
    L = geo.L
    g = gate.reshape(N, N, N, N)
    if side == "left":
        t = op.reshape((N,) * L + (-1,))
        # out[s_i', s_j', ...] = sum g[s_i', s_j', s_i, s_j] t[..., s_i, s_j, ...]
        t = np.tensordot(g, t, axes=([2, 3], [i - 1, j - 1]))
        # axes now: (s_i, s_j, remaining sites in order, column)
        rest = [k for k in range(L) if k not in (i - 1, j - 1)]
        order = [i - 1, j - 1] + rest
        perm = [order.index(k) for k in range(L)] + [L]
        return np.transpose(t, perm).reshape(op.shape)
    if side == "right":
        t = op.reshape((-1,) + (N,) * L)
        t = np.tensordot(t, g, axes=([i, j], [0, 1]))
        # axes: (row, remaining sites, s_i, s_j)
        rest = [k for k in range(L) if k not in (i - 1, j - 1)]
        order = rest + [i - 1, j - 1]
        perm = [0] + [1 + order.index(k) for k in range(L)]
        return np.transpose(t, perm).reshape(op.shape)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def apply_one_site(local, i: int, op: np.ndarray, geo: ChainGeometry,
                   side: str = "left") -> np.ndarray:
    """Return ``o_i @ op`` or ``op @ o_i`` for a single-site operator ``o``."""
    local = np.asarray(local, dtype=complex)
    N = geo.N
    if local.shape != (N, N):
        raise GeometryError(f"single-site operator must be {N}x{N}")
    (i,) = _check_sites(geo, i)
    L = geo.L
    if side == "left":
        t = op.reshape((N,) * L + (-1,))
        t = np.moveaxis(np.tensordot(local, t, axes=([1], [i - 1])), 0, i - 1)
        return t.reshape(op.shape)
    if side == "right":
        t = op.reshape((-1,) + (N,) * L)
        t = np.moveaxis(np.tensordot(t, local, axes=([i], [0])), -1, i)
        return t.reshape(op.shape)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def embed_two_site(gate, site_i: int, site_j: int, geo: ChainGeometry) -> np.ndarray:
    """Chain operator acting as ``gate`` on the ordered pair (site_i, site_j)."""
    return apply_two_site(gate, site_i, site_j, np.eye(geo.dim, dtype=complex), geo)


def embed_one_site(local, site: int, geo: ChainGeometry) -> np.ndarray:
    return apply_one_site(local, site, np.eye(geo.dim, dtype=complex), geo)


def gate_product(factors, geo: ChainGeometry) -> np.ndarray:
    """Ordered product of local factors, the first entry leftmost.

    Each factor is ``(gate, i, j)`` for a two-site gate or ``(local, i)``
    for a single-site operator.
    """
    out = np.eye(geo.dim, dtype=complex)
    # Right-multiply so that the first factor ends up on the left.
    for f in factors:
        if len(f) == 3:
            out = apply_two_site(f[0], f[1], f[2], out, geo, side="right")
        elif len(f) == 2:
            out = apply_one_site(f[0], f[1], out, geo, side="right")
        else:
            raise ValueError(f"bad factor {f!r}")
    return out


def permutation_op(N: int = 2) -> np.ndarray:
    """The swap P on C^N ⊗ C^N."""
    if N < 2:
        raise GeometryError("permutation needs N >= 2")
    P = np.zeros((N * N, N * N), dtype=complex)
    for a in range(N):
        for b in range(N):
            P[b * N + a, a * N + b] = 1.0
    return P


def translation_op(geo: ChainGeometry) -> np.ndarray:
    """Right translation G = P_{1,2} P_{2,3} ... P_{L-1,L}, so G F_m G^{-1} = F_{m+1}."""
    if not geo.periodic:
        raise GeometryError("translation is defined for periodic chains only")
    if geo.L == 1:
        return np.eye(geo.dim, dtype=complex)
    P = permutation_op(geo.N)
    return gate_product([(P, m, m + 1) for m in range(1, geo.L)], geo)


def translation_inverse_op(geo: ChainGeometry) -> np.ndarray:
    """G^{-1} as the reversed product P_{L-1,L} ... P_{1,2}."""
    if not geo.periodic:
        raise GeometryError("translation is defined for periodic chains only")
    if geo.L == 1:
        return np.eye(geo.dim, dtype=complex)
    P = permutation_op(geo.N)
    return gate_product([(P, m, m + 1) for m in range(geo.L - 1, 0, -1)], geo)


def reflection_op(geo: ChainGeometry) -> np.ndarray:
    """Site reversal m -> L - m + 1, as the product of P_{m, L-m+1}."""
    P = permutation_op(geo.N)
    pairs = [(P, m, geo.L - m + 1) for m in range(1, geo.L // 2 + 1)]
    return gate_product(pairs, geo)


def partial_trace_first(op: np.ndarray, N: int) -> np.ndarray:
    """Trace out the leftmost tensor factor (dimension N)."""
    D = op.shape[0] // N
    return np.einsum("aiaj->ij", op.reshape(N, D, N, D))


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def best_scalar_residual(a: np.ndarray, b: np.ndarray) -> tuple[float, complex]:
    """min_c ||a - c b||_F and the minimiser c = <b, a> / <b, b>."""
    bb = np.vdot(b, b)
    if bb == 0:
        return frobenius(a), 0j
    c = complex(np.vdot(b, a) / bb)
    return frobenius(a - c * b), c


@dataclass(frozen=True)
class EigResult:
    values: np.ndarray
    vectors: np.ndarray
    residual: float
    cond: float

    @property
    def jordan_risk(self) -> bool:
        return not np.isfinite(self.cond) or self.cond > JORDAN_RISK_COND


def _sort_key(values: np.ndarray) -> np.ndarray:
    # Round before sorting so that tiny rounding noise does not reorder
    # eigenvalues between runs.
    return np.lexsort((np.round(np.abs(values), 10), np.round(np.angle(values), 10)))


def _is_normal(a: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(frobenius(a) ** 2, 1.0)
    return frobenius(a @ a.conj().T - a.conj().T @ a) <= tol * scale


def eig(op) -> EigResult:
    """General eigendecomposition, sorted by (phase, modulus).

    Normal matrices go through the complex Schur form so that the
    eigenvector matrix is unitary even inside degenerate eigenspaces.
    """
    a = np.asarray(op, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise EigenSolverError("matrix has non-finite entries")
    try:
        if _is_normal(a):
            t, v = scipy.linalg.schur(a, output="complex")
            w = np.diag(t).copy()
        else:
            w, v = scipy.linalg.eig(a)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise EigenSolverError("eigensolver returned non-finite values")
    idx = _sort_key(w)
    w, v = w[idx], v[:, idx]
    cond = float(np.linalg.cond(v))
    if np.isfinite(cond) and cond < 1e15:
        recon = (v * w) @ np.linalg.inv(v)
        residual = frobenius(recon - a) / max(frobenius(a), 1.0)
    else:
        residual = float("inf")
    return EigResult(w, v, residual, cond)


def principal_log(z):
    """Elementwise principal log with the imaginary part in (-pi, pi]."""
    out = np.log(np.asarray(z, dtype=complex))
    return np.where(np.isclose(out.imag, -np.pi, rtol=0, atol=1e-15),
                    out.real + 1j * np.pi, out)


@dataclass(frozen=True)
class LogResult:
    log: np.ndarray
    eigenvalues: np.ndarray
    cond: float
    residual: float

    @property
    def jordan_risk(self) -> bool:
        return not np.isfinite(self.cond) or self.cond > JORDAN_RISK_COND


def matrix_log_principal(op, singular_tol: float = 1e-13) -> LogResult:
    """Principal matrix logarithm through the eigendecomposition.

    Raises ``ValueError`` for (numerically) singular input. A
    near-defective input is not rejected; it comes back with
    ``jordan_risk`` set so callers can decide.
    """
    a = np.asarray(op, dtype=complex)
    res = eig(a)
    scale = max(np.max(np.abs(res.values)), 1.0)
    if np.min(np.abs(res.values)) < singular_tol * scale:
        raise ValueError("matrix_log_principal: singular input")
    logs = principal_log(res.values)
    v = res.vectors
    if res.cond > 1e15 or not np.isfinite(res.cond):
        # V is numerically singular; fall back to scipy for a usable value
        # but keep the flag raised.
        out = scipy.linalg.logm(a)
    else:
        out = (v * logs) @ np.linalg.inv(v)
    return LogResult(out, res.values, res.cond, res.residual)
