"""Monomial set-theoretic Yang-Baxter maps f(x,y) = xⁿyᵐ, g(x,y) = xᵖy^q.

Positive states are handled in log space, where every R_ij is an integer
matrix; compositions are then exact integer matrix products.
"""
from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Sequence

import numpy as np

FAMILIES = ("A14", "B_m", "B_p", "P")


@dataclass(frozen=True)
class MonomialMap:
    n: int
    m: int
    p: int
    q: int

    def f(self, x, y):
        return x ** self.n * y ** self.m

    def g(self, x, y):
        return x ** self.p * y ** self.q

    def mirrored(self) -> "MonomialMap":
        """The n ↔ q, m ↔ p image."""
        return MonomialMap(self.q, self.p, self.m, self.n)

    def as_tuple(self) -> tuple:
        return (self.n, self.m, self.p, self.q)


@dataclass(frozen=True)
class TripleState:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if min(self.x1, self.x2, self.x3) <= 0:
            raise ValueError("TripleState entries must be strictly positive")

    def as_list(self) -> list:
        return [self.x1, self.x2, self.x3]


def _check_indices(i, j, size):
    if i == j or not (1 <= i <= size and 1 <= j <= size):
        raise ValueError(f"need 1 <= i != j <= {size}, got ({i}, {j})")


def apply_rij(mp: MonomialMap, i: int, j: int, state: Sequence[float]) -> list:
    """R_ij on a positive state: f(x_i,x_j) goes to the smaller of the two
    positions and g(x_i,x_j) to the larger one."""
    x = list(state.as_list() if isinstance(state, TripleState) else state)
    _check_indices(i, j, len(x))
    if any(v <= 0 for v in x):
        raise ValueError("monomial maps act on strictly positive states")
    a, b = x[i - 1], x[j - 1]
    fv, gv = mp.f(a, b), mp.g(a, b)
    lo, hi = sorted((i, j))
    x[lo - 1], x[hi - 1] = (fv, gv) if i < j else (gv, fv)
    return x


def log_matrix(mp: MonomialMap, i: int, j: int, size: int = 3) -> list:
    """Integer matrix A with log R_ij(x) = A · log x (nested lists, exact)."""
    _check_indices(i, j, size)
    A = [[int(r == c) for c in range(size)] for r in range(size)]
    f_row = [0] * size
    g_row = [0] * size
    f_row[i - 1] += mp.n
    f_row[j - 1] += mp.m
    g_row[i - 1] += mp.p
    g_row[j - 1] += mp.q
    lo, hi = sorted((i, j))
    A[lo - 1], A[hi - 1] = (f_row, g_row) if i < j else (g_row, f_row)
    return A


def _matmul(A, B):
    return [[sum(A[r][k] * B[k][c] for k in range(len(B))) for c in range(len(B[0]))]
            for r in range(len(A))]


def styb_sides(mp: MonomialMap) -> tuple:
    """Exponent matrices of R12∘R13∘R23 and R23∘R13∘R12."""
    R12, R13, R23 = (log_matrix(mp, *ij) for ij in ((1, 2), (1, 3), (2, 3)))
    return _matmul(_matmul(R12, R13), R23), _matmul(_matmul(R23, R13), R12)


def styb_residual(mp: MonomialMap, trials: int = 100, seed: int = 0) -> float:
    """Max relative deviation between both sides of the set-theoretic YBE on
    random positive triples, evaluated on log-vectors."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lhs, rhs = (np.array(M, dtype=float) for M in styb_sides(mp))
    rng = np.random.default_rng(seed)
    logs = rng.uniform(-1.0, 1.0, size=(trials, 3))
    a, b = logs @ lhs.T, logs @ rhs.T
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


def exponent_equations(mp: MonomialMap) -> list:
    """The nine (lhs, rhs) integer pairs, one per component and variable."""
    n, m, p, q = mp.as_tuple()
    return [
        (n * n, n * n),
        (p * n + p * n * m, n * p),
        (p * p + n * p * q, p),
        (m * n, p * m * n + m * n),
        (q * n + m * m * p, p * p * m + n * q),
        (q * p + m * q * p, q * p),
        (m, q * m * n + m * m),
        (q * m, q * m * p + q * m),
        (q * q, q * q),
    ]


def exponent_equations_check(mp: MonomialMap) -> tuple[bool, list]:
    report = [l == r for l, r in exponent_equations(mp)]
    return all(report), report


def families_of(mp: MonomialMap) -> list:
    """Names of the four families that contain ``mp``."""
    n, m, p, q = mp.as_tuple()
    out = []
    if m == 0 and p == 0:
        out.append("A14")
    if p == 0 and m == 1 - n * q:
        out.append("B_m")
    if m == 0 and p == 1 - n * q:
        out.append("B_p")
    if (n, m, p, q) == (0, 1, 1, 0):
        out.append("P")
    return out


@dataclass(frozen=True)
class ScanReport:
    bound: int
    survivors: list
    outliers: list  # survivors outside all four families
    mismatches: list  # maps where the equation check and the log-space YBE disagree
    mirror_failures: list

    @property
    def all_classified(self) -> bool:
        return not self.outliers


def enumerate_classes(bound: int) -> list:
    """All maps with |exponents| <= bound that pass exponent_equations_check."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    rng = range(-bound, bound + 1)
    return [mp for mp in (MonomialMap(*t) for t in itertools.product(rng, repeat=4))
            if exponent_equations_check(mp)[0]]


def scan(bound: int, trials: int = 100, seed: int = 0) -> ScanReport:
    """Exhaustive scan with classification, equation/YBE cross-validation and
    the n ↔ q, m ↔ p symmetry."""
    rng = range(-bound, bound + 1)
    survivors, mismatches = [], []
    for t in itertools.product(rng, repeat=4):
        mp = MonomialMap(*t)
        ok = exponent_equations_check(mp)[0]
        ybe_ok = styb_residual(mp, trials, seed) == 0.0
        if ok != ybe_ok:
            mismatches.append(mp)
        if ok:
            survivors.append(mp)
    outliers = [mp for mp in survivors if not families_of(mp)]
    mirror = [mp for mp in survivors if not exponent_equations_check(mp.mirrored())[0]]
    return ScanReport(bound, survivors, outliers, mismatches, mirror)
