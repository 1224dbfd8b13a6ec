"""Integrable Floquet circuits from Yang-Baxter data: construction,
exact-diagonalization checks and Bethe-ansatz cross-validation."""

__version__ = "0.1.0"
