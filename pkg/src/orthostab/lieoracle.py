"""Stabilizer dimensions from the tangent space at the identity.

The Lie algebra of ``{Q : Q^T Q = I}`` is the antisymmetric matrices, so
the stabilizer of ``S`` under ``Q^{-1} S Q`` has tangent space
``{K : K^T = -K, KS = SK}`` and the stabilizer of ``H`` under ``Q^* H Q``
has tangent space ``{K : K^T = -K, K^* H + H K = 0}`` (a real subspace).
Both are computed as nullities of explicit linear systems.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    TolPolicy, antisym_basis, as_mat, check_hermitian, rank_nullity, NotSymmetric,
    DimensionMismatch,
)


@dataclass(frozen=True)
class OracleResult:
    nullity: int
    field: str
    gap_ratio: float
    tol: float
    unknowns: int

    def to_json(self):
        gap = self.gap_ratio if np.isfinite(self.gap_ratio) else None
        return {"nullity": self.nullity, "field": self.field, "gap_ratio": gap,
                "tol": self.tol, "unknowns": self.unknowns}


def _sym_system(S):
    n = S.shape[0]
    cols = [(K @ S - S @ K).ravel() for K in antisym_basis(n)]
    if not cols:
        return np.zeros((n * n, 0), dtype=complex)
    return np.stack(cols, axis=1)


def oracle_dim_sym(S, policy: TolPolicy | None = None) -> OracleResult:
    """Complex dimension of the stabilizer of symmetric ``S`` under orthogonal similarity."""
    S = as_mat(S, "S")
    if np.linalg.norm(S - S.T) > 1e-10 * (1 + np.linalg.norm(S)):
        raise NotSymmetric("S must be symmetric")
    A = _sym_system(S)
    scale = np.linalg.norm(S, 2)
    unknowns = A.shape[1]
    if unknowns == 0:
        return OracleResult(0, "complex", float("inf"), 0.0, 0)
    res = rank_nullity(A, policy, scale)
    return OracleResult(res.nullity, "complex", res.gap_ratio, res.tol, unknowns)


def _herm_system(H):
    n = H.shape[0]
    cols = []
    for K in antisym_basis(n):
        for K2 in (K, 1j * K):
            D = K2.conj().T @ H + H @ K2
            cols.append(np.concatenate([D.real.ravel(), D.imag.ravel()]))
    if not cols:
        return np.zeros((2 * n * n, 0))
    return np.stack(cols, axis=1)


def oracle_dim_herm(H, policy: TolPolicy | None = None) -> OracleResult:
    """Real dimension of the stabilizer of Hermitian ``H`` under ``Q^* H Q``."""
    H = check_hermitian(as_mat(H, "H"))
    A = _herm_system(H)
    scale = np.linalg.norm(H, 2)
    unknowns = A.shape[1]
    if unknowns == 0:
        return OracleResult(0, "real", float("inf"), 0.0, 0)
    res = rank_nullity(A, policy, scale)
    return OracleResult(res.nullity, "real", res.gap_ratio, res.tol, unknowns)


@dataclass(frozen=True)
class VerifyReport:
    orth_residual: float
    action_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.orth_residual <= self.tol and self.action_residual <= self.tol

    def to_json(self):
        return {"orth_residual": self.orth_residual, "action_residual": self.action_residual,
                "tol": self.tol, "pass": self.passed}


def verify_stab_element(Q, M, action: str, tol: float = 1e-8) -> VerifyReport:
    """Residuals of ``Q^T Q = I`` and of the stabilizer equation.

    Both residuals are relative Frobenius norms scaled by ``max(1, ||Q||^2)``
    (and ``max(1, ||M||)`` for the action), so well-conditioned and large
    orthogonal matrices are judged on the same footing. For ``action="sym"``
    the equation is checked as ``MQ = QM``, which avoids inverting ``Q``.
    """
    Q, M = as_mat(Q, "Q"), as_mat(M, "M")
    if Q.shape != M.shape:
        raise DimensionMismatch("Q and M must have the same order")
    if action not in ("sym", "herm"):
        raise ValueError("action must be 'sym' or 'herm'")
    qn = max(1.0, np.linalg.norm(Q, 2) ** 2)
    mn = max(1.0, np.linalg.norm(M))
    orth = np.linalg.norm(Q.T @ Q - np.eye(Q.shape[0])) / qn
    if action == "sym":
        act = np.linalg.norm(M @ Q - Q @ M) / (max(1.0, np.linalg.norm(Q, 2)) * mn)
    else:
        act = np.linalg.norm(Q.conj().T @ M @ Q - M) / (qn * mn)
    return VerifyReport(float(orth), float(act), float(tol))
