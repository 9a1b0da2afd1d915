"""Upper-triangular Toeplitz values and the block reshuffle permutations.

A block matrix whose blocks are Toeplitz (a "grid of Toeplitz blocks") is
turned into a Toeplitz matrix whose entries are blocks (a "Toeplitz grid
of blocks") by a symmetric permutation. Permutations are stored as index
arrays so the reshuffle moves entries without arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matcore import DimensionMismatch, InputValidationError

PLAIN = "plain"
ALTERNATING = "alternating"


@dataclass(frozen=True)
class ToeplitzCoeffs:
    """Coefficients ``a_0 .. a_{b-1}`` of an upper-triangular (block) Toeplitz matrix.

    With ``kind="alternating"`` the coefficients on odd (0-based) block rows
    are conjugated, so that ``t[j+1, k+1] = conj(t[j, k])``.
    """
    kind: str
    coeffs: tuple

    def __post_init__(self):
        if self.kind not in (PLAIN, ALTERNATING):
            raise InputValidationError(f"unknown Toeplitz kind {self.kind!r}")
        cs = tuple(np.atleast_2d(np.asarray(c, dtype=complex)) for c in self.coeffs)
        if not cs:
            raise InputValidationError("need at least one coefficient")
        if len({c.shape for c in cs}) != 1:
            raise InputValidationError("block coefficients must share one shape")
        object.__setattr__(self, "coeffs", cs)

    @property
    def size(self) -> int:
        return len(self.coeffs)

    @property
    def block_shape(self) -> tuple:
        return self.coeffs[0].shape


def realize(tc: ToeplitzCoeffs) -> np.ndarray:
    """Dense matrix of a (block) Toeplitz coefficient sequence."""
    b = tc.size
    p, q = tc.block_shape
    T = np.zeros((b * p, b * q), dtype=complex)
    for i in range(b):
        flip = tc.kind == ALTERNATING and i % 2 == 1
        for n in range(b - i):
            c = tc.coeffs[n]
            T[i * p:(i + 1) * p, (i + n) * q:(i + n + 1) * q] = c.conj() if flip else c
    return T


def toeplitz(*coeffs, kind=PLAIN) -> np.ndarray:
    """Shorthand for ``realize(ToeplitzCoeffs(kind, coeffs))``."""
    return realize(ToeplitzCoeffs(kind, coeffs))


def embed_block(T: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Place square ``T`` as ``[T; 0]`` (tall) or ``[0 T]`` (wide)."""
    out = np.zeros((rows, cols), dtype=complex)
    n = T.shape[0]
    if T.shape[1] != n or n != min(rows, cols):
        raise DimensionMismatch("Toeplitz block does not fit the target shape")
    out[:n, cols - n:] = T
    return out


def toeplitz_coeffs_of(M, tol=1e-10, kind=PLAIN):
    """Return the first-row coefficients if ``M`` is upper Toeplitz, else ``None``."""
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        return None
    c = M[0].copy()
    ref = realize(ToeplitzCoeffs(kind, c))
    if np.linalg.norm(M - ref) > tol * (1 + np.linalg.norm(M)):
        return None
    return c


@dataclass(frozen=True)
class Structure:
    """Block sizes ``alpha_1 > ... > alpha_N`` with multiplicities ``m_r``."""
    parts: tuple

    def __post_init__(self):
        parts = tuple((int(a), int(m)) for a, m in self.parts)
        if not parts:
            raise InputValidationError("structure needs at least one part")
        if any(a < 1 or m < 1 for a, m in parts):
            raise InputValidationError("sizes and multiplicities must be positive")
        sizes = [a for a, _ in parts]
        if any(s <= t for s, t in zip(sizes, sizes[1:])):
            raise InputValidationError(f"sizes must be strictly decreasing, got {sizes}")
        object.__setattr__(self, "parts", parts)

    @property
    def N(self) -> int:
        return len(self.parts)

    @property
    def order(self) -> int:
        return sum(a * m for a, m in self.parts)

    @property
    def offsets(self) -> list:
        out, o = [], 0
        for a, m in self.parts:
            out.append(o)
            o += a * m
        return out

    def alpha(self, r):
        return self.parts[r][0]

    def mult(self, r):
        return self.parts[r][1]


def as_structure(s) -> Structure:
    return s if isinstance(s, Structure) else Structure(tuple(s))


def omega_perm(alpha: int, m: int) -> np.ndarray:
    """Index map of the reshuffle permutation: column ``c`` of Omega is ``e_perm[c]``."""
    if alpha < 1 or m < 1:
        raise InputValidationError("alpha and m must be positive")
    return np.array([j * alpha + i for i in range(alpha) for j in range(m)], dtype=int)


def omega_paired_perm(beta: int, m: int) -> np.ndarray:
    """Index map for ``m`` paired blocks of order ``2*beta``.

    For each position ``i < beta`` it collects the first halves of all
    ``m`` paired blocks, then their second halves.
    """
    if beta < 1 or m < 1:
        raise InputValidationError("beta and m must be positive")
    return np.array([j * 2 * beta + h * beta + i
                     for i in range(beta) for h in range(2) for j in range(m)], dtype=int)


def perm_matrix(perm) -> np.ndarray:
    perm = np.asarray(perm)
    n = perm.size
    O = np.zeros((n, n))
    O[perm, np.arange(n)] = 1.0
    return O


def build_omega(alpha: int, m: int) -> np.ndarray:
    """Dense reshuffle permutation matrix of order ``alpha*m``."""
    return perm_matrix(omega_perm(alpha, m))


def build_omega_paired(beta: int, m: int) -> np.ndarray:
    """Dense paired-block reshuffle permutation of order ``2*beta*m``."""
    return perm_matrix(omega_paired_perm(beta, m))


def structure_perm(structure, paired: bool = False) -> np.ndarray:
    """Global index map of the direct sum of per-part permutations."""
    st = as_structure(structure)
    out, off = [], 0
    for a, m in st.parts:
        p = omega_paired_perm(a, m) if paired else omega_perm(a, m)
        out.append(p + off)
        off += p.size
    return np.concatenate(out)


def reshuffle(Y, structure, paired: bool = False) -> np.ndarray:
    """Return ``Omega^T Y Omega`` with ``Omega`` the direct sum over the parts."""
    Y = np.asarray(Y)
    perm = structure_perm(structure, paired)
    if Y.shape != (perm.size, perm.size):
        raise DimensionMismatch(f"matrix of shape {Y.shape} does not match order {perm.size}")
    return Y[np.ix_(perm, perm)]


def unreshuffle(Y, structure, paired: bool = False) -> np.ndarray:
    """Inverse of :func:`reshuffle`."""
    Y = np.asarray(Y)
    perm = structure_perm(structure, paired)
    if Y.shape != (perm.size, perm.size):
        raise DimensionMismatch(f"matrix of shape {Y.shape} does not match order {perm.size}")
    out = np.empty_like(Y)
    out[np.ix_(perm, perm)] = Y
    return out


def reshuffle_block(Yrs, part_r: Sequence[int], part_s: Sequence[int]) -> np.ndarray:
    """Reshuffle one off-diagonal block: ``Omega_r^T Y_rs Omega_s``."""
    Yrs = np.asarray(Yrs)
    pr, ps = omega_perm(*part_r), omega_perm(*part_s)
    if Yrs.shape != (pr.size, ps.size):
        raise DimensionMismatch("block shape does not match the given parts")
    return Yrs[np.ix_(pr, ps)]
