"""Dense complex matrix kernels and elementary normal-form blocks.

Every matrix in the package is a dense ``numpy.ndarray`` of dtype
``complex128``. This module holds the block constructors for the symmetric
and Hermitian normal forms, the spec value types describing block
structure, the Takagi factorization, and the centralized numerical-rank
policy used for every integer dimension decision.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.linalg as sla

EPS = np.finfo(float).eps
GAP_MIN = 1e3
TOL_ENV = "ORTHOSTAB_TOL"


# --------------------------------------------------------------------------
# errors
# --------------------------------------------------------------------------

class OrthostabError(Exception):
    """Base class for all package errors."""


class InputValidationError(OrthostabError, ValueError):
    """Malformed or out-of-domain input (CLI exit code 2)."""


class NotSymmetric(InputValidationError):
    pass


class NotHermitian(InputValidationError):
    pass


class SingularInput(InputValidationError):
    pass


class DomainError(InputValidationError):
    pass


class DimensionMismatch(InputValidationError):
    pass


class NumericalAmbiguity(OrthostabError):
    """A numerical decision could not be made safely (CLI exit code 3)."""


class RankAmbiguous(NumericalAmbiguity):
    def __init__(self, msg, gap_ratio=None, singular_values=None):
        super().__init__(msg)
        self.gap_ratio = gap_ratio
        self.singular_values = singular_values


# --------------------------------------------------------------------------
# matrix values
# --------------------------------------------------------------------------

def as_mat(x, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``x`` to a finite 2-D complex128 array."""
    a = np.array(x, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InputValidationError(f"{name} must be a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputValidationError(f"{name} has non-finite entries")
    return a


def as_cplx(z, name: str = "scalar") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputValidationError(f"{name} must be finite")
    return z


def _check_order(m) -> int:
    if int(m) != m or m < 1:
        raise InputValidationError(f"block order must be a positive integer, got {m!r}")
    return int(m)


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal assembly of complex matrices."""
    blocks = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return sla.block_diag(*blocks).astype(complex)


def mat_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def mat_from_json(d) -> np.ndarray:
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputValidationError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise InputValidationError("matrix data length must equal rows*cols")
    try:
        vals = [complex(float(p[0]), float(p[1])) for p in data]
    except (TypeError, ValueError, IndexError):
        raise InputValidationError("matrix entries must be [re, im] pairs") from None
    return as_mat(np.array(vals).reshape(rows, cols))


# --------------------------------------------------------------------------
# elementary blocks
# --------------------------------------------------------------------------

def build_E(m) -> np.ndarray:
    """Backward identity of order ``m``."""
    m = _check_order(m)
    return np.fliplr(np.eye(m)).astype(complex)


def build_nilpotent(m) -> np.ndarray:
    m = _check_order(m)
    return np.eye(m, k=1, dtype=complex)


def build_jordan(m, z) -> np.ndarray:
    """Upper Jordan block of order ``m`` with eigenvalue ``z``."""
    m = _check_order(m)
    z = as_cplx(z, "z")
    return z * np.eye(m, dtype=complex) + np.eye(m, k=1, dtype=complex)


def build_P(m) -> np.ndarray:
    """Transition ``(I + iE)/sqrt(2)``, whose square is ``iE``."""
    m = _check_order(m)
    return (np.eye(m) + 1j * build_E(m)) / math.sqrt(2)


def build_P_quarter(m) -> np.ndarray:
    """Transition ``exp(-i pi/4)(I + iE)/sqrt(2)``, whose square is ``E``."""
    return np.exp(-0.25j * np.pi) * build_P(m)


def build_sym_block(m, z) -> np.ndarray:
    """Complex symmetric block similar to ``J_m(z)``.

    Built entrywise as ``(J + J^T)/2 + (i/2)(EN - NE)`` so the result is
    exactly symmetric; it equals ``P J P^{-1}`` with ``P = build_P(m)``.
    """
    m = _check_order(m)
    z = as_cplx(z, "z")
    S = np.zeros((m, m), dtype=complex)
    for j in range(m):
        S[j, j] = z
        if j + 1 < m:
            S[j, j + 1] = S[j + 1, j] = 0.5
    # 0-based anti-diagonals: j+k = m (EN term) and j+k = m-2 (NE term)
    for j in range(m):
        k = m - j
        if 0 <= k < m:
            S[j, k] += 0.5j
        k = m - 2 - j
        if 0 <= k < m:
            S[j, k] -= 0.5j
    return S


def _herm_H(m, z) -> np.ndarray:
    """Entrywise ``zE + (EN + NE)/2 + (i/2)(N - N^T)``."""
    H = np.zeros((m, m), dtype=complex)
    for j in range(m):
        H[j, m - 1 - j] += z
        if j + 1 < m:
            H[j, j + 1] += 0.5j
            H[j + 1, j] -= 0.5j
    for j in range(m):
        for k in (m - j, m - 2 - j):
            if 0 <= k < m:
                H[j, k] += 0.5
    return H


def herm_consim_identity(m, z) -> np.ndarray:
    """``P^{-1} J_m(z) conj(P)`` with the quarter transition ``P``."""
    P = build_P_quarter(m)
    return np.linalg.solve(P, build_jordan(m, z) @ P.conj())


def build_herm_block(kind: str, m, z) -> np.ndarray:
    """Hermitian-normal-form blocks ``H_m(z)``, ``K_m(z)``, ``L_m(z)``.

    ``H`` is built from its entrywise formula and checked against the
    consimilarity identity ``H_m(z) = P^{-1} J_m(z) conj(P)``; a mismatch
    raises rather than returning a wrong block.
    """
    m = _check_order(m)
    z = as_cplx(z, "z")
    kind = kind.upper()
    if kind == "K" and not (z.imag == 0 and z.real > 0):
        raise DomainError("K blocks need a positive real parameter")
    if kind == "L" and (z * z).imag == 0:
        raise DomainError("L blocks need a parameter with non-real square")
    if kind not in ("H", "K", "L"):
        raise DomainError(f"unknown block kind {kind!r}")
    H = _herm_H(m, z)
    ref = herm_consim_identity(m, z)
    if np.linalg.norm(H - ref) > 1e-10 * (1 + abs(z)):
        raise AssertionError("entrywise H block disagrees with its consimilarity identity")
    if kind == "H":
        return H
    Z = np.zeros((m, m), dtype=complex)
    if kind == "K":
        return np.block([[Z, -1j * H], [1j * H, Z]])
    return np.block([[Z, H], [H.conj().T, Z]])


def consim_jordan_block(kind: str, m, z) -> np.ndarray:
    """Consimilarity Jordan-type block matching ``build_herm_block(kind, m, z)``.

    ``H``: ``J_m(z)``; ``K``: ``[[0, J_m(z)], [-J_m(z), 0]]``;
    ``L``: ``[[0, J_m(z)], [J_m(conj z), 0]]``.
    """
    m = _check_order(m)
    z = as_cplx(z, "z")
    kind = kind.upper()
    J = build_jordan(m, z)
    if kind == "H":
        return J
    Z = np.zeros((m, m), dtype=complex)
    if kind == "K":
        return np.block([[Z, J], [-J, Z]])
    if kind == "L":
        return np.block([[Z, J], [build_jordan(m, z.conjugate()), Z]])
    raise DomainError(f"unknown block kind {kind!r}")


def consim_block_transition(kind: str, m) -> np.ndarray:
    """``P`` with ``build_herm_block(kind, m, z) = P^{-1} C conj(P)`` for the matching Jordan-type ``C``."""
    Pq = build_P_quarter(m)
    kind = kind.upper()
    if kind == "H":
        return Pq
    if kind == "K":
        return np.exp(0.25j * np.pi) * direct_sum(Pq, Pq)
    if kind == "L":
        return direct_sum(Pq, Pq)
    raise DomainError(f"unknown block kind {kind!r}")


# --------------------------------------------------------------------------
# spec value types
# --------------------------------------------------------------------------

def _check_parts(parts, what="parts"):
    sizes = [p[0] for p in parts]
    if not parts:
        raise InputValidationError(f"{what}: need at least one part")
    for a, m in ((p[0], p[1]) for p in parts):
        if int(a) != a or a < 1 or int(m) != m or m < 1:
            raise InputValidationError(f"{what}: sizes and multiplicities must be positive integers")
    if any(s <= t for s, t in zip(sizes, sizes[1:])):
        raise InputValidationError(f"{what}: sizes must be strictly decreasing, got {sizes}")


@dataclass(frozen=True)
class SymClass:
    eigenvalue: complex
    parts: tuple  # ((alpha, m), ...)

    def __post_init__(self):
        object.__setattr__(self, "eigenvalue", as_cplx(self.eigenvalue, "eigenvalue"))
        object.__setattr__(self, "parts", tuple((int(a), int(m)) for a, m in self.parts))
        _check_parts(self.parts)

    @property
    def order(self) -> int:
        return sum(a * m for a, m in self.parts)


@dataclass(frozen=True)
class SymSpec:
    """Block structure of a symmetric normal form: one entry per eigenvalue."""
    classes: tuple

    def __post_init__(self):
        cls = tuple(c if isinstance(c, SymClass) else SymClass(*c) for c in self.classes)
        if not cls:
            raise InputValidationError("SymSpec needs at least one class")
        ev = [c.eigenvalue for c in cls]
        if len(set(ev)) != len(ev):
            raise InputValidationError("eigenvalues must be pairwise distinct")
        object.__setattr__(self, "classes", cls)

    @property
    def order(self) -> int:
        return sum(c.order for c in self.classes)


@dataclass(frozen=True)
class SignedPart:
    alpha: int
    m: int
    signs: tuple = ()

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs) if self.signs else (1,) * int(self.m)
        if len(signs) != self.m or any(s not in (1, -1) for s in signs):
            raise InputValidationError("signs must be m values from {+1, -1}")
        object.__setattr__(self, "alpha", int(self.alpha))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "signs", signs)


def _signed_parts(parts):
    out = tuple(p if isinstance(p, SignedPart) else SignedPart(*p) for p in parts)
    _check_parts([(p.alpha, p.m) for p in out])
    return out


@dataclass(frozen=True)
class ZeroClass:
    """Eigenvalue 0 of ``A conj(A)``; signs of odd-size blocks are forced to +1."""
    parts: tuple

    def __post_init__(self):
        parts = _signed_parts(self.parts)
        parts = tuple(
            SignedPart(p.alpha, p.m, (1,) * p.m) if p.alpha % 2 else p for p in parts
        )
        object.__setattr__(self, "parts", parts)

    key = property(lambda self: ("zero",))
    sizes = property(lambda self: tuple((p.alpha, p.m) for p in self.parts))


@dataclass(frozen=True)
class PosClass:
    lam: float
    parts: tuple

    def __post_init__(self):
        lam = float(self.lam)
        if not (math.isfinite(lam) and lam > 0):
            raise InputValidationError("PosClass needs a positive real eigenvalue")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "parts", _signed_parts(self.parts))

    key = property(lambda self: ("pos", self.lam))
    sizes = property(lambda self: tuple((p.alpha, p.m) for p in self.parts))


@dataclass(frozen=True)
class NegPairClass:
    mu: float
    parts: tuple  # ((beta, m), ...)

    def __post_init__(self):
        mu = float(self.mu)
        if not (math.isfinite(mu) and mu > 0):
            raise InputValidationError("NegPairClass needs mu > 0")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "parts", tuple((int(a), int(m)) for a, m in self.parts))
        _check_parts(self.parts)

    key = property(lambda self: ("negpair", self.mu))
    sizes = property(lambda self: self.parts)


@dataclass(frozen=True)
class ComplexClass:
    xi: complex
    parts: tuple  # ((gamma, m), ...)

    def __post_init__(self):
        xi = as_cplx(self.xi, "xi")
        if xi.imag <= 0 or (xi * xi).imag == 0:
            raise InputValidationError("ComplexClass needs Im xi > 0 and xi^2 non-real")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "parts", tuple((int(a), int(m)) for a, m in self.parts))
        _check_parts(self.parts)

    key = property(lambda self: ("complex", self.xi))
    sizes = property(lambda self: self.parts)


HermClass = Union[ZeroClass, PosClass, NegPairClass, ComplexClass]


def class_order(c) -> int:
    if isinstance(c, SymClass):
        return c.order
    mult = 2 if isinstance(c, (NegPairClass, ComplexClass)) else 1
    return mult * sum(a * m for a, m in c.sizes)


@dataclass(frozen=True)
class HermSpec:
    """Block structure of a Hermitian normal form under orthogonal *-congruence."""
    classes: tuple

    def __post_init__(self):
        cls = tuple(self.classes)
        if not cls:
            raise InputValidationError("HermSpec needs at least one class")
        if not all(isinstance(c, (ZeroClass, PosClass, NegPairClass, ComplexClass)) for c in cls):
            raise InputValidationError("unknown Hermitian class record")
        keys = [c.key for c in cls]
        if len(set(keys)) != len(keys):
            raise InputValidationError("class keys must be pairwise distinct")
        object.__setattr__(self, "classes", cls)

    @property
    def order(self) -> int:
        return sum(class_order(c) for c in self.classes)


Spec = Union[SymSpec, HermSpec]


def class_blocks(c) -> list:
    """The elementary blocks of one class, in assembly order."""
    out = []
    if isinstance(c, SymClass):
        for a, m in c.parts:
            out += [build_sym_block(a, c.eigenvalue)] * m
    elif isinstance(c, (ZeroClass, PosClass)):
        lam = 0.0 if isinstance(c, ZeroClass) else c.lam
        for p in c.parts:
            H = build_herm_block("H", p.alpha, lam)
            out += [s * H for s in p.signs]
    elif isinstance(c, NegPairClass):
        for b, m in c.parts:
            out += [build_herm_block("K", b, c.mu)] * m
    else:
        for g, m in c.parts:
            out += [build_herm_block("L", g, c.xi)] * m
    return out


def assemble_normal_form(spec: Spec) -> np.ndarray:
    """Block-diagonal normal form of ``spec`` in class and part order."""
    blocks = [b for c in spec.classes for b in class_blocks(c)]
    return direct_sum(*blocks)


def spec_to_json(spec: Spec) -> dict:
    if isinstance(spec, SymSpec):
        return {"type": "sym", "classes": [
            {"eigenvalue": [c.eigenvalue.real, c.eigenvalue.imag], "parts": [list(p) for p in c.parts]}
            for c in spec.classes]}
    out = []
    for c in spec.classes:
        if isinstance(c, (ZeroClass, PosClass)):
            d = {"kind": "zero" if isinstance(c, ZeroClass) else "pos",
                 "parts": [{"alpha": p.alpha, "m": p.m, "signs": list(p.signs)} for p in c.parts]}
            if isinstance(c, PosClass):
                d["lambda"] = c.lam
        elif isinstance(c, NegPairClass):
            d = {"kind": "negpair", "mu": c.mu, "parts": [list(p) for p in c.parts]}
        else:
            d = {"kind": "complex", "xi": [c.xi.real, c.xi.imag], "parts": [list(p) for p in c.parts]}
        out.append(d)
    return {"type": "herm", "classes": out}


def _json_cplx(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def spec_from_json(d) -> Spec:
    try:
        kind = d["type"]
        classes = d["classes"]
        if kind == "sym":
            return SymSpec(tuple(
                SymClass(_json_cplx(c["eigenvalue"]), tuple(tuple(p) for p in c["parts"]))
                for c in classes))
        if kind != "herm":
            raise InputValidationError(f"unknown spec type {kind!r}")
        out = []
        for c in classes:
            k = c["kind"]
            if k in ("zero", "pos"):
                parts = tuple(SignedPart(p["alpha"], p["m"], tuple(p.get("signs") or ()))
                              for p in c["parts"])
                out.append(ZeroClass(parts) if k == "zero" else PosClass(c["lambda"], parts))
            elif k == "negpair":
                out.append(NegPairClass(c["mu"], tuple(tuple(p) for p in c["parts"])))
            elif k == "complex":
                out.append(ComplexClass(_json_cplx(c["xi"]), tuple(tuple(p) for p in c["parts"])))
            else:
                raise InputValidationError(f"unknown class kind {k!r}")
        return HermSpec(tuple(out))
    except InputValidationError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputValidationError(f"malformed spec: {exc!r}") from None


# --------------------------------------------------------------------------
# rank policy
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TolPolicy:
    """Rank threshold ``tau = multiplier * max(rows, cols) * eps * sigma_max``.

    ``atol`` replaces the relative rule when given. ``gap_min`` is the
    smallest acceptable ratio ``sigma_rank / sigma_{rank+1}``.
    """
    multiplier: float = 1.0
    atol: float | None = None
    gap_min: float = GAP_MIN

    @classmethod
    def from_env(cls, **kw) -> "TolPolicy":
        raw = os.environ.get(TOL_ENV)
        if raw:
            try:
                kw.setdefault("multiplier", float(raw))
            except ValueError:
                raise InputValidationError(f"{TOL_ENV} must be a number") from None
        return cls(**kw)

    def threshold(self, shape, smax: float) -> float:
        if self.atol is not None:
            return float(self.atol)
        return self.multiplier * max(shape) * EPS * smax


@dataclass(frozen=True)
class RankResult:
    rank: int
    nullity: int
    gap_ratio: float
    tol: float
    singular_values: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter((self.rank, self.nullity))


def _realify_if_needed(M):
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise InputValidationError("rank_nullity input must be finite")
    return M


def rank_nullity(M, policy: TolPolicy | None = None, scale: float = 0.0) -> RankResult:
    """Numerical rank and nullity with an explicit ambiguity guard.

    ``scale`` is a floor for ``sigma_max`` in the relative threshold. Operators
    built from a matrix ``S`` should pass ``||S||`` so that an operator which
    vanishes up to rounding is not given full rank.

    Raises
    ------
    RankAmbiguous
        If the singular values straddling the threshold are closer than
        ``policy.gap_min``.
    """
    M = _realify_if_needed(M)
    if M.ndim != 2:
        raise InputValidationError("rank_nullity needs a 2-D operator")
    policy = policy or TolPolicy.from_env()
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return RankResult(0, cols, math.inf, 0.0, np.zeros(0))
    s = np.linalg.svd(M, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    tol = policy.threshold(M.shape, max(smax, float(scale)))
    rank = int(np.sum(s > tol))
    if rank == 0 or rank == s.size:
        if rank == 0 and smax > 0:
            gap = tol / smax if tol > 0 else math.inf
            gap = math.inf if gap == 0 else gap
        else:
            gap = math.inf
    else:
        gap = float(s[rank - 1] / s[rank]) if s[rank] > 0 else math.inf
    if gap < policy.gap_min:
        raise RankAmbiguous(
            f"rank decision ambiguous: gap ratio {gap:.3g} < {policy.gap_min:g}", gap, s)
    return RankResult(rank, cols - rank, gap, tol, s)


def nullspace(M, policy: TolPolicy | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``M``."""
    M = _realify_if_needed(M)
    res = rank_nullity(M, policy)
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=M.dtype)
    _, _, vh = np.linalg.svd(M)
    return vh[res.rank:].conj().T


# --------------------------------------------------------------------------
# Takagi factorization and inertia
# --------------------------------------------------------------------------

def _sym_check(B, tol=None):
    B = as_mat(B, "B")
    if B.shape[0] != B.shape[1]:
        raise NotSymmetric("matrix must be square")
    nb = np.linalg.norm(B)
    if np.linalg.norm(B - B.T) > (tol if tol is not None else 1e-10 * (1 + nb)):
        raise NotSymmetric("matrix is not symmetric")
    return B


def takagi_factor(B, policy: TolPolicy | None = None) -> np.ndarray:
    """Return nonsingular ``C`` with ``C^T C = B`` for symmetric nonsingular ``B``.

    Uses the SVD ``B = W diag(s) V^H``; the matrix ``W^H conj(V)`` is unitary
    and symmetric, and its principal square root turns ``W`` into a Takagi
    basis. ``C = diag(sqrt(s)) U^T`` then reconstructs ``B``.
    """
    B = _sym_check(B)
    B = (B + B.T) / 2
    n = B.shape[0]
    W, s, Vh = np.linalg.svd(B)
    policy = policy or TolPolicy.from_env()
    if s[-1] <= policy.threshold(B.shape, s[0]):
        raise SingularInput("matrix is numerically singular")
    Z = W.conj().T @ Vh.T
    U = W @ sla.sqrtm(Z)
    C = np.sqrt(s)[:, None] * U.T
    nb = np.linalg.norm(B)
    if np.linalg.norm(C.T @ C - B) <= 1e-11 * nb:
        return C
    # fallback: the principal square root of B is a polynomial in B, hence symmetric
    R = sla.sqrtm(B)
    if np.linalg.norm(R.T @ R - B) <= 1e-11 * nb:
        return R.astype(complex)
    raise NumericalAmbiguity(f"Takagi reconstruction failed for order {n}")


@dataclass(frozen=True)
class Inertia:
    n_plus: int
    n_minus: int
    n_zero: int

    def as_tuple(self):
        return (self.n_plus, self.n_minus, self.n_zero)


def check_hermitian(H, tol=None) -> np.ndarray:
    H = as_mat(H, "H")
    if H.shape[0] != H.shape[1]:
        raise NotHermitian("matrix must be square")
    nh = np.linalg.norm(H)
    if np.linalg.norm(H - H.conj().T) > (tol if tol is not None else 1e-10 * (1 + nh)):
        raise NotHermitian("matrix is not Hermitian")
    return H


def inertia_of(H, tol: float | None = None) -> Inertia:
    """Counts of positive, negative and (numerically) zero eigenvalues."""
    H = check_hermitian(H)
    w = np.linalg.eigvalsh((H + H.conj().T) / 2)
    if tol is None:
        tol = TolPolicy.from_env().threshold(H.shape, float(np.max(np.abs(w))))
    return Inertia(int(np.sum(w > tol)), int(np.sum(w < -tol)), int(np.sum(np.abs(w) <= tol)))


# --------------------------------------------------------------------------
# small helpers shared by other modules
# --------------------------------------------------------------------------

def antisym_basis(n: int) -> list:
    """Real basis ``E_jk - E_kj`` (j < k) of antisymmetric ``n x n`` matrices."""
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            K = np.zeros((n, n))
            K[j, k], K[k, j] = 1.0, -1.0
            out.append(K)
    return out


def antisym_from_vec(v, n: int) -> np.ndarray:
    K = np.zeros((n, n), dtype=np.asarray(v).dtype if np.iscomplexobj(v) else float)
    iu = np.triu_indices(n, 1)
    K[iu] = v
    return K - K.T


def skew_hermitian_from_vec(v, n: int) -> np.ndarray:
    """Map ``n^2`` reals to a skew-Hermitian matrix (diagonal imaginary)."""
    v = np.asarray(v, dtype=float)
    iu = np.triu_indices(n, 1)
    k = len(iu[0])
    S = np.zeros((n, n), dtype=complex)
    S[iu] = v[:k] + 1j * v[k:2 * k]
    S = S - S.conj().T
    S[np.diag_indices(n)] = 1j * v[2 * k:2 * k + n]
    return S


def realify_columns(cols: Iterable[np.ndarray]) -> np.ndarray:
    """Stack complex vectors as real columns ``[Re; Im]``."""
    cols = [np.ravel(c) for c in cols]
    if not cols:
        return np.zeros((0, 0))
    A = np.stack(cols, axis=1)
    return np.vstack([A.real, A.imag])


def rel_residual(lhs, rhs, scale=None) -> float:
    scale = np.linalg.norm(rhs) if scale is None else scale
    return float(np.linalg.norm(np.asarray(lhs) - np.asarray(rhs)) / max(1.0, scale))
