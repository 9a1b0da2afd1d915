"""Parameterized solution spaces of ``A X = X B`` and ``A conj(X) = X B``.

The coefficient matrices are the Jordan-type blocks of the normal forms,
so every solution space has an explicit Toeplitz-shaped chart. Each space
also carries its defining residual, which lets tests check every
evaluated point and compare parameter counts against a vectorized
nullspace computation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from .matcore import (
    ComplexClass, DomainError, HermSpec, InputValidationError, NegPairClass,
    PosClass, SymSpec, TolPolicy, ZeroClass, antisym_from_vec, build_E,
    build_herm_block, build_jordan, build_P, build_P_quarter, direct_sum,
    rank_nullity, skew_hermitian_from_vec, assemble_normal_form,
)
from .toeplitz import ALTERNATING, PLAIN, embed_block, toeplitz

SHAPES = ("scalar-complex", "scalar-real", "matrix", "antisymmetric",
          "skew-hermitian", "orthogonal-chart", "coords")


class HypothesisViolation(InputValidationError):
    pass


class InvalidClass(InputValidationError):
    pass


# --------------------------------------------------------------------------
# parameter slots and solution spaces
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamSlot:
    """One typed block of free real parameters.

    ``orthogonal-chart`` slots hold the antisymmetric generator ``K``; the
    owning evaluator maps it through the matrix exponential. ``coords``
    slots are real coordinates in a basis fixed by the evaluator.
    """
    name: str
    shape: str
    size: tuple = ()
    field: str = "complex"

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown slot shape {self.shape!r}")
        if self.field not in ("real", "complex"):
            raise ValueError("field must be real or complex")

    @property
    def realdim(self) -> int:
        f = 2 if self.field == "complex" else 1
        if self.shape == "scalar-complex":
            return 2
        if self.shape == "scalar-real":
            return 1
        if self.shape == "matrix":
            return f * self.size[0] * self.size[1]
        n = self.size[0]
        if self.shape in ("antisymmetric", "orthogonal-chart"):
            return f * n * (n - 1) // 2
        if self.shape == "skew-hermitian":
            return n * n
        return n  # coords

    def value(self, vec):
        vec = np.asarray(vec, dtype=float)
        if self.shape == "scalar-complex":
            return complex(vec[0], vec[1])
        if self.shape == "scalar-real":
            return float(vec[0])
        if self.shape == "matrix":
            r, c = self.size
            if self.field == "real":
                return vec.reshape(r, c)
            return vec[:r * c].reshape(r, c) + 1j * vec[r * c:].reshape(r, c)
        n = self.size[0]
        if self.shape in ("antisymmetric", "orthogonal-chart"):
            k = n * (n - 1) // 2
            if self.field == "real":
                return antisym_from_vec(vec, n)
            return antisym_from_vec(vec[:k] + 1j * vec[k:], n)
        if self.shape == "skew-hermitian":
            return skew_hermitian_from_vec(vec, n)
        return vec

    def to_json(self):
        return {"name": self.name, "shape": self.shape, "size": list(self.size),
                "field": self.field, "realdim": self.realdim}


@dataclass
class SolutionSpace:
    """Chart of a solution set: base point, typed slots and an evaluator.

    ``evaluator`` maps a flat real parameter vector (slots concatenated in
    order) to a matrix; the zero vector maps to ``base``. ``residual``
    returns the relative residual of the defining equation at a matrix.
    """
    ambient_order: tuple
    base: np.ndarray
    params: tuple
    evaluator: Callable[[np.ndarray], np.ndarray]
    residual: Callable[[np.ndarray], float] | None = None
    notes: dict = field(default_factory=dict)

    @property
    def realdim(self) -> int:
        return sum(p.realdim for p in self.params)

    def flatten(self, values) -> np.ndarray:
        if values is None:
            return np.zeros(self.realdim)
        if isinstance(values, dict):
            out = []
            for p in self.params:
                v = values.get(p.name)
                out.append(np.zeros(p.realdim) if v is None else np.asarray(v, float).ravel())
            return np.concatenate(out) if out else np.zeros(0)
        vec = np.asarray(values, dtype=float).ravel()
        if vec.size != self.realdim:
            raise InputValidationError(f"expected {self.realdim} parameters, got {vec.size}")
        return vec

    def split(self, vec) -> dict:
        out, o = {}, 0
        for p in self.params:
            out[p.name] = vec[o:o + p.realdim]
            o += p.realdim
        return out

    def evaluate(self, values=None) -> np.ndarray:
        return self.evaluator(self.flatten(values))

    def sample(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.evaluate(scale * rng.standard_normal(self.realdim))

    def jacobian(self, at=None, h: float = 1e-6) -> np.ndarray:
        """Central finite-difference Jacobian as a real matrix ``[Re; Im]``."""
        x0 = self.flatten(at)
        cols = []
        for k in range(self.realdim):
            e = np.zeros_like(x0)
            e[k] = h
            d = (self.evaluator(x0 + e) - self.evaluator(x0 - e)) / (2 * h)
            cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
        if not cols:
            return np.zeros((2 * self.base.size, 0))
        return np.stack(cols, axis=1)

    def jacobian_rank(self, at=None, h: float = 1e-6, policy: TolPolicy | None = None):
        J = self.jacobian(at, h)
        if J.shape[1] == 0:
            return rank_nullity(np.zeros((1, 0)))
        # finite differences carry O(h^2) error, so the threshold is relative to h^2
        policy = policy or TolPolicy(atol=max(1e-7, 1e3 * h * h) * max(1.0, np.abs(J).max()))
        return rank_nullity(J, policy)


def _linear_space(base, slots, directions, residual=None, notes=None) -> SolutionSpace:
    """Affine space ``base + sum_k x_k D_k`` with one direction per real parameter."""
    base = np.asarray(base, dtype=complex)
    D = np.array(directions, dtype=complex).reshape(len(directions), *base.shape) \
        if directions else np.zeros((0,) + base.shape, dtype=complex)

    def ev(x):
        return base + np.tensordot(x, D, axes=1) if len(D) else base.copy()

    sp = SolutionSpace(base.shape, base, tuple(slots), ev, residual, notes or {})
    assert sp.realdim == len(D)
    return sp


def _toeplitz_directions(p, rows, cols, kind=PLAIN, real=False):
    """Real directions of ``embed(T(a_0..a_{p-1}))`` in a rows x cols frame."""
    dirs = []
    for n in range(p):
        c = np.zeros(p, dtype=complex)
        c[n] = 1.0
        dirs.append(embed_block(toeplitz(*c, kind=kind), rows, cols))
    if real:
        return dirs
    imag = []
    for n in range(p):
        c = np.zeros(p, dtype=complex)
        c[n] = 1j
        imag.append(embed_block(toeplitz(*c, kind=kind), rows, cols))
    # slot layout for a complex scalar is (re, im)
    return [d for pair in zip(dirs, imag) for d in pair]


# --------------------------------------------------------------------------
# independent vectorized nullities
# --------------------------------------------------------------------------

def commutation_nullity(A, B, policy=None) -> int:
    """Complex dimension of ``{X : A X = X B}`` via the Kronecker system."""
    A, B = np.asarray(A, complex), np.asarray(B, complex)
    m, n = A.shape[0], B.shape[0]
    K = np.kron(np.eye(n), A) - np.kron(B.T, np.eye(m))
    return rank_nullity(K, policy).nullity


def consim_operator(A, B) -> np.ndarray:
    """Real matrix of ``X -> A conj(X) - X B`` on ``(Re X, Im X)``."""
    A, B = np.asarray(A, complex), np.asarray(B, complex)
    m, n = A.shape[0], B.shape[0]
    cols = []
    for unit in (1.0, 1j):
        for idx in range(m * n):
            X = np.zeros(m * n, dtype=complex)
            X[idx] = unit
            X = X.reshape(m, n)
            Y = A @ X.conj() - X @ B
            cols.append(np.concatenate([Y.real.ravel(), Y.imag.ravel()]))
    return np.stack(cols, axis=1)


def consim_nullity(A, B, policy=None) -> int:
    """Real dimension of ``{X : A conj(X) = X B}``."""
    return rank_nullity(consim_operator(A, B), policy).nullity


# --------------------------------------------------------------------------
# single block pairs
# --------------------------------------------------------------------------

def commutant_pair(m: int, n: int, lam1, lam2) -> SolutionSpace:
    """Solutions of ``J_m(lam1) X = X J_n(lam2)``.

    Distinct eigenvalues give the zero space; equal ones give an embedded
    complex upper-triangular Toeplitz matrix with ``min(m, n)`` complex
    parameters.
    """
    A, B = build_jordan(m, lam1), build_jordan(n, lam2)

    def res(X):
        return float(np.linalg.norm(A @ X - X @ B) / max(1.0, np.linalg.norm(X)))

    base = np.zeros((m, n), dtype=complex)
    if complex(lam1) != complex(lam2):
        return _linear_space(base, (), [], res)
    p = min(m, n)
    slots = [ParamSlot(f"t{k}", "scalar-complex") for k in range(p)]
    return _linear_space(base, slots, _toeplitz_directions(p, m, n), res)


def paired_block(m: int, eta) -> np.ndarray:
    """The consimilarity block ``[[0, I], [J_m(eta), 0]]``."""
    Z = np.zeros((m, m), dtype=complex)
    return np.block([[Z, np.eye(m)], [build_jordan(m, eta), Z]])


def _consim_coeff(kind, m, value):
    value = complex(value)
    if kind == "J":
        if value.imag != 0 or value.real < 0:
            raise HypothesisViolation("Jordan kind needs a real non-negative eigenvalue")
        return build_jordan(m, value.real)
    if kind == "paired":
        if value.imag == 0 and value.real >= 0:
            raise HypothesisViolation("paired kind needs eta outside the non-negative reals")
        return paired_block(m, value)
    raise HypothesisViolation(f"unknown block kind {kind!r}")


def consim_pair(kindM: str, kindN: str, sizes: Sequence[int], values: Sequence) -> SolutionSpace:
    """Solutions of ``A conj(X) = X B`` for Jordan or paired blocks.

    Parameters
    ----------
    kindM, kindN : {"J", "paired"}
        ``J`` is ``J_m(lam)`` with ``lam >= 0``; ``paired`` is
        ``[[0, I], [J_m(eta), 0]]`` with ``eta`` not a non-negative real.
    sizes : (m, n)
    values : (lam_or_eta_M, lam_or_eta_N)
    """
    m, n = sizes
    A = _consim_coeff(kindM, m, values[0])
    B = _consim_coeff(kindN, n, values[1])

    def res(X):
        return float(np.linalg.norm(A @ X.conj() - X @ B) / max(1.0, np.linalg.norm(X)))

    base = np.zeros(A.shape[:1] + B.shape[1:], dtype=complex)
    v1, v2 = complex(values[0]), complex(values[1])
    if kindM != kindN or v1 != v2:
        return _linear_space(base, (), [], res)
    p = min(m, n)
    if kindM == "J":
        if v1.real > 0:
            slots = [ParamSlot(f"t{k}", "scalar-real", field="real") for k in range(p)]
            return _linear_space(base, slots, _toeplitz_directions(p, m, n, real=True), res)
        slots = [ParamSlot(f"t{k}", "scalar-complex") for k in range(p)]
        return _linear_space(base, slots, _toeplitz_directions(p, m, n, kind=ALTERNATING), res)
    # paired/paired: [[T1, T2], [J_m(eta) conj(T2), conj(T1)]], T2 kept only for real eta
    dirs, slots = [], []
    for name, which in (("a", 1), ("b", 2)):
        if which == 2 and v1.imag != 0:
            continue
        for k in range(p):
            slots.append(ParamSlot(f"{name}{k}", "scalar-complex"))
            for unit in (1.0, 1j):
                c = np.zeros(p, dtype=complex)
                c[k] = unit
                T = embed_block(toeplitz(*c), m, n)
                X = np.zeros((2 * m, 2 * n), dtype=complex)
                if which == 1:
                    X[:m, :n], X[m:, n:] = T, T.conj()
                else:
                    X[:m, n:], X[m:, :n] = T, build_jordan(m, v1) @ T.conj()
                dirs.append(X)
    return _linear_space(base, slots, dirs, res)


# --------------------------------------------------------------------------
# whole specs
# --------------------------------------------------------------------------

def _grid_directions(sizes, pair_dirs):
    """Lift per-(u, v) block directions into the full grid of blocks."""
    offs = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offs[-1])
    out = []
    for (u, v), dirs in pair_dirs:
        for d in dirs:
            X = np.zeros((n, n), dtype=complex)
            X[offs[u]:offs[u + 1], offs[v]:offs[v + 1]] = d
            out.append(X)
    return out


def commutant_sym_spec(spec: SymSpec) -> SolutionSpace:
    """Commutant of the symmetric normal form: ``X = P Y P^{-1}`` per class."""
    S = assemble_normal_form(spec)
    n = S.shape[0]
    slots, dirs = [], []
    off = 0
    for ci, c in enumerate(spec.classes):
        sizes = [a for a, m in c.parts for _ in range(m)]
        P = direct_sum(*[build_P(a) for a in sizes])
        Pinv = np.linalg.inv(P)
        pair_dirs = []
        for u, a in enumerate(sizes):
            for v, b in enumerate(sizes):
                p = min(a, b)
                slots += [ParamSlot(f"c{ci}.y{u}.{v}.t{k}", "scalar-complex") for k in range(p)]
                pair_dirs.append(((u, v), _toeplitz_directions(p, a, b)))
        k = sum(sizes)
        for d in _grid_directions(sizes, pair_dirs):
            X = np.zeros((n, n), dtype=complex)
            X[off:off + k, off:off + k] = P @ d @ Pinv
            dirs.append(X)
        off += k

    def res(X):
        return float(np.linalg.norm(S @ X - X @ S) / max(1.0, np.linalg.norm(X)))

    return _linear_space(np.zeros((n, n), dtype=complex), slots, dirs, res)


def solve_U_mu(beta: int, mu: float) -> np.ndarray:
    """Nonsingular ``U`` with ``U J(-mu^2) = J(i mu)^2 U``.

    Columns solve ``(J(i mu)^2 + mu^2) u_k = u_{k-1}`` starting from
    ``u_1 = e_1`` with zero first component afterwards, which makes odd
    rows real and even rows purely imaginary.
    """
    if int(beta) != beta or beta < 1:
        raise InputValidationError("beta must be a positive integer")
    mu = float(mu)
    if not mu > 0:
        raise DomainError("mu must be positive")
    b = int(beta)
    Jm = build_jordan(b, 1j * mu)
    M = Jm @ Jm + mu * mu * np.eye(b)
    U = np.zeros((b, b), dtype=complex)
    U[0, 0] = 1.0
    for k in range(1, b):
        U[1:, k] = sla.solve_triangular(M[:b - 1, 1:], U[:b - 1, k - 1])
    return U


def negpair_transition(beta: int, mu: float) -> np.ndarray:
    """``R`` with ``K_beta(mu) conj(R) = R [[0, I], [J(-mu^2), 0]]``."""
    b = beta
    Pq = build_P_quarter(b)
    P = np.exp(0.25j * np.pi) * direct_sum(Pq, Pq)
    W = np.diag([1j ** j for j in range(b)])
    V = np.exp(0.25j * np.pi) * direct_sum(W, W.conj())
    U = solve_U_mu(b, mu)
    Z = np.zeros((b, b), dtype=complex)
    S = np.block([[Z, U], [build_jordan(b, -1j * mu) @ U.conj(), Z]])
    R = np.linalg.solve(P, np.linalg.solve(V, S))
    H = build_herm_block("K", b, mu)
    if np.linalg.norm(H @ R.conj() - R @ paired_block(b, -mu * mu)) > 1e-9 * (1 + mu) * np.linalg.norm(R):
        raise AssertionError("paired-block transition identity failed")
    return R


def _class_of(spec: HermSpec, cls):
    if isinstance(cls, int):
        if not 0 <= cls < len(spec.classes):
            raise InvalidClass(f"class index {cls} out of range")
        return spec.classes[cls]
    if cls not in spec.classes:
        raise InvalidClass("class is not part of the spec")
    return cls


def unsigned_class_form(c) -> np.ndarray:
    """The class block with every sign set to +1."""
    if isinstance(c, (ZeroClass, PosClass)):
        lam = 0.0 if isinstance(c, ZeroClass) else c.lam
        return direct_sum(*[build_herm_block("H", p.alpha, lam) for p in c.parts for _ in range(p.m)])
    if isinstance(c, NegPairClass):
        return direct_sum(*[build_herm_block("K", b, c.mu) for b, m in c.parts for _ in range(m)])
    if isinstance(c, ComplexClass):
        return direct_sum(*[build_herm_block("L", g, c.xi) for g, m in c.parts for _ in range(m)])
    raise InvalidClass(f"not a Hermitian class: {c!r}")


def class_transition(c):
    """``(R, Jq_kind)`` with ``H1 conj(R) = R C`` for the class's unsigned form ``H1``.

    ``C`` is the direct sum of Jordan blocks (kind ``"J"``), paired blocks
    (``"paired"``), or conjugate Jordan pairs (``"conjpair"``).
    """
    if isinstance(c, (ZeroClass, PosClass)):
        sizes = [p.alpha for p in c.parts for _ in range(p.m)]
        P = direct_sum(*[build_P_quarter(a) for a in sizes])
        return np.linalg.inv(P), sizes
    if isinstance(c, NegPairClass):
        sizes = [b for b, m in c.parts for _ in range(m)]
        return direct_sum(*[negpair_transition(b, c.mu) for b in sizes]), sizes
    sizes = [g for g, m in c.parts for _ in range(m)]
    P = direct_sum(*[direct_sum(build_P_quarter(g), build_P_quarter(g)) for g in sizes])
    return np.linalg.inv(P), sizes


def consim_herm_spec(spec: HermSpec, cls=0) -> SolutionSpace:
    """Solutions of ``H1 conj(X) = X H1`` for one class of a Hermitian spec.

    ``H1`` is the class block with all signs +1. The chart is
    ``X = R Y R^{-1}`` where ``R`` is the class transition and ``Y`` is a
    grid of consimilarity-commuting blocks: real or alternating Toeplitz
    for Jordan blocks, the paired form for negative pairs, and
    ``T (+) conj(T)`` for complex pairs.
    """
    c = _class_of(spec, cls)
    H1 = unsigned_class_form(c)
    R, sizes = class_transition(c)
    Rinv = np.linalg.inv(R)
    slots, pair_dirs = [], []
    for u, a in enumerate(sizes):
        for v, b in enumerate(sizes):
            if isinstance(c, (ZeroClass, PosClass)):
                lam = 0.0 if isinstance(c, ZeroClass) else c.lam
                sp = consim_pair("J", "J", (a, b), (lam, lam))
                blk_dirs = [sp.evaluate(np.eye(sp.realdim)[k]) for k in range(sp.realdim)]
            elif isinstance(c, NegPairClass):
                eta = -c.mu * c.mu
                sp = consim_pair("paired", "paired", (a, b), (eta, eta))
                blk_dirs = [sp.evaluate(np.eye(sp.realdim)[k]) for k in range(sp.realdim)]
            else:
                sp = commutant_pair(a, b, c.xi, c.xi)
                blk_dirs = []
                for k in range(sp.realdim):
                    T = sp.evaluate(np.eye(sp.realdim)[k])
                    blk_dirs.append(direct_sum(T, T.conj()) if a == b else
                                    np.block([[T, np.zeros_like(T)], [np.zeros_like(T), T.conj()]]))
            slots += [ParamSlot(f"y{u}.{v}.{p.name}", p.shape, p.size, p.field) for p in sp.params]
            pair_dirs.append(((u, v), blk_dirs))
    mult = 1 if isinstance(c, (ZeroClass, PosClass)) else 2
    dirs = [R @ d @ Rinv for d in _grid_directions([mult * s for s in sizes], pair_dirs)]

    def res(X):
        return float(np.linalg.norm(H1 @ X.conj() - X @ H1) / max(1.0, np.linalg.norm(X)))

    n = H1.shape[0]
    return _linear_space(np.zeros((n, n), dtype=complex), slots, dirs, res)
