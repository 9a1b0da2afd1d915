"""Recursive solver for ``B' = F Y^T F B Y`` over block-Toeplitz ``Y``.

``F`` is the direct sum of block backward identities, ``B`` and ``B'`` are
direct sums of upper-triangular block Toeplitz matrices with symmetric
coefficient blocks, and ``Y`` is an ``N x N`` grid whose ``(r, s)`` block
is a (block) Toeplitz matrix padded with zeros. The solver fixes the
below-diagonal blocks freely, solves the leading diagonal coefficients by
congruence normal forms, and then determines every remaining coefficient
from one linear matrix equation, diagonal by diagonal.

Four variants are supported:

``"I"``
    complex coefficients;
``"Ia"``
    real coefficients and real ``B, B'`` (inertia condition applies);
``"II"``
    complex-alternating Toeplitz blocks with real ``B, B'``;
``"Ib"``
    complex coefficients restricted to the paired-block shape
    ``[[V_n, W_n], [-mu^2 conj(W_n) + conj(W_{n-1}), conj(V_n)]]``.

The module also hosts the stabilizer pipelines that reduce each class of
a symmetric or Hermitian normal form to one solver call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .matcore import (
    ComplexClass, HermSpec, Inertia, InputValidationError, NegPairClass,
    OrthostabError, PosClass, RankAmbiguous, SymClass, SymSpec, TolPolicy,
    ZeroClass, antisym_from_vec, build_E, build_P, direct_sum, inertia_of,
    nullspace, takagi_factor, class_blocks,
)
from .sylvester import (
    ParamSlot, SolutionSpace, class_transition, unsigned_class_form,
)
from .toeplitz import (
    ALTERNATING, PLAIN, Structure, ToeplitzCoeffs, as_structure, realize,
    reshuffle, unreshuffle,
)

CASES = ("I", "Ia", "Ib", "II")
COND_MAX = 1e12


class InvalidProblem(InputValidationError):
    pass


class OddMultiplicity(InputValidationError):
    pass


class InfeasibleProblem(OrthostabError):
    pass


# --------------------------------------------------------------------------
# problem and solution values
# --------------------------------------------------------------------------

def _coeff_tuple(seq, parts, what):
    out = []
    if len(seq) != len(parts):
        raise InvalidProblem(f"{what}: need one coefficient sequence per part")
    for (a, m), cs in zip(parts, seq):
        cs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in cs]
        cs = cs + [np.zeros((m, m), dtype=complex)] * (a - len(cs))
        if len(cs) != a or any(c.shape != (m, m) for c in cs):
            raise InvalidProblem(f"{what}: part ({a},{m}) needs {a} blocks of shape {m}x{m}")
        for c in cs:
            if np.linalg.norm(c - c.T) > 1e-10 * (1 + np.linalg.norm(c)):
                raise InvalidProblem(f"{what}: coefficient blocks must be symmetric")
        out.append(tuple(cs))
    return tuple(out)


@dataclass(frozen=True)
class StabProblem:
    """Data of ``B' = F Y^T F B Y``.

    ``Bcoeffs[r]`` and ``Gcoeffs[r]`` are the Toeplitz coefficient blocks
    of part ``r`` of ``B`` and ``B'``; sequences shorter than ``alpha_r``
    are padded with zero blocks. ``mu`` is required for case ``"Ib"``.
    """
    structure: Structure
    Bcoeffs: tuple
    Gcoeffs: tuple
    case: str = "I"
    mu: float | None = None

    def __post_init__(self):
        st = as_structure(self.structure)
        object.__setattr__(self, "structure", st)
        if self.case not in CASES:
            raise InvalidProblem(f"unknown case {self.case!r}")
        B = _coeff_tuple(self.Bcoeffs, st.parts, "B")
        G = _coeff_tuple(self.Gcoeffs, st.parts, "B'")
        object.__setattr__(self, "Bcoeffs", B)
        object.__setattr__(self, "Gcoeffs", G)
        for cs in B + G:
            s = np.linalg.svd(cs[0], compute_uv=False)
            if s[-1] <= 1e-12 * max(1.0, s[0]):
                raise InvalidProblem("leading coefficient blocks must be nonsingular")
        if self.case in ("Ia", "II"):
            if any(np.abs(c.imag).max() > 0 for cs in B + G for c in cs):
                raise InvalidProblem(f"case {self.case} needs real B and B'")
        if self.case == "Ib":
            if self.mu is None or not self.mu > 0:
                raise InvalidProblem("case Ib needs mu > 0")
            if any(m % 2 for _, m in st.parts):
                raise OddMultiplicity("case Ib needs even multiplicities")
            if any(np.linalg.norm(b - g) > 1e-12 * (1 + np.linalg.norm(b))
                   for bs, gs in zip(B, G) for b, g in zip(bs, gs)):
                raise InvalidProblem("case Ib is solved only for B' = B")

    @property
    def kind(self) -> str:
        return ALTERNATING if self.case == "II" else PLAIN

    @property
    def real(self) -> bool:
        return self.case == "Ia"

    def F(self) -> np.ndarray:
        return direct_sum(*[np.kron(build_E(a), np.eye(m)) for a, m in self.structure.parts])

    def B(self) -> np.ndarray:
        return direct_sum(*[realize(ToeplitzCoeffs(PLAIN, cs)) for cs in self.Bcoeffs])

    def G(self) -> np.ndarray:
        return direct_sum(*[realize(ToeplitzCoeffs(PLAIN, cs)) for cs in self.Gcoeffs])


def identity_problem(structure, case="I", mu=None) -> StabProblem:
    """``B = B' = I``."""
    st = as_structure(structure)
    I = [[np.eye(m)] for _, m in st.parts]
    return StabProblem(st, I, I, case, mu)


@dataclass
class LedgerEntry:
    step: str
    unknown: tuple  # (r, s, n), 0-based
    equation: str
    slot: str | None = None
    realdim: int = 0

    def to_json(self):
        return {"step": self.step, "unknown": list(self.unknown),
                "equation": self.equation, "slot": self.slot, "realdim": self.realdim}


@dataclass
class StabSolution:
    space: SolutionSpace | None
    feasible: bool
    infeasibility_witness: tuple | None = None
    ledger: list = field(default_factory=list)
    base_residual: float | None = None

    def to_json(self):
        out = {"feasible": self.feasible,
               "ledger": [e.to_json() for e in self.ledger]}
        if self.infeasibility_witness is not None:
            r, a, b = self.infeasibility_witness
            out["infeasibility_witness"] = {"part": r, "inertia_B0": list(a.as_tuple()),
                                            "inertia_G0": list(b.as_tuple())}
        if self.space is not None:
            out["realdim"] = self.space.realdim
            out["params"] = [p.to_json() for p in self.space.params]
            out["base_residual"] = self.base_residual
        return out


# --------------------------------------------------------------------------
# small numerical helpers
# --------------------------------------------------------------------------

def _guarded_solve(A, B):
    c = np.linalg.cond(A)
    if not np.isfinite(c) or c > COND_MAX:
        raise RankAmbiguous(f"leading block too ill-conditioned (cond {c:.3g})")
    return np.linalg.solve(A, B)


def _signature_factor(B0):
    """Real ``H`` and signs ``d`` (positives first) with ``B0 = H^T diag(d) H``."""
    w, V = np.linalg.eigh(np.real(B0))
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    d = np.sign(w)
    H = np.sqrt(np.abs(w))[:, None] * V.T
    return H, d


def _inertia_real(B0) -> Inertia:
    return inertia_of(np.real(B0).astype(complex))


def residual(problem: StabProblem, Y) -> float:
    """``||F Y^T F B Y - B'|| / ||B||``."""
    F, B, G = problem.F(), problem.B(), problem.G()
    return float(np.linalg.norm(F @ Y.T @ F @ B @ Y - G) / max(1e-300, np.linalg.norm(B)))


# --------------------------------------------------------------------------
# the ladder
# --------------------------------------------------------------------------

class _Ladder:
    """One pass of the recursive solve; builds slots on the planning pass."""

    def __init__(self, problem: StabProblem):
        self.pb = problem
        st = problem.structure
        self.st = st
        self.N = st.N
        self.offs = st.offsets
        self.n = st.order
        self.F = problem.F()
        self.Bm = problem.B()
        self.slots: list[ParamSlot] = []
        self.ledger: list[LedgerEntry] = []
        self.planned = False
        self.prep = {}
        self.witness = None
        self._prepare()

    # -- layout ------------------------------------------------------------
    def b(self, r, s):
        return min(self.st.alpha(r), self.st.alpha(s))

    def assemble(self, A):
        """Dense ``Y`` from the coefficient dictionary ``A[(r, s)] = [A_0, ...]``."""
        Y = np.zeros((self.n, self.n), dtype=complex)
        for (r, s), cs in A.items():
            ar, mr = self.st.parts[r]
            as_, ms = self.st.parts[s]
            b = self.b(r, s)
            full = list(cs) + [np.zeros((mr, ms), dtype=complex)] * (b - len(cs))
            T = realize(ToeplitzCoeffs(self.pb.kind, full))
            r0, c0 = self.offs[r], self.offs[s] + (as_ - b) * ms
            Y[r0:r0 + b * mr, c0:c0 + b * ms] = T
        return Y

    def entry(self, A, r, s, j):
        """First block row, block column ``j`` of block ``(r, s)`` of ``F Y^T F B Y``."""
        Y = self.assemble(A)
        mr, ms = self.st.mult(r), self.st.mult(s)
        rows = slice(self.offs[r], self.offs[r] + mr)
        cols = slice(self.offs[s] + j * ms, self.offs[s] + (j + 1) * ms)
        left = (self.F @ Y.T @ self.F)[rows]
        return left @ (self.Bm @ Y[:, cols])

    def target(self, r, s, j):
        if r != s:
            return np.zeros((self.st.mult(r), self.st.mult(s)), dtype=complex)
        return self.pb.Gcoeffs[r][j]

    # -- slot plumbing -----------------------------------------------------
    def take(self, slot: ParamSlot, x, cursor):
        k = slot.realdim
        if not self.planned:
            self.slots.append(slot)
            return slot.value(np.zeros(k)), None
        v = slot.value(x[cursor[0]:cursor[0] + k])
        cursor[0] += k
        return v, None

    def log(self, *args, **kw):
        if not self.planned:
            self.ledger.append(LedgerEntry(*args, **kw))

    # -- precomputation ----------------------------------------------------
    def _prepare(self):
        pb = self.pb
        for r, (a, m) in enumerate(self.st.parts):
            B0, G0 = pb.Bcoeffs[r][0], pb.Gcoeffs[r][0]
            if pb.case == "I" or (pb.case == "II" and a % 2 == 1):
                self.prep[r] = ("takagi", takagi_factor(B0), takagi_factor(G0))
            elif pb.case in ("Ia", "II"):
                iB, iG = _inertia_real(B0), _inertia_real(G0)
                if iB != iG:
                    if self.witness is None:
                        self.witness = (r, iB, iG)
                    continue
                H, d = _signature_factor(B0)
                H2, d2 = _signature_factor(G0)
                self.prep[r] = ("signature", H, H2, d)
            else:
                self.prep[r] = ("lie", self._ib_lie_basis(r))

    # -- case Ib structure -------------------------------------------------
    def _ib_shape(self, r, s, V, W, Wprev):
        mu2 = self.pb.mu ** 2
        low = -mu2 * W.conj()
        if Wprev is not None:
            low = low + Wprev.conj()
        return np.block([[V, W], [low, V.conj()]])

    def _ib_basis(self, r, s):
        """Real basis directions ``(V, W)`` of one structured coefficient."""
        hr, hs = self.st.mult(r) // 2, self.st.mult(s) // 2
        out = []
        for which in range(2):
            for unit in (1.0, 1j):
                for idx in range(hr * hs):
                    M = np.zeros(hr * hs, dtype=complex)
                    M[idx] = unit
                    M = M.reshape(hr, hs)
                    Z = np.zeros_like(M)
                    out.append((M, Z) if which == 0 else (Z, M))
        return out

    def _ib_lie_basis(self, r):
        m = self.st.mult(r)
        B0 = self.pb.Bcoeffs[r][0]
        dirs = [self._ib_shape(r, r, V, W, None) for V, W in self._ib_basis(r, r)]
        cols = [np.concatenate([(X.T @ B0 + B0 @ X).real.ravel(),
                                (X.T @ B0 + B0 @ X).imag.ravel()]) for X in dirs]
        Nsp = nullspace(np.stack(cols, axis=1))
        D = np.array(dirs)
        return [np.tensordot(Nsp[:, k], D, axes=1) for k in range(Nsp.shape[1])]

    # -- one full pass ------------------------------------------------------
    def run(self, x=None):
        pb, st, N = self.pb, self.st, self.N
        x = np.zeros(sum(s.realdim for s in self.slots)) if x is None else np.asarray(x, float)
        cursor = [0]
        A = {(r, s): [] for r in range(N) for s in range(N)}
        Wstore = {}

        # blocks below the diagonal are free
        for r in range(N):
            for s in range(r):
                mr, ms = st.mult(r), st.mult(s)
                for n in range(self.b(r, s)):
                    name = f"free.r{r}.s{s}.n{n}"
                    if pb.case == "Ib":
                        hr, hs = mr // 2, ms // 2
                        V, _ = self.take(ParamSlot(name + ".V", "matrix", (hr, hs)), x, cursor)
                        W, _ = self.take(ParamSlot(name + ".W", "matrix", (hr, hs)), x, cursor)
                        A[(r, s)].append(self._ib_shape(r, s, V, W, Wstore.get((r, s, n - 1))))
                        Wstore[(r, s, n)] = W
                        rd = 4 * hr * hs
                    else:
                        fld = "real" if pb.real else "complex"
                        X, _ = self.take(ParamSlot(name, "matrix", (mr, ms), fld), x, cursor)
                        A[(r, s)].append(np.asarray(X, dtype=complex))
                        rd = mr * ms * (1 if pb.real else 2)
                    self.log("a.a", (r, s, n), "free", name, rd)

        # leading diagonal coefficients
        for r in range(N):
            a, m = st.parts[r]
            name = f"lead.r{r}"
            prep = self.prep[r]
            if prep[0] == "takagi":
                _, H, H2 = prep
                K, _ = self.take(ParamSlot(name, "orthogonal-chart", (m,), "complex"), x, cursor)
                A0 = _guarded_solve(H, sla.expm(K) @ H2)
                eq = "A^T B A = B' (complex orthogonal chart)"
            elif prep[0] == "signature":
                _, H, H2, d = prep
                if pb.case == "Ia":
                    K, _ = self.take(ParamSlot(name, "orthogonal-chart", (m,), "real"), x, cursor)
                    A0 = _guarded_solve(H, sla.expm(d[:, None] * K) @ H2)
                    eq = "A^T B A = B' (real indefinite orthogonal chart)"
                else:
                    S, _ = self.take(ParamSlot(name, "skew-hermitian", (m,)), x, cursor)
                    A0 = _guarded_solve(H, sla.expm(d[:, None] * S) @ H2)
                    eq = "A^* B A = B' (indefinite unitary chart)"
            else:
                basis = prep[1]
                c, _ = self.take(ParamSlot(name, "coords", (len(basis),), "real"), x, cursor)
                X = np.tensordot(c, np.array(basis), axes=1) if basis else np.zeros((m, m))
                A0 = sla.expm(X)
                Wstore[(r, r, 0)] = A0[:m // 2, m // 2:]
                eq = "A^T B A = B (structured Lie chart)"
            A[(r, r)].append(A0)
            self.log("0.0", (r, r, 0), eq, name, self.slots_dim(name))

        # remaining coefficients, diagonal by diagonal
        for j in range(st.alpha(0)):
            for p in range(N):
                if j == 0 and p == 0:
                    continue
                for r in range(N - p):
                    s = r + p
                    if st.alpha(r) < j + 1 or j >= self.b(r, s):
                        continue
                    X = self._step(A, Wstore, r, s, j, x, cursor)
                    A[(r, s)].append(X)
        if not self.planned:
            self.planned = True
        return self.assemble(A)

    def slots_dim(self, name):
        for s in reversed(self.slots):
            if s.name == name:
                return s.realdim
        return 0

    def _lead_hat(self, A, r):
        """Coefficient multiplying the unknown from the left: conj for even alternating parts."""
        A0 = A[(r, r)][0]
        if self.pb.case == "II" and self.st.alpha(r) % 2 == 0:
            return A0.conj()
        return A0

    def _step(self, A, Wstore, r, s, j, x, cursor):
        pb = self.pb
        mr, ms = self.st.mult(r), self.st.mult(s)
        label = f"{j}.{s - r}"
        name = f"step{j}.r{r}.s{s}"
        if pb.case == "Ib":
            return self._step_ib(A, Wstore, r, s, j, x, cursor, label, name)
        zero = np.zeros((mr, ms), dtype=complex)
        A[(r, s)].append(zero)
        Xi = self.entry(A, r, s, j)
        A[(r, s)].pop()
        R = self.target(r, s, j) - Xi
        B0 = pb.Bcoeffs[r][0]
        if r != s:
            X = _guarded_solve(self._lead_hat(A, r).T @ B0, R)
            self.log(label, (r, s, j), "A0^T B0 X = R (unique)", None, 0)
        else:
            A0 = A[(r, r)][0]
            alt = pb.case == "II"
            M = B0 @ (A0.conj() if alt and j % 2 == 1 else A0)
            herm = alt and (self.st.alpha(r) - j) % 2 == 0
            Md = M.conj().T if herm else M.T
            Rd = R.conj().T if herm else R.T
            if np.linalg.norm(R - Rd) > 1e-8 * (1 + np.linalg.norm(R)):
                raise AssertionError(
                    f"right-hand side at step {label} is not {'Hermitian' if herm else 'symmetric'}")
            R = (R + Rd) / 2
            if herm:
                C, _ = self.take(ParamSlot(name, "skew-hermitian", (mr,)), x, cursor)
                eq = "M^* X + X^* M = R (skew-Hermitian freedom)"
            else:
                fld = "real" if pb.real else "complex"
                C, _ = self.take(ParamSlot(name, "antisymmetric", (mr,), fld), x, cursor)
                eq = "M^T X + X^T M = R (antisymmetric freedom)"
            X = _guarded_solve(Md, 0.5 * R + C)
            self.log(label, (r, s, j), eq, name, self.slots_dim(name))
        if pb.real:
            X = X.real.astype(complex)
        return X

    def _step_ib(self, A, Wstore, r, s, j, x, cursor, label, name):
        basis = self._ib_basis(r, s)
        Wprev = Wstore.get((r, s, j - 1))
        A[(r, s)].append(self._ib_shape(r, s, *[np.zeros_like(basis[0][0])] * 2, Wprev))
        Xi = self.entry(A, r, s, j)
        R = self.target(r, s, j) - Xi
        cols = []
        for V, W in basis:
            A[(r, s)][-1] = self._ib_shape(r, s, V, W, Wprev)
            d = self.entry(A, r, s, j) - Xi
            cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
        A[(r, s)].pop()
        L = np.stack(cols, axis=1)
        rhs = np.concatenate([R.real.ravel(), R.imag.ravel()])
        theta, *_ = np.linalg.lstsq(L, rhs, rcond=None)
        if np.linalg.norm(L @ theta - rhs) > 1e-8 * (1 + np.linalg.norm(rhs)):
            raise AssertionError(f"structured equation at step {label} is inconsistent")
        key = ("ibnull", r, s, j)
        if key not in self.prep:
            self.prep[key] = nullspace(L)
        N0 = self.prep[key]
        if N0.shape[1]:
            c, _ = self.take(ParamSlot(name, "coords", (N0.shape[1],), "real"), x, cursor)
            # project the reference kernel basis onto the current kernel
            proj = N0 - np.linalg.pinv(L) @ (L @ N0)
            theta = theta + proj @ c
            self.log(label, (r, s, j), "structured M^T X + X^T M = R", name, N0.shape[1])
        else:
            self.log(label, (r, s, j), "structured A0^T B0 X = R (unique)", None, 0)
        V = sum((t * v for t, (v, _) in zip(theta, basis)), np.zeros_like(basis[0][0]))
        W = sum((t * w for t, (_, w) in zip(theta, basis)), np.zeros_like(basis[0][0]))
        Wstore[(r, s, j)] = W
        return self._ib_shape(r, s, V, W, Wprev)


def solve_stab(problem: StabProblem) -> StabSolution:
    """Solve ``B' = F Y^T F B Y`` and return a chart of the solution set.

    Returns ``feasible=False`` with an inertia witness when a leading
    congruence ``A^T B_0 A = G_0`` (or ``A^* B_0 A = G_0``) has no solution.
    """
    lad = _Ladder(problem)
    if lad.witness is not None:
        return StabSolution(None, False, lad.witness, [])
    Y0 = lad.run()

    def ev(x):
        return lad.run(x)

    def res(Y):
        return residual(problem, Y)

    space = SolutionSpace((lad.n, lad.n), Y0, tuple(lad.slots), ev, res,
                          {"case": problem.case})
    r0 = res(Y0)
    if r0 > 1e-9:
        raise AssertionError(f"solver base point residual {r0:.3g} exceeds 1e-9")
    return StabSolution(space, True, None, lad.ledger, r0)


# --------------------------------------------------------------------------
# closed-form dimension counts (exact integer arithmetic on doubled values)
# --------------------------------------------------------------------------

def _parts(structure):
    return as_structure(structure).parts


def dim_case_I(structure) -> int:
    """``sum_r alpha_r m_r ((m_r - 1)/2 + sum_{s<r} m_s)``."""
    twice, before = 0, 0
    for a, m in _parts(structure):
        twice += a * m * ((m - 1) + 2 * before)
        before += m
    return twice // 2


def dim_case_II(structure) -> int:
    """Displayed closed form for alternating blocks (real dimension).

    ``3/2 sum_{alpha even} m alpha - 1/2 sum_{alpha odd} m (alpha + 1)
    + 2 sum_r alpha_r m_r (m_r + 2 sum_{s<r} m_s)``.
    """
    twice, before = 0, 0
    for a, m in _parts(structure):
        twice += 3 * m * a if a % 2 == 0 else -m * (a + 1)
        twice += 4 * a * m * (m + 2 * before)
        before += m
    return twice // 2


def dim_case_II_ladder(structure) -> int:
    """Real parameter count actually produced by the alternating ladder.

    Per part: ``alpha m^2 - alpha m / 2`` for even ``alpha``,
    ``alpha m^2 - m (alpha + 1) / 2`` for odd ``alpha``; plus
    ``2 alpha_r m_r sum_{s<r} m_s`` for the free lower blocks.
    """
    twice, before = 0, 0
    for a, m in _parts(structure):
        twice += 2 * a * m * m - (a * m if a % 2 == 0 else m * (a + 1))
        twice += 4 * a * m * before
        before += m
    return twice // 2


def dim_case_Ib(structure) -> int:
    """``sum_r m'_r (4 alpha_r m'_r - alpha_r - 2 m'_r + 8 alpha_r sum_{s<r} m'_s)`` with ``m_r = 2 m'_r``."""
    total, before = 0, 0
    for a, m in _parts(structure):
        if m % 2:
            raise OddMultiplicity("multiplicities must be even (m = 2 m')")
        h = m // 2
        total += h * (4 * a * h - a - 2 * h + 8 * a * before)
        before += h
    return total


# --------------------------------------------------------------------------
# stabilizer pipelines
# --------------------------------------------------------------------------

@dataclass
class ClassStab:
    """Solver output for one eigenvalue class plus the map back to ``Q``."""
    key: tuple
    problem: StabProblem
    solution: StabSolution
    to_q: object  # callable: solver Y -> class block of Q
    realdim: int = 0


@dataclass
class StabParameterization:
    classes: list
    space: SolutionSpace | None
    matrix: np.ndarray
    action: str

    @property
    def feasible(self):
        return all(c.solution.feasible for c in self.classes)


def _class_structure(c) -> Structure:
    if isinstance(c, SymClass):
        return Structure(c.parts)
    return Structure(tuple((a, m) for a, m in c.sizes))


def _sym_class(c: SymClass, ci: int) -> ClassStab:
    st = _class_structure(c)
    pb = identity_problem(st, "I")
    sol = solve_stab(pb)
    sizes = [a for a, m in c.parts for _ in range(m)]
    P = direct_sum(*[build_P(a) for a in sizes])
    Pinv = np.linalg.inv(P)

    def to_q(Ycal):
        return P @ unreshuffle(Ycal, st) @ Pinv

    return ClassStab(("sym", c.eigenvalue), pb, sol, to_q)


def _signs_problem(c, st):
    """``B = B'`` with coefficient ``diag(signs)`` per part after reshuffling."""
    coeffs = [[np.diag(np.array(p.signs, dtype=float))] for p in c.parts]
    return coeffs


def _hsigned_class(c, case) -> ClassStab:
    st = _class_structure(c)
    coeffs = _signs_problem(c, st)
    pb = StabProblem(st, coeffs, coeffs, case)
    sol = solve_stab(pb)
    R, sizes = class_transition(c)  # R = P^{-1}
    Rinv = np.linalg.inv(R)
    signs = [s for p in c.parts for s in p.signs]
    svec = np.concatenate([np.full(a, 1.0 if s > 0 else 1j) for a, s in zip(sizes, signs)])

    def to_q(Ycal):
        Y = unreshuffle(Ycal, st)
        Z = (1 / svec)[:, None] * (R @ Y @ Rinv) * svec[None, :]
        return Z.conj()

    return ClassStab(c.key, pb, sol, to_q)


def negpair_metric(c: NegPairClass):
    """``(B, scale)`` for the NegPair class: ``B = scale * Omega^T E R^T R Omega``."""
    R, sizes = class_transition(c)
    E = direct_sum(*[direct_sum(build_E(b), build_E(b)) for b in sizes])
    I = E @ R.T @ R
    st = _class_structure(c)
    Bcal = reshuffle(I, st, paired=True)
    scale = 1.0 / Bcal[0, 0] * abs(Bcal[0, 0])
    return scale * Bcal, R, E


def _negpair_class(c: NegPairClass) -> ClassStab:
    st = _class_structure(c)
    pst = Structure(tuple((b, 2 * m) for b, m in st.parts))
    Bcal, R, E = negpair_metric(c)
    coeffs, off = [], 0
    for b, m in pst.parts:
        blk = Bcal[off:off + m, off:off + b * m]
        cs = [blk[:, n * m:(n + 1) * m] for n in range(b)]
        coeffs.append([(x + x.T) / 2 for x in cs])
        off += b * m
    pb = StabProblem(pst, coeffs, coeffs, "Ib", mu=c.mu)
    # the coefficient list must reproduce B exactly
    if np.linalg.norm(pb.B() - Bcal) > 1e-10 * np.linalg.norm(Bcal):
        raise AssertionError("paired metric is not block Toeplitz after reshuffling")
    sol = solve_stab(pb)
    Rinv = np.linalg.inv(R)

    def to_q(Ycal):
        Y = unreshuffle(Ycal, st, paired=True)
        return (R @ Y @ Rinv).conj()

    return ClassStab(c.key, pb, sol, to_q)


def _complex_class(c: ComplexClass) -> ClassStab:
    st = _class_structure(c)
    pb = identity_problem(st, "I")
    sol = solve_stab(pb)
    R, sizes = class_transition(c)
    Rinv = np.linalg.inv(R)
    offs = np.concatenate([[0], np.cumsum(sizes)])

    def to_q(Vcal):
        V = unreshuffle(Vcal, st)
        n = 2 * int(offs[-1])
        Y = np.zeros((n, n), dtype=complex)
        for u, a in enumerate(sizes):
            for v, b in enumerate(sizes):
                blk = V[offs[u]:offs[u + 1], offs[v]:offs[v + 1]]
                ru, cv = 2 * offs[u], 2 * offs[v]
                Y[ru:ru + a, cv:cv + b] = blk
                Y[ru + a:ru + 2 * a, cv + b:cv + 2 * b] = blk.conj()
        return (R @ Y @ Rinv).conj()

    return ClassStab(c.key, pb, sol, to_q)


def stabilizer_parameterization(spec) -> StabParameterization:
    """Chart of the stabilizer of the normal form of ``spec``.

    Symmetric specs use the similarity action ``Q^{-1} S Q``; Hermitian
    specs use ``Q^* H Q``. Every class is reduced to one solver call, and
    ``Q`` is the direct sum of the class blocks.
    """
    from .matcore import assemble_normal_form
    M = assemble_normal_form(spec)
    out = []
    if isinstance(spec, SymSpec):
        action = "sym"
        for ci, c in enumerate(spec.classes):
            out.append(_sym_class(c, ci))
    else:
        action = "herm"
        for c in spec.classes:
            if isinstance(c, PosClass):
                out.append(_hsigned_class(c, "Ia"))
            elif isinstance(c, ZeroClass):
                out.append(_hsigned_class(c, "II"))
            elif isinstance(c, NegPairClass):
                out.append(_negpair_class(c))
            else:
                out.append(_complex_class(c))
    if not all(cs.solution.feasible for cs in out):
        return StabParameterization(out, None, M, action)
    slots, dims = [], []
    for ci, cs in enumerate(out):
        sp = cs.solution.space
        cs.realdim = sp.realdim
        slots += [ParamSlot(f"c{ci}.{p.name}", p.shape, p.size, p.field) for p in sp.params]
        dims.append(sp.realdim)

    def ev(x):
        blocks, o = [], 0
        for cs, k in zip(out, dims):
            blocks.append(cs.to_q(cs.solution.space.evaluator(x[o:o + k])))
            o += k
        return direct_sum(*blocks)

    from .lieoracle import verify_stab_element

    def res(Q):
        rep = verify_stab_element(Q, M, action, 1.0)
        return max(rep.orth_residual, rep.action_residual)

    base = ev(np.zeros(sum(dims)))
    space = SolutionSpace(M.shape, base, tuple(slots), ev, res, {"action": action})
    return StabParameterization(out, space, M, action)
