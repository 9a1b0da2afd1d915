"""Structural classification of Hermitian matrices and the pair reduction.

The block structure of the Hermitian normal form is read off the Jordan
structure of ``A conj(A)``:

* real eigenvalues ``lambda^2 > 0`` give one block of size ``alpha`` per ``H`` block;
* negative eigenvalues ``-mu^2`` give two equal blocks per ``K`` block;
* non-real eigenvalues ``xi^2`` and ``conj(xi)^2`` give one block each per ``L`` block.

For the eigenvalue 0 the square of a nilpotent Jordan block splits, so
the sizes are taken from the ranks of the alternating products
``A, A conj(A), A conj(A) A, ...`` instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .matcore import (
    ComplexClass, HermSpec, NegPairClass, NumericalAmbiguity, PosClass, TolPolicy,
    ZeroClass, as_mat, assemble_normal_form, check_hermitian, inertia_of,
    rank_nullity, takagi_factor, InputValidationError, NotSymmetric, SingularInput,
)

CLUSTER_TOL = 1e-2


class EigenvalueClusterAmbiguous(NumericalAmbiguity):
    pass


@dataclass
class StructuralClass:
    """Skeleton of a Hermitian normal form: classes with block sizes, plus inertia.

    ``classes`` holds dicts ``{"kind", "value", "parts"}`` where ``value`` is
    ``lambda`` (pos), ``mu`` (negpair), ``xi`` (complex) or ``0`` (zero) and
    ``parts`` is a list of ``(size, multiplicity)`` in decreasing size.
    """
    classes: list
    inertia: tuple
    order: int
    sign_status: str
    notes: list = field(default_factory=list)

    def to_json(self):
        out = []
        for c in self.classes:
            v = c["value"]
            out.append({"kind": c["kind"],
                        "value": [v.real, v.imag] if isinstance(v, complex) else v,
                        "parts": [list(p) for p in c["parts"]]})
        return {"classes": out, "inertia": list(self.inertia), "order": self.order,
                "sign_status": self.sign_status, "notes": list(self.notes)}


def _chain_policy(M):
    return TolPolicy(atol=1e-8 * max(1.0, np.linalg.norm(M, 2)))


def _sizes_from_nullities(d):
    """Jordan sizes from nullities ``d[k] = dim ker N^k`` (``d[0] = 0``)."""
    ge = [d[k] - d[k - 1] for k in range(1, len(d))]  # blocks of size >= k
    parts = []
    for k in range(len(ge)):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        cnt = ge[k] - nxt
        if cnt < 0:
            raise EigenvalueClusterAmbiguous("rank chain is not monotone")
        if cnt:
            parts.append((k + 1, cnt))
    return sorted(parts, reverse=True)


def _power_chain(N, size):
    n = N.shape[0]
    d, P = [0], np.eye(n, dtype=complex)
    for _ in range(size):
        P = P @ N
        d.append(rank_nullity(P, _chain_policy(P)).nullity)
        if d[-1] == size:
            break
    if d[-1] != size:
        raise EigenvalueClusterAmbiguous(
            f"generalized eigenspace dimension {d[-1]} does not match cluster size {size}")
    return d


def _alternating_chain(A, size):
    n = A.shape[0]
    d, P = [0], np.eye(n, dtype=complex)
    for k in range(n):
        P = P @ (A if k % 2 == 0 else A.conj())
        d.append(rank_nullity(P, _chain_policy(P)).nullity)
        if d[-1] == size:
            break
    if d[-1] != size:
        raise EigenvalueClusterAmbiguous("alternating-product ranks do not reach the zero-cluster size")
    return d


def _cluster(w, scale):
    """Single-linkage clusters of eigenvalues at distance ``CLUSTER_TOL * scale``."""
    tol = CLUSTER_TOL * scale
    idx = list(range(len(w)))
    groups = []
    while idx:
        grp = [idx.pop(0)]
        grew = True
        while grew:
            grew = False
            for i in list(idx):
                if min(abs(w[i] - w[j]) for j in grp) <= tol:
                    grp.append(i)
                    idx.remove(i)
                    grew = True
        groups.append(grp)
    return groups


def classify_hermitian(A) -> StructuralClass:
    """Classes and block sizes of the Hermitian normal form of ``A``.

    Eigenvalues of ``A conj(A)`` closer than ``CLUSTER_TOL * max(1, ||A conj(A)||)``
    are treated as one cluster; every cluster is then certified by a rank
    chain, and an uncertifiable cluster raises
    :class:`EigenvalueClusterAmbiguous`. Sign characteristics are not
    recovered; only the inertia of ``A`` is reported.
    """
    A = check_hermitian(as_mat(A, "A"))
    n = A.shape[0]
    M = A @ A.conj()
    scale = max(1.0, np.linalg.norm(M, 2))
    w = np.linalg.eigvals(M)
    groups = _cluster(w, scale)
    classes, seen_conj = [], set()
    zero_tol = CLUSTER_TOL * scale
    for gi, grp in enumerate(groups):
        rho = complex(np.mean(w[grp]))
        size = len(grp)
        if abs(rho) <= zero_tol:
            d = _alternating_chain(A, size)
            classes.append({"kind": "zero", "value": 0.0, "parts": _sizes_from_nullities(d)})
            continue
        d = _power_chain(M - rho * np.eye(n), size)
        parts = _sizes_from_nullities(d)
        if abs(rho.imag) <= zero_tol:
            if rho.real > 0:
                classes.append({"kind": "pos", "value": float(np.sqrt(rho.real)), "parts": parts})
            else:
                if any(m % 2 for _, m in parts):
                    raise EigenvalueClusterAmbiguous("negative eigenvalue blocks must come in pairs")
                classes.append({"kind": "negpair", "value": float(np.sqrt(-rho.real)),
                                "parts": [(b, m // 2) for b, m in parts]})
            continue
        # non-real: keep the member with positive imaginary part, check its partner
        partner = [gj for gj, g in enumerate(groups)
                   if abs(np.mean(w[g]) - rho.conjugate()) <= zero_tol and gj != gi]
        if len(partner) != 1 or len(groups[partner[0]]) != size:
            raise EigenvalueClusterAmbiguous("non-real eigenvalues must come in conjugate pairs")
        if rho.imag < 0:
            continue
        xi = complex(np.sqrt(rho.real + 1j * abs(rho.imag)))
        classes.append({"kind": "complex", "value": xi, "parts": parts})
    total = sum(a * m * (2 if c["kind"] in ("negpair", "complex") else 1)
                for c in classes for a, m in c["parts"])
    if total != n:
        raise EigenvalueClusterAmbiguous(f"class sizes sum to {total}, expected {n}")
    signed = any(c["kind"] == "pos" or (c["kind"] == "zero" and any(a % 2 == 0 for a, _ in c["parts"]))
                 for c in classes)
    classes.sort(key=lambda c: (["zero", "pos", "negpair", "complex"].index(c["kind"]),
                                abs(c["value"])))
    return StructuralClass(classes, inertia_of(A).as_tuple(), n,
                           "undetermined" if signed else "determined-trivially")


def spec_skeleton(spec: HermSpec) -> list:
    """The same skeleton format as :class:`StructuralClass` for a spec."""
    out = []
    for c in spec.classes:
        if isinstance(c, ZeroClass):
            out.append({"kind": "zero", "value": 0.0, "parts": list(c.sizes)})
        elif isinstance(c, PosClass):
            out.append({"kind": "pos", "value": c.lam, "parts": list(c.sizes)})
        elif isinstance(c, NegPairClass):
            out.append({"kind": "negpair", "value": c.mu, "parts": list(c.parts)})
        else:
            out.append({"kind": "complex", "value": c.xi, "parts": list(c.parts)})
    return out


def _same_value(kind, a, b, tol):
    if kind == "complex":
        # xi and -conj(xi) give the same spectrum of A conj(A)
        return min(abs(a * a - b * b), abs(a * a - (b * b).conjugate())) <= tol * max(1, abs(a) ** 2)
    return abs(a - b) <= tol * max(1.0, abs(a))


def skeletons_match(found: list, expected: list, tol: float = 1e-6) -> bool:
    if len(found) != len(expected):
        return False
    pool = list(expected)
    for c in found:
        hit = next((e for e in pool if e["kind"] == c["kind"]
                    and sorted(map(tuple, e["parts"])) == sorted(map(tuple, c["parts"]))
                    and _same_value(c["kind"], c["value"], e["value"], tol)), None)
        if hit is None:
            return False
        pool.remove(hit)
    return True


def random_orthogonal(n: int, rng: np.random.Generator, norm: float = 1.0, real: bool = False):
    """``exp(K)`` for a random antisymmetric ``K`` with spectral norm ``norm``."""
    K = rng.standard_normal((n, n))
    if not real:
        K = K + 1j * rng.standard_normal((n, n))
    K = K - K.T
    s = np.linalg.norm(K, 2)
    if s > 0:
        K = K * (norm / s)
    return sla.expm(K)


def roundtrip_check(spec: HermSpec, Q) -> bool:
    """Scramble the normal form by ``Q^* M Q`` and re-classify it."""
    M = assemble_normal_form(spec)
    Q = as_mat(Q, "Q")
    Mp = Q.conj().T @ M @ Q
    Mp = (Mp + Mp.conj().T) / 2
    found = classify_hermitian(Mp)
    return skeletons_match(found.classes, spec_skeleton(spec))


@dataclass
class Reduction:
    Atilde: np.ndarray
    P: np.ndarray
    c: int
    certificate: float
    flipped: np.ndarray

    def to_json(self):
        from .matcore import mat_to_json
        return {"Atilde": mat_to_json(self.Atilde), "P": mat_to_json(self.P), "c": self.c,
                "certificate": self.certificate, "flipped": mat_to_json(self.flipped)}


def reduce_pair(A, B) -> Reduction:
    """Normalize the pair ``(A, B)`` to ``(P^* A P, P^T B P = I)``.

    ``P = C^{-1}`` where ``C^T C = B``. The symmetric principal square root
    of ``B`` is used for ``C`` when it reconstructs ``B``; otherwise the
    Takagi factor is used. ``flipped`` is the ``c = -1`` companion ``-P^* A P``.
    """
    A = check_hermitian(as_mat(A, "A"))
    B = as_mat(B, "B")
    if A.shape != B.shape:
        raise InputValidationError("A and B must have the same order")
    nb = np.linalg.norm(B)
    if np.linalg.norm(B - B.T) > 1e-10 * (1 + nb):
        raise NotSymmetric("B must be symmetric")
    s = np.linalg.svd(B, compute_uv=False)
    if s[-1] <= 1e-12 * max(1.0, s[0]):
        raise SingularInput("B must be nonsingular")
    C = None
    try:
        R = sla.sqrtm(B)
        if np.all(np.isfinite(R)) and np.linalg.norm(R.T @ R - B) <= 1e-12 * max(1.0, nb):
            C = np.asarray(R, dtype=complex)
    except (ValueError, np.linalg.LinAlgError):
        C = None
    if C is None:
        C = takagi_factor(B)
    P = np.linalg.inv(C)
    At = P.conj().T @ A @ P
    At = (At + At.conj().T) / 2
    cert = float(np.linalg.norm(P.T @ B @ P - np.eye(B.shape[0])))
    return Reduction(At, P, 1, cert, -At)
