import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthostab.matcore import build_jordan, nullspace
from orthostab.toeplitz import (
    ALTERNATING, Structure, build_omega, build_omega_paired, reshuffle, reshuffle_block,
    toeplitz, toeplitz_coeffs_of, unreshuffle,
)
from orthostab.matcore import InputValidationError


def test_realize_examples():
    assert np.array_equal(toeplitz(2.0), [[2.0]])
    a0, a1, a2 = 1 + 2j, 3 - 1j, -0.5j
    assert np.array_equal(toeplitz(a0, a1, kind=ALTERNATING), [[a0, a1], [0, a0.conjugate()]])
    expect = [[a0, a1, a2], [0, a0.conjugate(), a1.conjugate()], [0, 0, a0]]
    assert np.array_equal(toeplitz(a0, a1, a2, kind=ALTERNATING), expect)


def test_omega_examples():
    assert np.array_equal(build_omega(1, 3), np.eye(3))
    O = build_omega(2, 2)
    e = np.eye(4)
    assert np.array_equal(O, np.stack([e[0], e[2], e[1], e[3]], axis=1))
    assert np.array_equal(build_omega_paired(1, 1), np.eye(2))
    assert np.array_equal(build_omega_paired(2, 1), np.stack([e[0], e[2], e[1], e[3]], axis=1))


@given(st.integers(1, 4), st.integers(1, 4))
def test_omega_is_permutation(a, m):
    for O in (build_omega(a, m), build_omega_paired(a, m)):
        assert np.array_equal(O.T @ O, np.eye(O.shape[0]))


def test_bundled_reshuffle_matches_fixture():
    d = json.loads(resources.files("orthostab").joinpath("data", "reshuffle_example.json").read_text())
    out = reshuffle_block(np.array(d["input"], dtype=object), d["left_part"], d["right_part"])
    assert (out == np.array(d["expected"], dtype=object)).all()
    dense = build_omega(3, 2).T @ np.arange(36.0).reshape(6, 6) @ build_omega(2, 3)
    assert np.array_equal(dense, reshuffle_block(np.arange(36.0).reshape(6, 6), (3, 2), (2, 3)))


def test_single_size_reshuffle_is_identity(rng):
    Y = rng.standard_normal((3, 3))
    assert np.array_equal(reshuffle(Y, [(1, 3)]), Y)


@given(st.integers(0, 2 ** 32 - 1), st.booleans())
def test_reshuffle_roundtrip(seed, paired):
    r = np.random.default_rng(seed)
    st_ = Structure(((3, 2), (1, 1)))
    n = st_.order * (2 if paired else 1)
    Y = r.standard_normal((n, n))
    assert np.array_equal(unreshuffle(reshuffle(Y, st_, paired), st_, paired), Y)


def test_reshuffle_turns_grid_of_toeplitz_into_block_toeplitz(rng):
    a, m = 3, 2
    coeffs = rng.standard_normal((m, m, a))
    Y = np.block([[toeplitz(*coeffs[i, j]) for j in range(m)] for i in range(m)])
    R = reshuffle(Y, [(a, m)])
    for i in range(a):
        for j in range(a):
            blk = R[i * m:(i + 1) * m, j * m:(j + 1) * m]
            assert np.array_equal(blk, coeffs[:, :, j - i] if j >= i else np.zeros((m, m)))


@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_toeplitz_closure_and_commutation(n, seed):
    r = np.random.default_rng(seed)
    A = toeplitz(*r.standard_normal(n))
    B = toeplitz(*r.standard_normal(n))
    assert toeplitz_coeffs_of(A @ B) is not None
    assert toeplitz_coeffs_of(2 * A - B) is not None
    J = build_jordan(n, r.standard_normal())
    assert np.linalg.norm(A @ J - J @ A) <= 1e-12 * (1 + np.linalg.norm(A))


@pytest.mark.parametrize("n", range(1, 7))
def test_jordan_commutant_is_toeplitz(n, rng):
    J = build_jordan(n, 0.7)
    K = np.kron(np.eye(n), J) - np.kron(J.T, np.eye(n))
    N = nullspace(K)
    X = (N @ rng.standard_normal(N.shape[1])).reshape(n, n, order="F")
    assert toeplitz_coeffs_of(X, tol=1e-10) is not None


def test_structure_validation():
    with pytest.raises(InputValidationError):
        Structure(((1, 1), (1, 2)))
    with pytest.raises(InputValidationError):
        Structure(((2, 0),))
