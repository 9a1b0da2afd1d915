import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthostab.matcore import (
    ComplexClass, HermSpec, NegPairClass, PosClass, SignedPart, SymClass, SymSpec, ZeroClass,
    assemble_normal_form, build_E, build_jordan, build_sym_block, direct_sum,
)
from orthostab.sylvester import (
    HypothesisViolation, ParamSlot, _consim_coeff, commutant_pair, commutant_sym_spec, commutation_nullity,
    consim_herm_spec, consim_nullity, consim_pair, negpair_transition, paired_block, solve_U_mu,
    unsigned_class_form,
)
from orthostab.toeplitz import toeplitz_coeffs_of


def _samples_ok(space, rng, k=50, tol=1e-9):
    return all(space.residual(space.sample(rng)) <= tol for _ in range(k))


def test_slot_realdims():
    assert ParamSlot("a", "scalar-complex").realdim == 2
    assert ParamSlot("a", "antisymmetric", (4,)).realdim == 12
    assert ParamSlot("a", "orthogonal-chart", (4,), "complex").realdim == 12
    assert ParamSlot("a", "orthogonal-chart", (4,), "real").realdim == 6
    assert ParamSlot("a", "skew-hermitian", (3,)).realdim == 9


def test_commutant_pair_examples(rng):
    assert commutant_pair(2, 2, 1, 3).realdim == 0
    sq = commutant_pair(2, 2, 0.5, 0.5)
    assert sq.realdim == 4
    assert toeplitz_coeffs_of(sq.sample(rng)) is not None
    wide = commutant_pair(2, 3, 0.5, 0.5)
    assert wide.realdim == 4
    X = wide.sample(rng)
    assert np.allclose(X[:, 0], 0)
    assert 2 * commutation_nullity(build_jordan(2, 0.5), build_jordan(3, 0.5)) == wide.realdim
    assert _samples_ok(wide, rng)


def test_consim_pair_examples(rng):
    assert consim_pair("J", "J", (2, 2), (1, 2)).realdim == 0
    real = consim_pair("J", "J", (2, 2), (1.5, 1.5))
    X = real.sample(rng)
    assert real.realdim == 2 and np.allclose(X.imag, 0)
    alt = consim_pair("J", "J", (2, 2), (0, 0))
    assert alt.realdim == 4
    eta = 1 + 1j
    pair = consim_pair("paired", "paired", (1, 1), (eta, eta))
    X = pair.sample(rng)
    assert pair.realdim == 2 and np.isclose(X[1, 1], X[0, 0].conjugate()) and np.isclose(X[0, 1], 0)
    with pytest.raises(HypothesisViolation):
        consim_pair("J", "J", (1, 1), (-1, -1))


@pytest.mark.parametrize("kind,val", [("J", 0.0), ("J", 1.3), ("paired", -0.5), ("paired", 0.4 + 1j)])
@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 2), (3, 3)])
def test_consim_pair_count_matches_oracle(kind, val, m, n, rng):
    sp = consim_pair(kind, kind, (m, n), (val, val))

    assert sp.realdim == consim_nullity(_consim_coeff(kind, m, val), _consim_coeff(kind, n, val))
    assert _samples_ok(sp, rng)
    if sp.realdim:
        assert sp.jacobian_rank().rank == sp.realdim


def test_commutant_sym_spec_examples(rng):
    two = commutant_sym_spec(SymSpec((SymClass(1, ((1, 1),)), SymClass(2, ((1, 1),)))))
    X = two.sample(rng)
    assert two.realdim == 4 and np.isclose(X[0, 1], 0) and np.isclose(X[1, 0], 0)
    assert commutant_sym_spec(SymSpec((SymClass(1, ((2, 1),)),))).realdim == 4
    assert commutant_sym_spec(SymSpec((SymClass(1, ((1, 2),)),))).realdim == 8


@given(st.integers(0, 2 ** 32 - 1))
def test_commutant_sym_spec_matches_kronecker_oracle(seed):
    r = np.random.default_rng(seed)
    spec = SymSpec((SymClass(0.5 + 1j, ((3, 1), (1, 2))), SymClass(-1, ((2, 1),))))
    sp = commutant_sym_spec(spec)
    S = assemble_normal_form(spec)
    assert sp.realdim == 2 * commutation_nullity(S, S)
    assert sp.residual(sp.sample(r)) <= 1e-9


def test_solve_U_mu():
    assert np.allclose(solve_U_mu(1, 0.7), [[1]])
    for beta in range(1, 6):
        mu = 0.9
        U = solve_U_mu(beta, mu)
        Ji = build_jordan(beta, 1j * mu)
        assert np.linalg.norm(U @ build_jordan(beta, -mu * mu) - Ji @ Ji @ U) <= 1e-12
        E = build_E(beta)
        T = E @ U.T @ E @ U / 1j ** (beta + 1)
        assert np.allclose(T.imag, 0) and toeplitz_coeffs_of(T.real) is not None
        # rows alternate between real and purely imaginary
        assert np.allclose(U[0::2].imag, 0) and np.allclose(U[1::2].real, 0)


@pytest.mark.parametrize("beta", range(1, 5))
def test_negpair_transition_identity(beta):
    negpair_transition(beta, 1.1)  # asserts internally
    assert np.linalg.matrix_rank(negpair_transition(beta, 1.1)) == 2 * beta


@pytest.mark.parametrize("spec,expected", [
    (HermSpec((PosClass(1.5, ((1, 1),)),)), 1),
    (HermSpec((ZeroClass(((2, 1),)),)), 4),
    (HermSpec((ComplexClass(1 + 1j, ((1, 1),)),)), 2),
])
def test_consim_herm_spec_examples(spec, expected, rng):
    sp = consim_herm_spec(spec, 0)
    assert sp.realdim == expected
    H = unsigned_class_form(spec.classes[0])
    assert consim_nullity(H, H) == expected
    assert _samples_ok(sp, rng)


@pytest.mark.parametrize("cls", [
    PosClass(2.0, ((3, 1), (1, 2))), ZeroClass(((3, 1), (2, 2))),
    NegPairClass(0.7, ((2, 1), (1, 1))), ComplexClass(0.5 + 1j, ((2, 2),)),
])
def test_consim_herm_spec_counts(cls, rng):
    sp = consim_herm_spec(HermSpec((cls,)), 0)
    H = unsigned_class_form(cls)
    assert sp.realdim == consim_nullity(H, H)
    assert _samples_ok(sp, rng)
    assert sp.jacobian_rank().rank == sp.realdim
