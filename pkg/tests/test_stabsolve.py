import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthostab.matcore import (
    ComplexClass, HermSpec, NegPairClass, PosClass, SignedPart, SymClass, SymSpec, ZeroClass,
    InputValidationError,
)
from orthostab.lieoracle import oracle_dim_herm, oracle_dim_sym, verify_stab_element
from orthostab.stabsolve import (
    InvalidProblem, OddMultiplicity, StabProblem, _Ladder, dim_case_I, dim_case_II,
    dim_case_II_ladder, dim_case_Ib, identity_problem, residual, solve_stab,
    stabilizer_parameterization,
)
from orthostab.suite import ladder_example
from orthostab.toeplitz import Structure


def _rand_sym(rng, m, real):
    A = rng.standard_normal((m, m)) + (0 if real else 1j * rng.standard_normal((m, m)))
    return A + A.T + 2 * m * np.eye(m)


def test_dim_case_I_examples():
    assert dim_case_I([(1, 1)]) == 0
    assert dim_case_I([(1, 2)]) == 1
    assert dim_case_I([(3, 2), (1, 3)]) == 12


def test_dim_case_II_display_examples():
    assert dim_case_II([(2, 1)]) == 7
    assert dim_case_II([(1, 1)]) == 1
    assert dim_case_II([(1, 2)]) == 6


def test_dim_case_Ib_examples():
    assert dim_case_Ib([(1, 2)]) == 1
    assert dim_case_Ib([(2, 2)]) == 4
    with pytest.raises(OddMultiplicity):
        dim_case_Ib([(1, 1)])
    with pytest.raises(InputValidationError):
        dim_case_Ib([(1, 2), (1, 2)])


def test_scalar_problem():
    sol = solve_stab(identity_problem([(1, 1)], "I"))
    assert sol.feasible and sol.space.realdim == 0
    assert np.isclose(abs(sol.space.base[0, 0]), 1)


def test_infeasible_inertia_witness():
    sol = solve_stab(StabProblem([(2, 1)], [[[1.0]]], [[[-1.0]]], "II"))
    assert not sol.feasible
    r, a, b = sol.infeasibility_witness
    assert r == 0 and a.as_tuple() == (1, 0, 0) and b.as_tuple() == (0, 1, 0)


def test_odd_size_alternating_part_ignores_inertia():
    assert solve_stab(StabProblem([(3, 1)], [[[1.0]]], [[[-1.0]]], "II")).feasible


def test_bundled_ladder_order_and_residual():
    res = ladder_example()
    assert res["derived_order"] == ["H1", "J3", "J1", "B1", "B3", "I1", "C1", "D1"]
    assert sorted(res["free"]) == ["N1", "P1", "R1", "R3"]
    assert res["leading"] == ["A1", "A3", "A4"]
    assert max(res["residuals"].values()) <= 1e-10
    assert res["realdim"] == dim_case_II_ladder([(4, 1), (2, 1), (1, 1)]) == 11


def test_problem_validation():
    with pytest.raises(InvalidProblem):
        StabProblem([(1, 1)], [[[1.0]]], [[[1.0]]], "nope")
    with pytest.raises(InvalidProblem):
        StabProblem([(1, 2)], [[[[1, 2], [3, 4]]]], [[np.eye(2)]], "I")  # not symmetric
    with pytest.raises(InvalidProblem):
        StabProblem([(1, 1)], [[[0.0]]], [[[1.0]]], "I")  # singular leading block
    with pytest.raises(InvalidProblem):
        StabProblem([(1, 1)], [[[1j]]], [[[1j]]], "Ia")
    with pytest.raises(OddMultiplicity):
        StabProblem([(1, 1)], [[[1.0]]], [[[1.0]]], "Ib", mu=1.0)


STRUCTS = [((1, 2),), ((2, 1),), ((3, 2), (1, 3)), ((4, 2), (2, 1), (1, 2)), ((5, 1), (3, 2), (2, 1))]


@pytest.mark.parametrize("parts", STRUCTS)
@pytest.mark.parametrize("case", ["I", "Ia", "II"])
def test_random_problem_counts_and_residuals(parts, case, rng):
    real = case != "I"
    B = [[_rand_sym(rng, m, real) for _ in range(a)] for a, m in parts]
    if case == "I":
        G = [[_rand_sym(rng, m, real) for _ in range(a)] for a, m in parts]
    else:
        G = []
        for (a, m), bs in zip(parts, B):
            O = np.linalg.qr(rng.standard_normal((m, m)))[0] * 1.7
            G.append([O.T @ bs[0] @ O] + [_rand_sym(rng, m, True) for _ in range(a - 1)])
    sol = solve_stab(StabProblem(parts, B, G, case))
    sp = sol.space
    expected = {"I": 2 * dim_case_I(parts), "Ia": dim_case_I(parts), "II": dim_case_II_ladder(parts)}
    assert sp.realdim == expected[case]
    assert sol.base_residual <= 1e-9
    assert all(sp.residual(sp.sample(rng, 0.3)) <= 1e-9 for _ in range(20))
    if sp.realdim:
        assert sp.jacobian_rank().rank == sp.realdim
    if case == "Ia":
        assert np.allclose(sp.sample(rng, 0.3).imag, 0)


def test_undetermined_unknowns_do_not_enter_earlier_steps(rng):
    """Each step's right-hand side ignores every unknown resolved at or after it."""
    pb = identity_problem([(4, 2), (2, 1), (1, 1)], "II")
    lad = _Ladder(pb)
    lad.run()
    order = [tuple(e.unknown) for e in lad.ledger]
    st_ = pb.structure

    def coeff():
        return lambda r, s: rng.standard_normal((st_.mult(r), st_.mult(s))) \
            + 1j * rng.standard_normal((st_.mult(r), st_.mult(s)))

    make = coeff()
    known = {u: make(u[0], u[1]) for u in order}
    for pos, (r, s, j) in enumerate(order):
        if pos < order.index((0, 0, 0)) + 3:
            continue  # free and leading coefficients have no right-hand side
        A1, A2 = {}, {}
        for (a, b, n) in order:
            before = order.index((a, b, n)) < pos
            A1.setdefault((a, b), {})[n] = known[(a, b, n)] if before else 0 * known[(a, b, n)]
            A2.setdefault((a, b), {})[n] = known[(a, b, n)] if before else make(a, b)
        A1[(r, s)][j] = A2[(r, s)][j] = 0 * known[(r, s, j)]
        D1 = {k: [v[n] for n in sorted(v)] for k, v in A1.items()}
        D2 = {k: [v[n] for n in sorted(v)] for k, v in A2.items()}
        assert np.allclose(lad.entry(D1, r, s, j), lad.entry(D2, r, s, j))


@pytest.mark.parametrize("spec", [
    SymSpec((SymClass(1.0, ((1, 2),)),)),
    HermSpec((PosClass(1.0, (SignedPart(1, 2, (1, 1)),)),)),
    HermSpec((ComplexClass(1 + 1j, ((1, 1),)),)),
    SymSpec((SymClass(0.5, ((3, 2), (1, 1))), SymClass(2 - 1j, ((2, 1),)))),
    HermSpec((ZeroClass((SignedPart(4, 1, (-1,)), SignedPart(2, 2, (1, -1)), SignedPart(1, 1))),)),
    HermSpec((PosClass(1.5, (SignedPart(3, 1, (-1,)), SignedPart(1, 2, (1, -1)))),)),
    HermSpec((NegPairClass(0.7, ((2, 1), (1, 1))),)),
    HermSpec((NegPairClass(1.3, ((2, 2),)), PosClass(2.0, ((1, 2),)), ZeroClass(((2, 1),)))),
    HermSpec((ComplexClass(0.5 + 1.5j, ((2, 1), (1, 2))),)),
])
def test_stabilizer_parameterization(spec, rng):
    par = stabilizer_parameterization(spec)
    sp = par.space
    oracle = oracle_dim_sym(par.matrix).nullity * 2 if par.action == "sym" else oracle_dim_herm(par.matrix).nullity
    assert sp.realdim == oracle
    Qs = [sp.sample(rng, 0.3) for _ in range(5)]
    for Q in Qs:
        assert verify_stab_element(Q, par.matrix, par.action).passed
    for Q1, Q2 in zip(Qs, Qs[1:]):
        assert verify_stab_element(Q1 @ Q2, par.matrix, par.action, 1e-7).passed
    if sp.realdim:
        assert sp.jacobian_rank().rank == sp.realdim


def test_parameterization_small_examples(rng):
    par = stabilizer_parameterization(SymSpec((SymClass(1.0, ((1, 2),)),)))
    assert par.space.realdim == 2  # one complex parameter
    par = stabilizer_parameterization(HermSpec((PosClass(1.0, (SignedPart(1, 2, (1, 1)),)),)))
    assert par.space.realdim == 1
    assert np.allclose(par.space.sample(rng).imag, 0)
