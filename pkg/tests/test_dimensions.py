import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthostab.dimensions import (
    DISPUTED, EXACT, LOWER, normal_form_equivalent, stab_dim_herm, stab_dim_sym,
)
from orthostab.matcore import (
    ComplexClass, HermSpec, NegPairClass, PosClass, SignedPart, SymClass, SymSpec, ZeroClass,
)
from orthostab.suite import random_herm_spec, random_sym_spec


def test_sym_examples():
    assert stab_dim_sym(SymSpec((SymClass(1, ((1, 1),)),))).total == 0
    assert stab_dim_sym(SymSpec((SymClass(1, ((1, 2),)),))).total == 1
    assert stab_dim_sym(SymSpec((SymClass(1, ((3, 2), (1, 3))),))).total == 12


def test_herm_examples():
    r = stab_dim_herm(HermSpec((PosClass(1.0, (SignedPart(1, 2, (1, 1)),)),)))
    assert r.total == 1 and r.entries[0].exactness == EXACT
    assert stab_dim_herm(HermSpec((PosClass(1.0, ((1, 1),)),))).total == 0
    r = stab_dim_herm(HermSpec((NegPairClass(1.0, ((1, 1),)),)))
    assert r.total == 1 and r.entries[0].exactness == LOWER


def test_complex_class_is_doubled():
    r = stab_dim_herm(HermSpec((ComplexClass(1 + 1j, ((1, 2),)),)))
    e = r.entries[0]
    assert e.field == "complex" and e.value == 1 and e.real_contribution == 2 and r.total == 2


def test_zero_class_display_is_flagged():
    r = stab_dim_herm(HermSpec((ZeroClass(((1, 1),)),)))
    e = r.entries[0]
    assert e.value == 1 and e.ladder_value == 0 and e.exactness == DISPUTED and r.notes


@given(st.integers(0, 2 ** 32 - 1))
def test_additivity(seed):
    rng = np.random.default_rng(seed)
    spec = random_herm_spec(rng, ("pos", "zero", "negpair", "complex"))
    parts = sum(stab_dim_herm(HermSpec((c,))).total for c in spec.classes)
    assert stab_dim_herm(spec).total == parts
    sym = random_sym_spec(rng)
    assert stab_dim_sym(sym).total == sum(stab_dim_sym(SymSpec((c,))).total for c in sym.classes)


@pytest.mark.parametrize("a,m", [(1, 1), (2, 1), (3, 2), (4, 3)])
def test_monotone_in_blocks(a, m):
    for make in (lambda p: HermSpec((PosClass(1.0, p),)), lambda p: HermSpec((ZeroClass(p),)),
                 lambda p: HermSpec((ComplexClass(1 + 1j, p),))):
        assert stab_dim_herm(make(((a, m + 1),))).total >= stab_dim_herm(make(((a, m),))).total
    assert stab_dim_herm(HermSpec((NegPairClass(1.0, ((a, m + 1),)),))).total >= \
        stab_dim_herm(HermSpec((NegPairClass(1.0, ((a, m),)),))).total


def test_equivalence_examples():
    a = HermSpec((PosClass(1.0, ((1, 1),)), ComplexClass(1 + 1j, ((1, 1),))))
    b = HermSpec((ComplexClass(1 + 1j, ((1, 1),)), PosClass(1.0, ((1, 1),))))
    assert normal_form_equivalent(a, b)
    assert not normal_form_equivalent(HermSpec((ZeroClass((SignedPart(2, 1, (1,)),)),)),
                                      HermSpec((ZeroClass((SignedPart(2, 1, (-1,)),)),)))
    assert normal_form_equivalent(HermSpec((ZeroClass((SignedPart(3, 1, (1,)),)),)),
                                  HermSpec((ZeroClass((SignedPart(3, 1, (-1,)),)),)))
    assert normal_form_equivalent(HermSpec((PosClass(2.0, (SignedPart(1, 2, (1, -1)),)),)),
                                  HermSpec((PosClass(2.0, (SignedPart(1, 2, (-1, 1)),)),)))


def test_equivalence_is_an_equivalence_relation():
    rng = np.random.default_rng(5)
    specs = [random_herm_spec(rng, ("pos", "zero"), max_order=4) for _ in range(200)]
    rel = np.array([[normal_form_equivalent(a, b) for b in specs] for a in specs])
    assert rel.diagonal().all()
    assert (rel == rel.T).all()
    assert ((rel.astype(int) @ rel.astype(int) > 0) <= rel).all()
