"""Closed-form stabilizer dimensions, summed over eigenvalue classes."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .matcore import (
    ComplexClass, HermSpec, NegPairClass, PosClass, SymSpec, ZeroClass,
)
from .stabsolve import dim_case_I, dim_case_II, dim_case_II_ladder, dim_case_Ib
from .toeplitz import Structure

EXACT = "exact"
LOWER = "lower-bound"
DISPUTED = "disputed"


@dataclass
class ClassDim:
    key: tuple
    case: str
    value: int
    exactness: str
    field: str
    real_contribution: int
    ladder_value: int | None = None

    def to_json(self):
        out = {"class": [k if not isinstance(k, complex) else [k.real, k.imag] for k in self.key],
               "case": self.case, "value": self.value, "exactness": self.exactness,
               "field": self.field, "real_contribution": self.real_contribution}
        if self.ladder_value is not None:
            out["ladder_value"] = self.ladder_value
        return out


@dataclass
class DimReport:
    """Per-class formula values and their total.

    ``total`` is complex for symmetric specs and real for Hermitian specs;
    complex-pair classes contribute twice their complex value.
    """
    entries: list
    total: int
    total_field: str
    oracle: int | None = None
    notes: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(e.exactness == EXACT for e in self.entries)

    def to_json(self):
        return {"entries": [e.to_json() for e in self.entries], "total": self.total,
                "total_field": self.total_field, "oracle": self.oracle, "notes": list(self.notes)}


def stab_dim_sym(spec: SymSpec) -> DimReport:
    """Complex stabilizer dimension of a symmetric normal form under orthogonal similarity."""
    entries = []
    for c in spec.classes:
        v = dim_case_I(Structure(c.parts))
        entries.append(ClassDim(("sym", c.eigenvalue), "sym", v, EXACT, "complex", 2 * v))
    return DimReport(entries, sum(e.value for e in entries), "complex")


def herm_class_dim(c) -> ClassDim:
    """Formula value for one class of a Hermitian normal form."""
    if isinstance(c, ZeroClass):
        st = Structure(c.sizes)
        v, lad = dim_case_II(st), dim_case_II_ladder(st)
        return ClassDim(c.key, "zero", v, EXACT if v == lad else DISPUTED, "real", v, lad)
    if isinstance(c, PosClass):
        v = dim_case_I(Structure(c.sizes))
        return ClassDim(c.key, "pos", v, EXACT, "real", v)
    if isinstance(c, NegPairClass):
        v = dim_case_Ib(Structure(tuple((b, 2 * m) for b, m in c.parts)))
        return ClassDim(c.key, "negpair", v, LOWER, "real", v)
    v = dim_case_I(Structure(c.sizes))
    return ClassDim(c.key, "complex", v, EXACT, "complex", 2 * v)


def stab_dim_herm(spec: HermSpec) -> DimReport:
    """Real stabilizer dimension of a Hermitian normal form under orthogonal ``*``-congruence.

    Zero classes carry both the displayed value and the count produced by
    the recursive solver; when they differ the entry is marked
    ``"disputed"`` and the displayed value is still what enters ``total``.
    """
    entries = [herm_class_dim(c) for c in spec.classes]
    notes = [f"class {e.key[0]}: displayed {e.value} vs solver count {e.ladder_value}"
             for e in entries if e.exactness == DISPUTED]
    return DimReport(entries, sum(e.real_contribution for e in entries), "real", None, notes)


def _canonical(spec: HermSpec):
    out = {}
    for c in spec.classes:
        if isinstance(c, (ZeroClass, PosClass)):
            out[c.key] = Counter((p.alpha, p.m, p.signs.count(1)) for p in c.parts)
        else:
            out[c.key] = Counter(tuple(p) for p in c.parts)
    return out


def normal_form_equivalent(specA: HermSpec, specB: HermSpec) -> bool:
    """Whether two Hermitian specs describe orthogonally ``*``-congruent normal forms.

    Eigenvalue data and block sizes must agree exactly (up to block order);
    for signed classes the number of ``+1`` signs per block size must agree.
    Odd-size zero blocks are already normalized to ``+1``.
    """
    return _canonical(specA) == _canonical(specB)


def report_for(spec) -> DimReport:
    return stab_dim_sym(spec) if isinstance(spec, SymSpec) else stab_dim_herm(spec)
