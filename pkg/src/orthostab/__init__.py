"""Normal forms, stabilizers and their dimensions for complex orthogonal actions."""
from .matcore import (
    OrthostabError, InputValidationError, NumericalAmbiguity, RankAmbiguous,
    SymClass, SymSpec, SignedPart, ZeroClass, PosClass, NegPairClass, ComplexClass,
    HermSpec, assemble_normal_form, spec_from_json, spec_to_json, takagi_factor,
)
from .toeplitz import Structure, ToeplitzCoeffs, realize, reshuffle, unreshuffle
from .stabsolve import (
    StabProblem, StabSolution, solve_stab, identity_problem, dim_case_I, dim_case_II,
    dim_case_II_ladder, dim_case_Ib, stabilizer_parameterization,
)
from .lieoracle import oracle_dim_sym, oracle_dim_herm, verify_stab_element

__version__ = "0.1.0"
