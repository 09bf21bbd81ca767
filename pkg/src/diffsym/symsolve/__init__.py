"""Symmetry generators: PDE constraints, completion and polynomial solving."""
from .ansatz import Ansatz
from .errors import AnsatzTooSmall, CoefficientVanishes, CompletionCapExceeded
from .pde import LinearPDESystem, derive_constraints, exact_residuals, groebner_complete, prolong
from .solve import SymmetryBasis, monomials, solve_polynomial_ansatz, verify_symmetry

__all__ = ["Ansatz", "AnsatzTooSmall", "CoefficientVanishes", "CompletionCapExceeded", "LinearPDESystem",
           "derive_constraints", "exact_residuals", "groebner_complete", "prolong", "SymmetryBasis",
           "monomials", "solve_polynomial_ansatz", "verify_symmetry"]
