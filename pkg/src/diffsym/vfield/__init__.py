"""Vector fields, brackets and commutation with the Cartan field."""
from .fields import (LazyBracket, SparseField, VField, bracket_vfields, commutator_residuals, delta_apply,
                     hat_tau_iterate, lie_bracket, parse_vfield, zero_field)

__all__ = ["VField", "SparseField", "LazyBracket", "delta_apply", "commutator_residuals", "lie_bracket",
           "bracket_vfields", "hat_tau_iterate", "parse_vfield", "zero_field"]
