"""Numeric verification of symmetry flows."""
from .core import (ClosureCapExceeded, FiniteFlowField, FlowResult, SingularityEncountered, close_finite_system,
                   convergence_factor, equivariance_check, group_law_check, rk4_flow)

__all__ = ["close_finite_system", "rk4_flow", "group_law_check", "equivariance_check", "convergence_factor",
           "FiniteFlowField", "FlowResult", "ClosureCapExceeded", "SingularityEncountered"]
