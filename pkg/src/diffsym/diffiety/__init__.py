"""System definitions, normalization and the Cartan field."""
from .errors import DuplicateEquation, NormalizationFailure, ParseError, UndeclaredSymbol
from .parser import Equation, SystemDef, parse_system
from .system import (CartanField, NormalSystem, ValidationReport, normalize, tau_apply, tau_power,
                     validate_full_control)


def load_system(text: str) -> NormalSystem:
    return normalize(parse_system(text))


__all__ = ["parse_system", "normalize", "load_system", "validate_full_control", "tau_apply", "tau_power",
           "SystemDef", "Equation", "NormalSystem", "CartanField", "ValidationReport", "ParseError",
           "UndeclaredSymbol", "DuplicateEquation", "NormalizationFailure"]
