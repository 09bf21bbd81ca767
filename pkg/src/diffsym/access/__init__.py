"""Accessibility, the tangent extension and flat bases."""
from .core import (AccessReport, ExtendedSystem, FlatBasisReport, NotAccessible, RankDegeneracy, TauHat,
                   flat_basis, roundtrip_residuals, strong_accessibility, tangent_extension)

__all__ = ["strong_accessibility", "tangent_extension", "flat_basis", "roundtrip_residuals", "AccessReport",
           "FlatBasisReport", "ExtendedSystem", "TauHat", "NotAccessible", "RankDegeneracy"]
