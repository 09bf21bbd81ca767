"""Order bounds for symmetries from the D-operator criterion."""
from .core import (AIdeal, Branch, BranchReport, ConstraintSet, DepthExceeded, analyze_A_ideal, d_iterates,
                   default_depth, order_constraints)

__all__ = ["d_iterates", "analyze_A_ideal", "order_constraints", "default_depth", "AIdeal", "Branch",
           "BranchReport", "ConstraintSet", "DepthExceeded"]
