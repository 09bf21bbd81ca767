"""Integrability analysis of candidate symmetries."""
from .core import (ExpressionBlowup, InvalidPartition, OrderProfile, Verdict, commuting_family,
                   default_iteration_cap, expr_order, transcendence_order_bound, integrability_verdict,
                   iterated_orders, tame_growth_degree, tame_test)

__all__ = ["iterated_orders", "default_iteration_cap", "integrability_verdict", "tame_test",
           "commuting_family", "tame_growth_degree", "transcendence_order_bound", "expr_order", "OrderProfile",
           "Verdict", "ExpressionBlowup", "InvalidPartition"]
