"""Certified a-posteriori error bounds for linear ODE initial value problems."""

from ._core import catalog_names, certify, eval_expr, integrate

__all__ = ["catalog_names", "certify", "eval_expr", "integrate"]
