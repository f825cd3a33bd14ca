"""
Scalar expressions in (u, v) and the jets used to differentiate them.
"""
from .dual import Dual4, MAX_ORDER, matrix_inverse
from .nodes import (
    Expr, Const, Var, Neg, BinaryOp, Add, Sub, Mul, Div, Pow, Call,
    evaluate, eval_jet
)
from .parser import parse, as_expr, tokenize

__all__ = [
    'Dual4', 'MAX_ORDER', 'matrix_inverse', 'Expr', 'Const', 'Var', 'Neg',
    'BinaryOp', 'Add', 'Sub', 'Mul', 'Div', 'Pow', 'Call', 'evaluate',
    'eval_jet', 'parse', 'as_expr', 'tokenize'
]
