"""Exact constants and rigorous interval decisions."""

from .expr import (
    ONE,
    ZERO,
    Add,
    ConstExpr,
    Div,
    Int,
    Mul,
    Neg,
    Norm,
    Rat,
    Sqrt,
    Sub,
    as_expr,
    from_radical,
    parse,
)
from .interval import (
    DEFAULT_CAP_BITS,
    DyadicInterval,
    Order,
    TorusNorm,
    compare,
    compare_threshold,
    eval_interval,
    floor_exact,
    isqrt,
    nearest_exact,
    norm_below,
    torus_norm,
)
from .radical import RadicalForm, is_square

__all__ = [
    "ONE", "ZERO", "Add", "ConstExpr", "Div", "Int", "Mul", "Neg", "Norm", "Rat",
    "Sqrt", "Sub", "as_expr", "from_radical", "parse", "DEFAULT_CAP_BITS",
    "DyadicInterval", "Order", "TorusNorm", "compare", "compare_threshold",
    "eval_interval", "floor_exact", "isqrt", "nearest_exact", "norm_below",
    "torus_norm", "RadicalForm", "is_square",
]
