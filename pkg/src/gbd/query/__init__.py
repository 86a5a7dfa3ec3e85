"""Query language: parsing, SQL compilation and a reference evaluator."""

from .ast import (
    And,
    Arith,
    AttrRef,
    Comparison,
    Equality,
    Like,
    MatchAll,
    NumberLit,
    Or,
    coerce_number,
    referenced_attrs,
    render,
)
from .interp import GroupData, evaluate
from .parser import parse
from .sql import compile_query

__all__ = [
    "And",
    "Arith",
    "AttrRef",
    "Comparison",
    "Equality",
    "GroupData",
    "Like",
    "MatchAll",
    "NumberLit",
    "Or",
    "coerce_number",
    "compile_query",
    "evaluate",
    "parse",
    "referenced_attrs",
    "render",
]
