"""Compile a parsed query to one SQLite SELECT statement.

Layout of the generated statement:

    SELECT DISTINCT u.hash [, resolved columns]
    FROM (union of every group table) AS u
    LEFT JOIN "group" AS r0 ON r0.hash = u.hash   -- one per resolve column
    WHERE <boolean combination of per-constraint EXISTS tests>
    ORDER BY 1 [, 2, ...]

Each constraint compiles to its own correlated EXISTS subquery joining
the groups that constraint references: a constraint on a multi-valued
group holds if ANY of the values satisfies it, independently of other
constraints on the same group.  Keeping the joins inside the EXISTS
means multi-valued rows never multiply across constraints, so query
cost grows with the sum of the constraints, not their product.  Groups
without a default join inner (no value, no match); groups with a
default join LEFT and read through COALESCE.

Numeric comparisons go through the gbd_num() SQL function (the store
registers it, backed by coerce_number), so a value that has no numeric
form becomes NULL and the comparison fails instead of silently casting
to 0.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence

from ..errors import UnknownGroupError
from .ast import (
    And,
    Arith,
    AttrRef,
    Comparison,
    Equality,
    Like,
    MatchAll,
    Node,
    NumberLit,
    Or,
    Term,
    referenced_attrs,
)

__all__ = ["compile_query"]


def compile_query(
    node: Node,
    resolve: Sequence[str] = (),
    catalog: Mapping[str, str | None] = {},
) -> str:
    """Build the SELECT for ``node``.

    ``catalog`` maps every queryable group name to its default value
    (None when the group has no default).  Unknown names raise
    UnknownGroupError before any SQL is produced.
    """
    known = sorted(catalog)
    for name in sorted(referenced_attrs(node) | set(resolve)):
        if name not in catalog:
            raise UnknownGroupError(name, known)

    compiler = _Compiler(catalog)
    condition = compiler.condition(node)

    columns = ["u.hash"]
    for j, name in enumerate(resolve):
        alias = f"r{j}"
        compiler.add_join(alias, name)
        columns.append(compiler.value_expr(alias, name))

    if known:
        universe = " UNION ".join(f'SELECT hash FROM "{g}"' for g in known)
    else:
        universe = "SELECT '' AS hash WHERE 1 = 0"

    lines = [
        f"SELECT DISTINCT {', '.join(columns)}",
        f"FROM ({universe}) AS u",
        *compiler.joins,
    ]
    if condition is not None:
        lines.append(f"WHERE {condition}")
    ordinals = ", ".join(str(i + 1) for i in range(len(columns)))
    lines.append(f"ORDER BY {ordinals}")
    return "\n".join(lines)


class _Compiler:
    def __init__(self, catalog: Mapping[str, str | None]) -> None:
        self.catalog = catalog
        self.joins: list[str] = []
        self._next_constraint = 0

    def add_join(self, alias: str, attr: str) -> None:
        self.joins.append(f'LEFT JOIN "{attr}" AS {alias} ON {alias}.hash = u.hash')

    def value_expr(self, alias: str, attr: str) -> str:
        default = self.catalog[attr]
        if default is None:
            return f"{alias}.value"
        return f"COALESCE({alias}.value, {_text_literal(default)})"

    def condition(self, node: Node) -> str | None:
        if isinstance(node, MatchAll):
            return None
        return self._condition(node)

    def _condition(self, node: Node) -> str:
        if isinstance(node, Or):
            return f"({self._condition(node.left)} OR {self._condition(node.right)})"
        if isinstance(node, And):
            return f"({self._condition(node.left)} AND {self._condition(node.right)})"
        return self._constraint(node)

    def _constraint(self, node: Equality | Like | Comparison) -> str:
        index = self._next_constraint
        self._next_constraint += 1
        attrs = sorted(referenced_attrs(node))
        joins: list[str] = []
        exprs: dict[str, str] = {}
        for k, attr in enumerate(attrs):
            alias = f"c{index}" if len(attrs) == 1 else f"c{index}_{k}"
            kind = "JOIN" if self.catalog[attr] is None else "LEFT JOIN"
            joins.append(f'{kind} "{attr}" AS {alias} ON {alias}.hash = u.hash')
            exprs[attr] = self.value_expr(alias, attr)
        predicate = self._predicate(node, exprs)
        if not attrs:
            return predicate
        source = " ".join(["(SELECT 1)", *joins])
        return f"EXISTS (SELECT 1 FROM {source} WHERE {predicate})"

    def _predicate(
        self, node: Equality | Like | Comparison, exprs: Mapping[str, str]
    ) -> str:
        if isinstance(node, Equality):
            op = "<>" if node.negated else "="
            return f"{exprs[node.attr]} {op} {_text_literal(node.value)}"
        if isinstance(node, Like):
            pattern = node.value
            if node.prefix_wild:
                pattern = "%" + pattern
            if node.suffix_wild:
                pattern = pattern + "%"
            return f"{exprs[node.attr]} LIKE {_text_literal(pattern)}"
        op = {"=": "=", "!=": "<>", "<": "<", ">": ">"}[node.op]
        lhs = _term_sql(node.lhs, exprs)
        rhs = _term_sql(node.rhs, exprs)
        return f"{lhs} {op} {rhs}"


def _term_sql(term: Term, exprs: Mapping[str, str]) -> str:
    if isinstance(term, AttrRef):
        return f"gbd_num({exprs[term.name]})"
    if isinstance(term, NumberLit):
        return _number_literal(term.value)
    if isinstance(term, Arith):
        return f"({_term_sql(term.lhs, exprs)} {term.op} {_term_sql(term.rhs, exprs)})"
    raise TypeError(f"not a term: {term!r}")


def _number_literal(value: float) -> str:
    if math.isnan(value):
        return "NULL"
    if math.isinf(value):
        # Out-of-range literal; the SQL engine clamps it to infinity.
        return "9e999" if value > 0 else "-9e999"
    return repr(value)


def _text_literal(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"
