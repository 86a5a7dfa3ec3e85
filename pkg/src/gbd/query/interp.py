"""Reference interpreter for queries, used to cross-check the SQL route.

Works over a plain in-memory snapshot of the attribute data, with no
SQL involved.  Semantics mirror the compiled statement deliberately:

  * a constraint on a multi-valued group holds if ANY combination of
    the referenced values satisfies it,
  * a missing value falls back to the group default, or fails the
    constraint when there is none,
  * values with no numeric form, division by zero, and NaN results all
    make the enclosing comparison false (the SQL route yields NULL in
    each of those cases).
"""

from __future__ import annotations

import itertools
import math
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

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
    coerce_number,
    referenced_attrs,
)

__all__ = ["GroupData", "evaluate"]


@dataclass
class GroupData:
    """One group's contribution to a snapshot: default plus per-hash values."""

    default: str | None = None
    values: dict[str, tuple[str, ...]] = field(default_factory=dict)


def evaluate(node: Node, snapshot: Mapping[str, GroupData]) -> list[str]:
    """Hashes matched by ``node``, sorted; snapshot covers every group."""
    universe: set[str] = set()
    for group in snapshot.values():
        universe.update(group.values)
    return sorted(h for h in universe if _matches(node, h, snapshot))


def _matches(node: Node, hash_: str, snapshot: Mapping[str, GroupData]) -> bool:
    if isinstance(node, MatchAll):
        return True
    if isinstance(node, Or):
        return _matches(node.left, hash_, snapshot) or _matches(node.right, hash_, snapshot)
    if isinstance(node, And):
        return _matches(node.left, hash_, snapshot) and _matches(node.right, hash_, snapshot)
    return _constraint_matches(node, hash_, snapshot)


def _bindings(attrs: Sequence[str], hash_: str, snapshot: Mapping[str, GroupData]):
    per_attr = []
    for attr in attrs:
        group = snapshot[attr]
        values = group.values.get(hash_)
        if values is None:
            values = () if group.default is None else (group.default,)
        per_attr.append(values)
    for combo in itertools.product(*per_attr):
        yield dict(zip(attrs, combo))


def _constraint_matches(
    node: Equality | Like | Comparison,
    hash_: str,
    snapshot: Mapping[str, GroupData],
) -> bool:
    attrs = sorted(referenced_attrs(node))
    for env in _bindings(attrs, hash_, snapshot):
        if isinstance(node, Equality):
            value = env[node.attr]
            hit = value != node.value if node.negated else value == node.value
        elif isinstance(node, Like):
            hit = _like_regex(node).fullmatch(env[node.attr]) is not None
        else:
            hit = _compare(node, env)
        if hit:
            return True
    return False


def _like_regex(node: Like) -> re.Pattern[str]:
    parts = [".*"] if node.prefix_wild else []
    for ch in node.value:
        parts.append("." if ch == "_" else re.escape(ch))
    if node.suffix_wild:
        parts.append(".*")
    # LIKE compares case-insensitively over ASCII only
    return re.compile("".join(parts), re.IGNORECASE | re.ASCII | re.DOTALL)


def _compare(node: Comparison, env: Mapping[str, str]) -> bool:
    lhs = _term_value(node.lhs, env)
    rhs = _term_value(node.rhs, env)
    if lhs is None or rhs is None:
        return False
    if node.op == "=":
        return lhs == rhs
    if node.op == "!=":
        return lhs != rhs
    if node.op == "<":
        return lhs < rhs
    return lhs > rhs


def _term_value(term: Term, env: Mapping[str, str]) -> float | None:
    if isinstance(term, AttrRef):
        return coerce_number(env[term.name])
    if isinstance(term, NumberLit):
        return term.value
    if isinstance(term, Arith):
        lhs = _term_value(term.lhs, env)
        rhs = _term_value(term.rhs, env)
        if lhs is None or rhs is None:
            return None
        if term.op == "+":
            result = lhs + rhs
        elif term.op == "-":
            result = lhs - rhs
        elif term.op == "*":
            result = lhs * rhs
        else:
            if rhs == 0.0:
                return None
            result = lhs / rhs
        return None if math.isnan(result) else result
    raise TypeError(f"not a term: {term!r}")
