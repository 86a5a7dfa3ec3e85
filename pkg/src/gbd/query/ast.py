"""Parse tree of the query language, plus rendering back to query text.

The grammar in one glance:

    start      = query | ε
    query      = '(' query ')' | query ('and'|'or') query | constraint
    constraint = name ('='|'!=') value
               | name 'like' ['%'] value ['%']
               | term ('='|'!='|'<'|'>') term        (parens optional)
    term       = name | number | '(' term ('+'|'-'|'*'|'/') term ')'

'and' binds tighter than 'or'; both associate left.  Numbers may start
with a bare '.' (".9"); term comparisons may appear unparenthesized.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

__all__ = [
    "And",
    "Arith",
    "AttrRef",
    "Comparison",
    "Constraint",
    "Equality",
    "Like",
    "MatchAll",
    "NumberLit",
    "Or",
    "Term",
    "NAME_RE",
    "NUMBER_RE",
    "VALUE_RE",
    "coerce_number",
    "referenced_attrs",
    "render",
]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
VALUE_RE = re.compile(r"[A-Za-z0-9_./\-]+\Z")
# <number> with the leading-dot extension: -?(123 | 123.45 | .45)
NUMBER_RE = re.compile(r"-?(?:[0-9]+(?:\.[0-9]+)?|\.[0-9]+)\Z")

KEYWORDS = frozenset({"and", "or", "like"})


def coerce_number(text: object) -> float | None:
    """Numeric view of an attribute value, or None if it has none.

    This single definition backs both query execution routes: it is
    registered as the SQL cast function and called directly by the
    reference evaluator, so "fails to cast" means the same thing in both.
    """
    if not isinstance(text, str) or not NUMBER_RE.match(text):
        return None
    return float(text)


@dataclass(frozen=True)
class MatchAll:
    """The ε query: matches every instance."""


@dataclass(frozen=True)
class Or:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Equality:
    attr: str
    value: str
    negated: bool = False


@dataclass(frozen=True)
class Like:
    attr: str
    value: str
    prefix_wild: bool = False
    suffix_wild: bool = False


@dataclass(frozen=True)
class AttrRef:
    name: str


@dataclass(frozen=True)
class NumberLit:
    value: float
    # Source spelling, kept so rendering stays inside the grammar; not
    # part of equality (".9" and "0.9" are the same literal).
    raw: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.raw:
            object.__setattr__(self, "raw", _number_text(self.value))


@dataclass(frozen=True)
class Arith:
    lhs: "Term"
    op: str  # one of + - * /
    rhs: "Term"


@dataclass(frozen=True)
class Comparison:
    lhs: "Term"
    op: str  # one of = != < >
    rhs: "Term"


Term = AttrRef | NumberLit | Arith
Constraint = Equality | Like | Comparison
Node = MatchAll | Or | And | Equality | Like | Comparison


def _number_text(value: float) -> str:
    text = repr(value)
    if NUMBER_RE.match(text):
        return text
    if math.isfinite(value):
        return format(value, ".17f")
    raise ValueError(f"{value!r} has no number spelling")


def referenced_attrs(node: Node | Term) -> set[str]:
    """All attribute names appearing in a query or term."""
    if isinstance(node, (Or, And, Arith)):
        left = node.left if isinstance(node, (Or, And)) else node.lhs
        right = node.right if isinstance(node, (Or, And)) else node.rhs
        return referenced_attrs(left) | referenced_attrs(right)
    if isinstance(node, (Equality, Like)):
        return {node.attr}
    if isinstance(node, Comparison):
        return referenced_attrs(node.lhs) | referenced_attrs(node.rhs)
    if isinstance(node, AttrRef):
        return {node.name}
    return set()


def render(node: Node) -> str:
    """Query text that parses back to an equal tree."""
    if isinstance(node, MatchAll):
        return ""
    if isinstance(node, Or):
        right = render(node.right)
        if isinstance(node.right, Or):
            right = f"({right})"
        return f"{render(node.left)} or {right}"
    if isinstance(node, And):
        left = render(node.left)
        if isinstance(node.left, Or):
            left = f"({left})"
        right = render(node.right)
        if isinstance(node.right, (Or, And)):
            right = f"({right})"
        return f"{left} and {right}"
    if isinstance(node, Equality):
        op = "!=" if node.negated else "="
        return f"{node.attr} {op} {node.value}"
    if isinstance(node, Like):
        pre = "%" if node.prefix_wild else ""
        suf = "%" if node.suffix_wild else ""
        return f"{node.attr} like {pre}{node.value}{suf}"
    if isinstance(node, Comparison):
        return f"{render_term(node.lhs)} {node.op} {render_term(node.rhs)}"
    raise TypeError(f"not a query node: {node!r}")


def render_term(term: Term) -> str:
    if isinstance(term, AttrRef):
        return term.name
    if isinstance(term, NumberLit):
        return term.raw
    if isinstance(term, Arith):
        return f"({render_term(term.lhs)} {term.op} {render_term(term.rhs)})"
    raise TypeError(f"not a term: {term!r}")
