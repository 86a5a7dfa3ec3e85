"""Recursive-descent parser for the query language.

Hand-rolled rather than generated: the language is small, and the one
ambiguity (a leading '(' can open either a grouped query or an
arithmetic term) is handled with a single backtracking point.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .ast import (
    And,
    AttrRef,
    Arith,
    Comparison,
    Equality,
    KEYWORDS,
    Like,
    MatchAll,
    Node,
    NumberLit,
    Or,
    Term,
)

__all__ = ["parse"]

_WS_RE = re.compile(r"[ \t\r\n]*")
_NAME_SCAN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_VALUE_SCAN_RE = re.compile(r"[A-Za-z0-9_./\-]+")
_NUM_SCAN_RE = re.compile(r"-?(?:[0-9]+(?:\.[0-9]+)?|\.[0-9]+)")
_WORD_CHAR_RE = re.compile(r"[A-Za-z0-9_]")

# Anything deeper is almost certainly hostile input, not a real query;
# bail out before the interpreter stack does.
_MAX_DEPTH = 200

_COMPARE_OPS = ("!=", "=", "<", ">")
_ARITH_OPS = ("+", "-", "*", "/")


def parse(text: str) -> Node:
    """Parse query text; empty or blank text matches everything."""
    parser = _Parser(text)
    parser.skip_ws()
    if parser.at_end():
        return MatchAll()
    node = parser.parse_query()
    parser.skip_ws()
    if not parser.at_end():
        parser.fail("unexpected text after query", ("and", "or", "end of query"))
    return node


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.depth = 0

    # -- low-level helpers ------------------------------------------------

    def skip_ws(self) -> None:
        self.pos = _WS_RE.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def match(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def try_keyword(self, word: str) -> bool:
        save = self.pos
        self.skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos:end].lower() == word and not self._word_char_at(end):
            self.pos = end
            return True
        self.pos = save
        return False

    def _word_char_at(self, index: int) -> bool:
        return index < len(self.text) and bool(_WORD_CHAR_RE.match(self.text, index))

    def fail(self, message: str, expected: tuple[str, ...] = (), pos: int | None = None):
        raise ParseError(message, self.pos if pos is None else pos, expected)

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            self.fail("query too deeply nested")

    # -- grammar rules ----------------------------------------------------

    def parse_query(self) -> Node:
        self._enter()
        try:
            node = self.parse_conjunction()
            while self.try_keyword("or"):
                node = Or(node, self.parse_conjunction())
            return node
        finally:
            self.depth -= 1

    def parse_conjunction(self) -> Node:
        node = self.parse_atom()
        while self.try_keyword("and"):
            node = And(node, self.parse_atom())
        return node

    def parse_atom(self) -> Node:
        self.skip_ws()
        if self.at_end():
            self.fail("expected constraint", ("name", "number", "("))
        ch = self.peek()
        if ch == "(":
            return self._parse_group_or_comparison()
        if ch.isalpha():
            return self._parse_named_constraint()
        if ch.isdigit() or ch in ".-":
            return self.parse_comparison()
        self.fail("expected constraint", ("name", "number", "("))

    def _parse_group_or_comparison(self) -> Node:
        save = self.pos
        try:
            self.pos += 1
            node = self.parse_query()
            self.skip_ws()
            if not self.match(")"):
                self.fail("unterminated parenthesis", (")",))
            return node
        except ParseError as group_err:
            self.pos = save
            try:
                return self.parse_comparison()
            except ParseError as comp_err:
                best = comp_err if comp_err.position > group_err.position else group_err
                raise best from None

    def _parse_named_constraint(self) -> Node:
        name = self._read_name()
        self.skip_ws()
        if self.match("!="):
            return self._finish_equality(name, "!=")
        if self.match("="):
            return self._finish_equality(name, "=")
        if self.try_keyword("like"):
            return self._finish_like(name)
        if self.match("<"):
            return Comparison(AttrRef(name), "<", self.parse_term())
        if self.match(">"):
            return Comparison(AttrRef(name), ">", self.parse_term())
        self.fail("expected operator after name", ("=", "!=", "like", "<", ">"))

    def _finish_equality(self, name: str, op: str) -> Node:
        self.skip_ws()
        scan = _VALUE_SCAN_RE.match(self.text, self.pos)
        if scan:
            self.pos = scan.end()
            return Equality(name, scan.group(), negated=op == "!=")
        if self.peek() == "(":
            return Comparison(AttrRef(name), op, self.parse_term())
        self.fail("expected value", ("value",))

    def _finish_like(self, name: str) -> Like:
        self.skip_ws()
        prefix_wild = self.match("%")
        scan = _VALUE_SCAN_RE.match(self.text, self.pos)
        if not scan:
            self.fail("expected pattern text", ("value",))
        self.pos = scan.end()
        suffix_wild = self.match("%")
        return Like(name, scan.group(), prefix_wild, suffix_wild)

    def parse_comparison(self) -> Comparison:
        lhs = self.parse_term()
        self.skip_ws()
        for op in _COMPARE_OPS:
            if self.match(op):
                return Comparison(lhs, op, self.parse_term())
        self.fail("expected comparison operator", _COMPARE_OPS)

    def parse_term(self) -> Term:
        self._enter()
        try:
            self.skip_ws()
            if self.at_end():
                self.fail("expected term", ("name", "number", "("))
            ch = self.peek()
            if ch == "(":
                self.pos += 1
                lhs = self.parse_term()
                self.skip_ws()
                for op in _ARITH_OPS:
                    if self.match(op):
                        break
                else:
                    self.fail("expected arithmetic operator", _ARITH_OPS)
                rhs = self.parse_term()
                self.skip_ws()
                if not self.match(")"):
                    self.fail("unterminated parenthesis", (")",))
                return Arith(lhs, op, rhs)
            if ch.isdigit() or ch in ".-":
                scan = _NUM_SCAN_RE.match(self.text, self.pos)
                if not scan:
                    self.fail("expected number")
                self.pos = scan.end()
                return NumberLit(float(scan.group()), scan.group())
            if ch.isalpha():
                return AttrRef(self._read_name())
            self.fail("expected term", ("name", "number", "("))
        finally:
            self.depth -= 1

    def _read_name(self) -> str:
        start = self.pos
        scan = _NAME_SCAN_RE.match(self.text, self.pos)
        if not scan:
            self.fail("expected name")
        name = scan.group()
        if name.lower() in KEYWORDS:
            self.fail(f"keyword {name!r} cannot be used as a name", pos=start)
        self.pos = scan.end()
        return name
