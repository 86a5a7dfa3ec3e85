"""Base attribute extraction from DIMACS CNF streams.

Counts the three bootstrap attributes every store ships with: variables
(maximum absolute literal), clauses, and clauses_horn (clauses with at
most one positive literal).  The declared "p cnf" counts are ignored;
only the clause tokens decide.  Extraction is single-pass and keeps no
more state than the current token and one positive-literal counter.
"""

from __future__ import annotations

import gzip
import re
import zlib
from dataclasses import dataclass
from typing import BinaryIO, Iterator

from .errors import DimacsParseError, FileDecodeError
from .hashing import CHUNK_SIZE, open_instance_file

__all__ = ["BaseFeatures", "extract_base_features", "features_of_file"]

_WS = b" \t\n\r\x0b\x0c"
_TOKEN_RE = re.compile(rb"[^ \t\n\r\x0b\x0c]+")
_DROPPED_LINE_RE = re.compile(rb"\n[ \t\r\x0b\x0c]*[cp]")
_NON_WS_RE = re.compile(rb"[^ \t\n\r\x0b\x0c]")
_INT_RE = re.compile(rb"-?[0-9]+")

_LINE_START = 0
_SKIP_LINE = 1
_CONTENT = 2


@dataclass(frozen=True)
class BaseFeatures:
    variables: int
    clauses: int
    clauses_horn: int


def _iter_tokens(stream: BinaryIO) -> Iterator[tuple[bytes, int]]:
    """Yield (token, byte offset) pairs from the clause data of a stream.

    Applies the same line-dropping rules as hash normalization: lines
    whose first non-blank character is 'c' or 'p' contribute nothing.
    Offsets refer to the (decompressed) input stream.
    """
    mode = _LINE_START
    partial = b""
    partial_off = 0
    base = 0
    while True:
        chunk = stream.read(CHUNK_SIZE)
        if not chunk:
            break
        if partial and chunk[0] in _WS:
            yield partial, partial_off
            partial = b""
        pos = 0
        end = len(chunk)
        while pos < end:
            if mode == _SKIP_LINE:
                nl = chunk.find(b"\n", pos)
                if nl < 0:
                    pos = end
                else:
                    pos = nl + 1
                    mode = _LINE_START
            elif mode == _LINE_START:
                match = _NON_WS_RE.search(chunk, pos)
                if match is None:
                    pos = end
                elif chunk[match.start()] in b"cp":
                    mode = _SKIP_LINE
                    pos = match.start() + 1
                else:
                    mode = _CONTENT
                    pos = match.start()
            else:
                match = _DROPPED_LINE_RE.search(chunk, pos)
                region_end = match.start() + 1 if match else end
                for tok_match in _TOKEN_RE.finditer(chunk, pos, region_end):
                    start, stop = tok_match.span()
                    if partial and start == 0:
                        token = partial + tok_match.group()
                        offset = partial_off
                        partial = b""
                    else:
                        token = tok_match.group()
                        offset = base + start
                    if match is None and stop == end:
                        # Token touches the chunk edge; it may continue.
                        partial, partial_off = token, offset
                    else:
                        yield token, offset
                if match is not None:
                    mode = _SKIP_LINE
                    pos = match.end()
                else:
                    nl = chunk.rfind(b"\n", pos)
                    if nl >= 0 and not chunk[nl + 1 : end].strip(_WS):
                        mode = _LINE_START
                    pos = end
        base += end
    if partial:
        yield partial, partial_off


def extract_base_features(stream: BinaryIO) -> BaseFeatures:
    """Count variables, clauses and horn clauses in a DIMACS stream.

    Clauses are delimited by "0" tokens; a trailing clause without its
    terminator still counts, mirroring the trailing-zero rule of the
    content hash.  A non-integer clause token raises DimacsParseError
    with its byte offset.
    """
    variables = 0
    clauses = 0
    horn = 0
    positives = 0
    in_clause = False
    for token, offset in _iter_tokens(stream):
        if token == b"0":
            clauses += 1
            if positives <= 1:
                horn += 1
            positives = 0
            in_clause = False
            continue
        if not _INT_RE.fullmatch(token):
            raise DimacsParseError(offset, token.decode("ascii", "replace"))
        literal = int(token.decode("ascii"))
        in_clause = True
        if literal > 0:
            positives += 1
        magnitude = abs(literal)
        if magnitude > variables:
            variables = magnitude
    if in_clause:
        clauses += 1
        if positives <= 1:
            horn += 1
    return BaseFeatures(variables=variables, clauses=clauses, clauses_horn=horn)


def features_of_file(path: str) -> BaseFeatures:
    """Features of the instance at `path` (plain or gzip, like hash_file)."""
    try:
        with open_instance_file(path) as stream:
            return extract_base_features(stream)
    except (gzip.BadGzipFile, zlib.error, EOFError) as exc:
        raise FileDecodeError(str(path), str(exc)) from exc
