"""Content-addressed identification of DIMACS CNF files.

The identifier is the md5 digest of a normalized view of the file:

  1. every line whose first non-blank character is 'c' or 'p' is dropped
     whole (comments and the problem header),
  2. the remaining content is split on maximal whitespace runs and the
     tokens are re-joined with single blanks (no leading/trailing blank),
  3. if the final token is not "0", " 0" is appended to close the last
     clause.

Cosmetic edits (comments, header counts, whitespace layout, a missing
final clause terminator) therefore never change the identifier, while any
change to the clause tokens themselves does.  Clause order and variable
names are deliberately significant: reordered or renamed instances can
behave very differently under a solver and must keep distinct identities.

Normalization is defined on arbitrary byte streams and runs in constant
memory, so multi-gigabyte files can be hashed without staging them.
"""

from __future__ import annotations

import gzip
import hashlib
import re
import zlib
from contextlib import contextmanager
from typing import BinaryIO, Callable, Iterator

from .errors import FileDecodeError

__all__ = [
    "GBD_HASH_RE",
    "gbd_hash",
    "hash_file",
    "is_gbd_hash",
    "md5_hex",
    "normalize",
    "open_instance_file",
]

CHUNK_SIZE = 64 * 1024

GZIP_MAGIC = b"\x1f\x8b"

# 32 lowercase hex characters.
GBD_HASH_RE = re.compile(r"[0-9a-f]{32}\Z")

# Whitespace per the normalization rules: blank, tab, newline, carriage
# return, vertical tab, form feed.
_WS = b" \t\n\r\x0b\x0c"
_NON_WS_RE = re.compile(rb"[^ \t\n\r\x0b\x0c]")
_WS_RUN_RE = re.compile(rb"[ \t\n\r\x0b\x0c]+")

# A line break followed by an (optionally blank-indented) comment or
# header line.  Line boundaries are '\n'; '\r' before it is part of the
# break, so it sits in the blank class here.
_DROPPED_LINE_RE = re.compile(rb"\n[ \t\r\x0b\x0c]*[cp]")

_LINE_START = 0
_SKIP_LINE = 1
_CONTENT = 2


class _Normalizer:
    """Incremental normalizer: feed chunks, bytes come out through a sink.

    The state machine never retains more than bookkeeping scalars between
    chunks, which is what makes the constant-memory contract hold.
    """

    def __init__(self, sink: Callable[[bytes], None]):
        self._sink = sink
        self._mode = _LINE_START
        self._pending_space = False
        self._emitted = 0
        self._tail = b""

    def update(self, chunk: bytes) -> None:
        pos = 0
        end = len(chunk)
        while pos < end:
            if self._mode == _SKIP_LINE:
                nl = chunk.find(b"\n", pos)
                if nl < 0:
                    return
                pos = nl + 1
                self._mode = _LINE_START
            elif self._mode == _LINE_START:
                match = _NON_WS_RE.search(chunk, pos)
                if match is None:
                    if end > pos:
                        self._saw_space()
                    return
                first = match.start()
                if first > pos:
                    self._saw_space()
                if chunk[first] in b"cp":
                    self._mode = _SKIP_LINE
                    pos = first + 1
                else:
                    self._mode = _CONTENT
                    pos = first
            else:
                match = _DROPPED_LINE_RE.search(chunk, pos)
                if match is not None:
                    # Keep the '\n' itself: it is whitespace, not part of
                    # the dropped line's content.
                    self._emit_region(chunk[pos : match.start() + 1])
                    self._mode = _SKIP_LINE
                    pos = match.end()
                else:
                    region = chunk[pos:end]
                    self._emit_region(region)
                    nl = region.rfind(b"\n")
                    if nl >= 0 and not region[nl + 1 :].strip(_WS):
                        # Chunk ends inside the blank prefix of a new
                        # line; the next chunk decides what the line is.
                        self._mode = _LINE_START
                    return

    def finish(self) -> None:
        if not self._emitted:
            return
        if self._emitted == 1:
            last_is_zero = self._tail == b"0"
        else:
            last_is_zero = self._tail == b" 0"
        if not last_is_zero:
            self._out(b" 0")

    def _emit_region(self, region: bytes) -> None:
        if not region:
            return
        collapsed = _WS_RUN_RE.sub(b" ", region)
        core = collapsed.strip(b" ")
        if not core:
            self._saw_space()
            return
        if collapsed[:1] == b" ":
            self._saw_space()
        if self._pending_space:
            self._out(b" ")
            self._pending_space = False
        self._out(core)
        if collapsed[-1:] == b" ":
            self._saw_space()

    def _saw_space(self) -> None:
        if self._emitted:
            self._pending_space = True

    def _out(self, data: bytes) -> None:
        self._sink(data)
        self._emitted += len(data)
        self._tail = (self._tail + data)[-2:]


def _feed(source: bytes | BinaryIO, sink: Callable[[bytes], None]) -> None:
    machine = _Normalizer(sink)
    if isinstance(source, (bytes, bytearray, memoryview)):
        machine.update(bytes(source))
    else:
        while True:
            chunk = source.read(CHUNK_SIZE)
            if not chunk:
                break
            machine.update(chunk)
    machine.finish()


def normalize(source: bytes | BinaryIO) -> bytes:
    """Return the normalized form of `source` (bytes or a binary stream).

    Idempotent: normalizing an already-normalized byte string returns it
    unchanged.
    """
    parts: list[bytes] = []
    _feed(source, parts.append)
    return b"".join(parts)


def md5_hex(data: bytes = b"") -> str:
    """Lowercase hex md5 digest of `data` (RFC 1321)."""
    return hashlib.md5(data).hexdigest()


def gbd_hash(source: bytes | BinaryIO) -> str:
    """md5 digest (lowercase hex) of the normalized content of `source`."""
    digest = hashlib.md5()
    _feed(source, digest.update)
    return digest.hexdigest()


def is_gbd_hash(value: str) -> bool:
    """True if `value` is a well-formed identifier (32 lowercase hex chars)."""
    return bool(GBD_HASH_RE.match(value))


@contextmanager
def open_instance_file(path: str) -> Iterator[BinaryIO]:
    """Open an instance file for reading, decompressing gzip transparently.

    Detection is by the two gzip magic bytes, not the file name, because
    benchmark archives are frequently shipped compressed under arbitrary
    names.
    """
    with open(path, "rb") as raw:
        if raw.read(2) == GZIP_MAGIC:
            raw.seek(0)
            with gzip.GzipFile(fileobj=raw) as decompressed:
                yield decompressed  # type: ignore[misc]
        else:
            raw.seek(0)
            yield raw


def hash_file(path: str) -> str:
    """Identifier of the instance stored at `path` (plain or gzip).

    Raises FileNotFoundError for a missing path and FileDecodeError when
    the gzip stream is corrupt.
    """
    try:
        with open_instance_file(path) as stream:
            return gbd_hash(stream)
    except (gzip.BadGzipFile, zlib.error, EOFError) as exc:
        raise FileDecodeError(str(path), str(exc)) from exc
