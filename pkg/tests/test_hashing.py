import gzip
import hashlib
import io
import random

import pytest

from gbd.errors import FileDecodeError
from gbd.hashing import gbd_hash, hash_file, is_gbd_hash, md5_hex, normalize

from generators import (
    COSMETIC_MUTATIONS,
    Formula,
    random_formula,
    render_plain,
    swap_clauses,
)

# computed with an independent md5 oracle, frozen
MD5_OF_1_0 = "a451306aa6a2be8fd7cd44dc5f9511ae"
MD5_EMPTY = "d41d8cd98f00b204e9800998ecf8427e"


def test_normalize_drops_comment_and_header_lines():
    data = b"c comment\np cnf 3 2\n1 -3  0\n 2 3 -1 0\n"
    assert normalize(data) == b"1 -3 0 2 3 -1 0"


def test_normalize_appends_missing_final_zero():
    assert normalize(b"p cnf 2 1\n1 2") == b"1 2 0"


def test_normalize_all_comments_is_empty():
    assert normalize(b"c only comments\nc more\n") == b""


def test_normalize_whitespace_classes_collapse():
    assert normalize(b"1\t-2\x0b3\x0c0\r\n4 0\n") == b"1 -2 3 0 4 0"


def test_normalize_leading_blanks_before_marker():
    # indented comment/header lines are still dropped whole
    assert normalize(b"  c note\n\tp cnf 9 9\n1 0\n") == b"1 0"


def test_normalize_marker_must_lead_the_line():
    # 'c' in clause position is ordinary content, not a comment
    assert normalize(b"1 c 2 0\n") == b"1 c 2 0"


def test_normalize_crlf_line_breaks():
    assert normalize(b"c x\r\np cnf 1 1\r\n1 0\r\n") == b"1 0"


def test_normalize_empty_input():
    assert normalize(b"") == b""
    assert normalize(b"   \n \t \n") == b""


def test_normalize_final_zero_not_duplicated():
    assert normalize(b"1 0\n") == b"1 0"
    assert normalize(b"0") == b"0"


def test_normalize_percent_line_is_ordinary_content():
    # legacy archives end some files with a '%' line; it is neither a
    # comment nor a header, so it stays
    assert normalize(b"1 0\n%\n0\n") == b"1 0 % 0"


def test_normalize_idempotent():
    rng = random.Random(101)
    for _ in range(50):
        formula = random_formula(rng)
        once = normalize(render_plain(formula))
        assert normalize(once) == once


def test_normalize_agrees_with_structure():
    rng = random.Random(102)
    for _ in range(50):
        formula = random_formula(rng)
        assert normalize(render_plain(formula)) == formula.normalized()
        for mutate in COSMETIC_MUTATIONS.values():
            assert normalize(mutate(formula, rng)) == formula.normalized()


def test_normalize_stream_equals_bytes():
    rng = random.Random(103)
    data = render_plain(random_formula(rng, min_clauses=5, max_clauses=30))
    assert normalize(io.BytesIO(data)) == normalize(data)


class _TrickleStream(io.RawIOBase):
    """Returns at most 3 bytes per read, hitting every chunk-boundary path."""

    def __init__(self, data: bytes) -> None:
        self._buffer = io.BytesIO(data)

    def readable(self) -> bool:
        return True

    def read(self, size: int = -1) -> bytes:
        return self._buffer.read(3 if size is None or size < 0 else min(3, size))


def test_normalize_chunk_boundaries():
    rng = random.Random(104)
    for _ in range(20):
        formula = random_formula(rng)
        data = COSMETIC_MUTATIONS["comments"](formula, rng)
        assert normalize(_TrickleStream(data)) == formula.normalized()


def test_md5_hex_known_vectors():
    assert md5_hex(b"") == MD5_EMPTY
    assert md5_hex(b"abc") == "900150983cd24fb0d6963f7d28e17f72"


def test_gbd_hash_empty_input():
    assert gbd_hash(b"") == MD5_EMPTY
    assert gbd_hash(b"c all comments\n") == MD5_EMPTY


def test_gbd_hash_known_file():
    assert gbd_hash(b"p cnf 1 1\n1 0\n") == MD5_OF_1_0


def test_gbd_hash_equals_md5_of_normalized():
    rng = random.Random(105)
    for _ in range(20):
        data = render_plain(random_formula(rng))
        assert gbd_hash(data) == hashlib.md5(normalize(data)).hexdigest()


def test_cosmetic_invariance_sample():
    rng = random.Random(106)
    for _ in range(60):
        formula = random_formula(rng)
        reference = gbd_hash(render_plain(formula))
        for name, mutate in COSMETIC_MUTATIONS.items():
            assert gbd_hash(mutate(formula, rng)) == reference, name


def test_clause_swap_changes_hash():
    rng = random.Random(107)
    for _ in range(60):
        formula = random_formula(rng, min_clauses=2, distinct_pair=True)
        swapped = swap_clauses(formula, rng)
        assert gbd_hash(render_plain(swapped)) != gbd_hash(render_plain(formula))


def test_is_gbd_hash():
    assert is_gbd_hash(MD5_EMPTY)
    assert not is_gbd_hash("xyz")
    assert not is_gbd_hash(MD5_EMPTY.upper())
    assert not is_gbd_hash(MD5_EMPTY + "0")


def test_hash_file_plain(tmp_path):
    path = tmp_path / "a.cnf"
    path.write_bytes(b"p cnf 1 1\n1 0\n")
    assert hash_file(path) == MD5_OF_1_0


def test_hash_file_gzip_transparency(tmp_path):
    data = b"c z\np cnf 2 1\n1 -2 0\n"
    plain = tmp_path / "a.cnf"
    plain.write_bytes(data)
    packed = tmp_path / "a.cnf.gz"
    packed.write_bytes(gzip.compress(data))
    assert hash_file(packed) == hash_file(plain)


def test_hash_file_gzip_detected_by_magic_not_name(tmp_path):
    data = b"1 2 0\n"
    path = tmp_path / "oddly_named.cnf"
    path.write_bytes(gzip.compress(data))
    assert hash_file(path) == gbd_hash(data)


def test_hash_file_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        hash_file(tmp_path / "absent.cnf")


def test_hash_file_corrupt_gzip_names_path(tmp_path):
    path = tmp_path / "broken.cnf.gz"
    path.write_bytes(b"\x1f\x8b" + b"garbage garbage")
    with pytest.raises(FileDecodeError) as err:
        hash_file(path)
    assert "broken.cnf.gz" in str(err.value)
