import gzip
import io
import random

import pytest

from gbd.errors import DimacsParseError, FileDecodeError
from gbd.features import BaseFeatures, extract_base_features, features_of_file
from gbd.hashing import normalize

from generators import COSMETIC_MUTATIONS, random_formula, render_plain


def _extract(data: bytes) -> BaseFeatures:
    return extract_base_features(io.BytesIO(data))


def test_two_clause_example():
    feats = _extract(b"p cnf 3 2\n1 -3 0\n2 3 -1 0\n")
    assert feats == BaseFeatures(variables=3, clauses=2, clauses_horn=1)


def test_empty_stream():
    assert _extract(b"") == BaseFeatures(0, 0, 0)
    assert _extract(b"c nothing here\n") == BaseFeatures(0, 0, 0)


def test_unterminated_trailing_clause_counts():
    assert _extract(b"1 2") == BaseFeatures(variables=2, clauses=1, clauses_horn=0)


def test_header_counts_are_ignored():
    a = _extract(b"p cnf 3 2\n1 -3 0\n2 3 -1 0\n")
    b = _extract(b"p cnf 999 999\n1 -3 0\n2 3 -1 0\n")
    assert a == b


def test_empty_clause_is_horn():
    assert _extract(b"0\n") == BaseFeatures(variables=0, clauses=1, clauses_horn=1)


def test_all_negative_clause_is_horn():
    assert _extract(b"-1 -2 -3 0\n") == BaseFeatures(3, 1, 1)


def test_repeated_positive_literal_counts_by_occurrence():
    # "1 1" has two positive occurrences, so the clause is not horn
    assert _extract(b"1 1 0\n") == BaseFeatures(1, 1, 0)


def test_variables_is_max_absolute_literal():
    assert _extract(b"-7 2 0\n") == BaseFeatures(7, 1, 1)
    # gaps are not compacted
    assert _extract(b"100 0\n").variables == 100


def test_non_integer_token_reports_offset():
    with pytest.raises(DimacsParseError) as err:
        _extract(b"1 -3 0\nxx 0\n")
    assert err.value.offset == 7
    assert "xx" in str(err.value)


def test_rejects_lenient_integer_spellings():
    # int() would take these; the format does not
    for bad in (b"1_2 0\n", b"+5 0\n", b"0x1 0\n", b"5. 0\n"):
        with pytest.raises(DimacsParseError):
            _extract(bad)


def test_negative_zero_token_is_a_literal():
    # only the exact token "0" ends a clause; "-0" is a literal of var 0
    feats = _extract(b"-0 1 0\n")
    assert feats.clauses == 1


def test_token_stream_agrees_with_normalization():
    rng = random.Random(201)
    for _ in range(60):
        formula = random_formula(rng)
        data = COSMETIC_MUTATIONS[rng.choice(list(COSMETIC_MUTATIONS))](formula, rng)
        feats = _extract(data)
        norm_tokens = normalize(data).split()
        assert feats.clauses == norm_tokens.count(b"0")
        assert feats == BaseFeatures(
            formula.variables(), len(formula.clauses), formula.horn_count()
        )


def test_big_literal_values():
    feats = _extract(b"123456789123456789 0\n")
    assert feats.variables == 123456789123456789


def test_features_of_file_gzip(tmp_path):
    data = b"p cnf 2 1\n1 -2 0\n"
    path = tmp_path / "x.cnf.gz"
    path.write_bytes(gzip.compress(data))
    assert features_of_file(path) == BaseFeatures(2, 1, 1)


def test_features_of_file_corrupt_gzip(tmp_path):
    path = tmp_path / "x.cnf.gz"
    path.write_bytes(b"\x1f\x8bnot really")
    with pytest.raises(FileDecodeError):
        features_of_file(path)


def test_features_of_file_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        features_of_file(tmp_path / "gone.cnf")
