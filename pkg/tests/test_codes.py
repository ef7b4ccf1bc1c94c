import pytest
from hypothesis import given, strategies as st

from coronal.codes import (
    AngleSymbol,
    CodeFormatError,
    angle_sum,
    canonical_word,
    canonicalize,
    downgrade,
    format_code,
    parse_code,
    read_code_file,
    write_code_file,
)


def brute_canonical(word):
    """Least word over explicit rotations and reflections."""
    m = len(word)
    cands = []
    for w in (list(word), list(reversed(word))):
        for i in range(m):
            cands.append(tuple(w[i:] + w[:i]))
    return min(cands)


def test_parse_small_center():
    x = parse_code("0:22121", 3)
    assert x.center == 0
    assert x.petals == brute_canonical([2, 2, 1, 2, 1]) == (1, 2, 1, 2, 2)
    assert x.display == "0:22121"
    assert format_code(x) == "0:12122"


def test_parse_single_symbol():
    x = parse_code("0:0", 1)
    assert (x.center, x.petals) == (0, (0,))


def test_parse_medium_center():
    assert len(parse_code("1:212020", 3)) == 6


@pytest.mark.parametrize("text,n", [
    ("0-22121", 3), ("0:", 3), ("", 3), ("0:223", 3), ("3:01", 3), ("00:1", 3), ("0:1", 0),
])
def test_parse_errors(text, n):
    with pytest.raises(CodeFormatError):
        parse_code(text, n)


def test_base36_symbols():
    x = parse_code("a:0z", 36)
    assert x.center == 10 and x.petals == (0, 35)
    with pytest.raises(CodeFormatError):
        parse_code("a:0z", 35)


def test_canonicalize_reflection():
    assert canonicalize(0, [2, 2, 1, 2, 1]) == canonicalize(0, [1, 2, 1, 2, 2])
    assert canonicalize(0, [0, 0, 0]).petals == (0, 0, 0)
    assert canonicalize(1, [2, 1, 2, 0, 2, 0]) == canonicalize(1, [0, 2, 0, 2, 1, 2])
    assert canonicalize(0, [1, 1]) != canonicalize(1, [1, 1])


def test_canonicalize_empty():
    with pytest.raises(ValueError):
        canonicalize(0, [])


words = st.lists(st.integers(0, 3), min_size=1, max_size=9)


@given(words)
def test_canonical_class_invariant(word):
    key = canonical_word(word)
    assert key == brute_canonical(word)
    m = len(word)
    for w in (word, word[::-1]):
        for i in range(m):
            rot = w[i:] + w[:i]
            assert canonical_word(rot) == key
    assert canonical_word(key) == key


@given(words)
def test_angle_sum_class_invariant(word):
    x = canonicalize(0, word)
    ref = angle_sum(x)
    assert ref.total == len(word)
    m = len(word)
    from coronal.codes import CoronalCode

    for w in (word, word[::-1]):
        for i in range(m):
            # bypass canonicalization so each representative is summed as written
            y = CoronalCode(0, tuple(w[i:] + w[:i]))
            assert angle_sum(y) == ref


def test_angle_sum_examples():
    assert angle_sum(parse_code("0:1111", 2)).as_dict() == {AngleSymbol(0, 1, 1): 4}
    assert angle_sum(parse_code("0:22121", 3)).as_dict() == {
        AngleSymbol(0, 2, 2): 1, AngleSymbol(0, 1, 2): 4}
    assert angle_sum(parse_code("1:212020", 3)).as_dict() == {
        AngleSymbol(1, 1, 2): 2, AngleSymbol(1, 0, 2): 4}


def test_angle_symbol_unordered():
    assert AngleSymbol(0, 2, 1) == AngleSymbol(0, 1, 2)


def test_downgrade_examples():
    x = parse_code("0:22121", 3)
    assert downgrade(x, 1) == parse_code("0:11111", 2)
    assert downgrade(x, 2) == x
    y = downgrade(parse_code("1:212020", 3), 1)
    assert y == canonicalize(1, [1, 1, 1, 0, 1, 0])
    assert format_code(y) == "1:010111"


@given(st.integers(0, 4), words, st.integers(0, 4), st.integers(0, 4))
def test_downgrade_composes(center, word, j, k):
    j, k = min(j, k), max(j, k)
    x = canonicalize(center, word)
    assert downgrade(downgrade(x, k), j) == downgrade(x, j)
    assert len(downgrade(x, k)) == len(x)


def test_code_file_roundtrip(tmp_path):
    path = tmp_path / "set.codes"
    path.write_text("# three sizes\n0:22121\n\n1:212020  # medium\n")
    codes = read_code_file(path, 3)
    assert [format_code(x) for x in codes] == ["0:12122", "1:020212"]
    write_code_file(tmp_path / "out.codes", codes)
    assert read_code_file(tmp_path / "out.codes", 3) == codes

