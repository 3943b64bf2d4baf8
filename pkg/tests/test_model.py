import pytest
from hypothesis import given, strategies as st

from chisqmine.model import (
    CountVector,
    EncodedString,
    Model,
    build_model,
    build_prefix_counts,
    count_vector,
    decode_string,
    encode_string,
    read_model_file,
    read_string_file,
    uniform_model,
    write_model_file,
    write_string_file,
)


class TestBuildModel:
    def test_uniform_binary(self):
        m = build_model(["a", "b"], [0.5, 0.5])
        assert m.k == 2
        assert m.symbols == ("a", "b")
        assert m.probs == (0.5, 0.5)

    def test_sum_not_one_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            build_model(["a", "b"], [0.3, 0.3])

    def test_geometric_three_symbol(self):
        m = build_model(["a", "b", "c"], [4 / 7, 2 / 7, 1 / 7])
        assert m.k == 3
        assert sum(m.probs) == pytest.approx(1.0, abs=1e-9)

    def test_duplicate_symbol_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            build_model(["a", "a"], [0.5, 0.5])

    def test_nonpositive_probability_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            build_model(["a", "b"], [1.0, 0.0])
        with pytest.raises(ValueError, match="positive"):
            build_model(["a", "b"], [1.2, -0.2])

    def test_single_symbol_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            build_model(["a"], [1.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            build_model(["a", "b", "c"], [0.5, 0.5])

    def test_multicharacter_token_rejected(self):
        with pytest.raises(ValueError, match="single character"):
            build_model(["ab", "c"], [0.5, 0.5])

    def test_accepts_string_as_symbols(self):
        assert build_model("ab", [0.5, 0.5]).symbols == ("a", "b")


class TestEncodeString:
    def test_direct_mapping(self):
        m = build_model("ab", [0.5, 0.5])
        assert encode_string("aab", m).data == (0, 0, 1)

    def test_foreign_character_reports_position(self):
        m = build_model("ab", [0.5, 0.5])
        with pytest.raises(ValueError, match="position 2"):
            encode_string("axb", m)

    def test_empty_string_is_storable(self):
        m = build_model("ab", [0.5, 0.5])
        s = encode_string("", m)
        assert s.n == 0

    def test_round_trip(self):
        m = build_model("abc", [0.2, 0.3, 0.5])
        s = encode_string("cabbac", m)
        assert decode_string(s, m) == "cabbac"


class TestPrefixCounts:
    def test_aab(self):
        m = build_model("ab", [0.5, 0.5])
        pc = build_prefix_counts(encode_string("aab", m))
        assert pc.cum[0] == (0, 1, 2, 2)
        assert pc.cum[1] == (0, 0, 0, 1)

    def test_single_char(self):
        m = build_model("ab", [0.5, 0.5])
        pc = build_prefix_counts(encode_string("b", m))
        assert pc.cum[0] == (0, 0)
        assert pc.cum[1] == (0, 1)

    def test_abab_totals(self):
        m = build_model("ab", [0.5, 0.5])
        pc = build_prefix_counts(encode_string("abab", m))
        assert pc.cum[0][4] == 2
        assert pc.cum[1][4] == 2

    def test_counts_partition_positions(self):
        m = build_model("abc", [0.5, 0.25, 0.25])
        pc = build_prefix_counts(encode_string("abcabcc", m))
        for j in range(pc.n + 1):
            assert sum(row[j] for row in pc.cum) == j


class TestCountVector:
    @pytest.fixture
    def pc(self):
        m = build_model("ab", [0.5, 0.5])
        return build_prefix_counts(encode_string("aab", m))

    def test_examples(self, pc):
        assert count_vector(pc, 1, 2).counts == (2, 0)
        assert count_vector(pc, 2, 3).counts == (1, 1)
        cv = count_vector(pc, 1, 3)
        assert cv.counts == (2, 1)
        assert cv.length == 3

    def test_out_of_range(self, pc):
        for start, end in [(0, 1), (1, 4), (2, 1), (-1, 2)]:
            with pytest.raises(IndexError):
                count_vector(pc, start, end)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            CountVector((1, -1))


@given(
    data=st.lists(st.integers(0, 2), min_size=1, max_size=80),
    seed=st.integers(0, 10**6),
)
def test_count_vector_properties(data, seed):
    """Sum, full-tally, and concatenation invariants on random strings."""
    import random

    s = EncodedString(tuple(data), 3)
    pc = build_prefix_counts(s)
    n = s.n
    rng = random.Random(seed)
    i = rng.randint(1, n)
    j = rng.randint(i, n)
    cv = count_vector(pc, i, j)
    assert cv.length == j - i + 1

    full = count_vector(pc, 1, n)
    assert full.counts == tuple(data.count(c) for c in range(3))

    if j < n:
        m = rng.randint(j + 1, n)
        left = count_vector(pc, i, j).counts
        right = count_vector(pc, j + 1, m).counts
        whole = count_vector(pc, i, m).counts
        assert tuple(a + b for a, b in zip(left, right)) == whole


class TestFileFormats:
    def test_model_round_trip(self, tmp_path):
        m = build_model("abc", [0.5, 0.25, 0.25])
        path = tmp_path / "model.txt"
        write_model_file(path, m)
        again = read_model_file(path)
        assert again.symbols == m.symbols
        assert again.probs == m.probs

    def test_model_file_format(self, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("a b\n0.5 0.5\n")
        m = read_model_file(path)
        assert m.symbols == ("a", "b")

    def test_model_file_bad_probability(self, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("a b\n0.5 zebra\n")
        with pytest.raises(ValueError, match="non-numeric"):
            read_model_file(path)

    def test_model_file_too_short(self, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("a b\n")
        with pytest.raises(ValueError, match="two lines"):
            read_model_file(path)

    def test_string_round_trip_ignores_trailing_newline(self, tmp_path):
        m = build_model("ab", [0.5, 0.5])
        path = tmp_path / "s.txt"
        path.write_text("abba\n")
        s = read_string_file(path, m)
        assert s.data == (0, 1, 1, 0)

        out = tmp_path / "t.txt"
        write_string_file(out, s, m)
        assert read_string_file(out, m).data == s.data

    def test_uniform_model_default_alphabet(self):
        m = uniform_model(4)
        assert m.symbols == ("a", "b", "c", "d")
        assert sum(m.probs) == pytest.approx(1.0, abs=1e-12)
