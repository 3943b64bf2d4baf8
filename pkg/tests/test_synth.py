import json
from collections import Counter

import pytest

from chisqmine.model import build_model, uniform_model
from chisqmine.synth import (
    GeneratorSpec,
    PRNG_NAME,
    generate,
    geometric_probs,
    harmonic_probs,
    markov_transition,
    write_generated,
)


class TestDistributionConstructors:
    def test_geometric_k2(self):
        assert geometric_probs(2) == pytest.approx([2 / 3, 1 / 3], rel=1e-15)

    def test_geometric_k3(self):
        assert geometric_probs(3) == pytest.approx([4 / 7, 2 / 7, 1 / 7], rel=1e-15)

    def test_geometric_normalized(self):
        for k in (2, 3, 5, 11):
            assert sum(geometric_probs(k)) == pytest.approx(1.0, abs=1e-12)

    def test_harmonic_k2(self):
        assert harmonic_probs(2) == pytest.approx([2 / 3, 1 / 3], rel=1e-15)

    def test_harmonic_k3(self):
        assert harmonic_probs(3) == pytest.approx([6 / 11, 3 / 11, 2 / 11], rel=1e-12)

    def test_harmonic_strictly_decreasing(self):
        for k in (2, 4, 9):
            probs = harmonic_probs(k)
            assert all(a > b for a, b in zip(probs, probs[1:]))

    def test_markov_k2_rows(self):
        rows = markov_transition(2)
        assert rows[0] == pytest.approx([2 / 3, 1 / 3], rel=1e-15)
        assert rows[1] == pytest.approx([1 / 3, 2 / 3], rel=1e-15)

    def test_markov_rows_sum_to_one(self):
        for k in (2, 3, 6):
            for row in markov_transition(k):
                assert sum(row) == pytest.approx(1.0, abs=1e-12)

    def test_k_too_small(self):
        for fn in (geometric_probs, harmonic_probs, markov_transition):
            with pytest.raises(ValueError):
                fn(1)


class TestGeneratorSpec:
    def test_biased_binary_needs_p(self):
        with pytest.raises(ValueError, match="repeat probability"):
            GeneratorSpec(kind="biased_binary", n=10)

    def test_biased_binary_is_binary(self):
        with pytest.raises(ValueError, match="binary"):
            GeneratorSpec(kind="biased_binary", n=10, k=3, p=0.7)

    def test_p_rejected_elsewhere(self):
        with pytest.raises(ValueError, match="only applies"):
            GeneratorSpec(kind="null", n=10, p=0.7)

    def test_model_only_for_null(self):
        m = uniform_model(2)
        with pytest.raises(ValueError, match="null"):
            GeneratorSpec(kind="markov", n=10, k=2, model=m)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown kind"):
            GeneratorSpec(kind="poisson", n=10)

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            GeneratorSpec(kind="null", n=0)
        with pytest.raises(ValueError):
            GeneratorSpec(kind="null", n=5, k=1)


class TestGenerate:
    def test_seed_determinism(self):
        spec = GeneratorSpec(kind="null", n=5, k=2, model=uniform_model(2), seed=42)
        s1, m1 = generate(spec)
        s2, m2 = generate(spec)
        assert s1.data == s2.data
        assert m1 == m2

    def test_seeds_differ(self):
        a, _ = generate(GeneratorSpec(kind="null", n=200, k=2, seed=1))
        b, _ = generate(GeneratorSpec(kind="null", n=200, k=2, seed=2))
        assert a.data != b.data

    def test_exact_length_all_kinds(self):
        for kind in ("null", "geometric", "harmonic", "markov"):
            s, _ = generate(GeneratorSpec(kind=kind, n=137, k=3, seed=9))
            assert s.n == 137
        s, _ = generate(GeneratorSpec(kind="biased_binary", n=137, p=0.8, seed=9))
        assert s.n == 137

    def test_geometric_frequency_convergence(self):
        s, _ = generate(GeneratorSpec(kind="geometric", n=100_000, k=3, seed=11))
        freq = Counter(s.data)
        assert freq[0] / s.n == pytest.approx(4 / 7, abs=0.01)
        assert freq[1] / s.n == pytest.approx(2 / 7, abs=0.01)

    def test_harmonic_frequency_convergence(self):
        s, _ = generate(GeneratorSpec(kind="harmonic", n=100_000, k=3, seed=12))
        freq = Counter(s.data)
        assert freq[0] / s.n == pytest.approx(6 / 11, abs=0.01)

    def test_markov_uniform_stationary(self):
        s, _ = generate(GeneratorSpec(kind="markov", n=100_000, k=2, seed=13))
        freq = Counter(s.data)
        assert freq[0] / s.n == pytest.approx(0.5, abs=0.01)

    def test_null_respects_explicit_model(self):
        m = build_model("ab", [0.9, 0.1])
        s, returned = generate(GeneratorSpec(kind="null", n=100_000, k=2, model=m, seed=14))
        assert returned == m
        freq = Counter(s.data)
        assert freq[0] / s.n == pytest.approx(0.9, abs=0.01)

    def test_biased_binary_repeat_rate(self):
        s, m = generate(GeneratorSpec(kind="biased_binary", n=100_000, p=0.8, seed=15))
        repeats = sum(a == b for a, b in zip(s.data, s.data[1:]))
        assert repeats / (s.n - 1) == pytest.approx(0.8, abs=0.01)
        # scanning model is the fair-bit null
        assert m.probs == (0.5, 0.5)
        assert m.symbols == ("0", "1")

    def test_non_null_kinds_return_uniform_scan_model(self):
        for kind in ("geometric", "harmonic", "markov"):
            _, m = generate(GeneratorSpec(kind=kind, n=50, k=4, seed=3))
            assert m.probs == tuple([0.25] * 4)


class TestWriteGenerated:
    def test_writes_string_and_metadata(self, tmp_path):
        spec = GeneratorSpec(kind="biased_binary", n=64, p=0.6, seed=77)
        s, m = generate(spec)
        out = tmp_path / "bits.txt"
        write_generated(out, s, m, spec)

        text = out.read_text().rstrip("\n")
        assert len(text) == 64
        assert set(text) <= {"0", "1"}

        meta = json.loads((tmp_path / "bits.txt.meta.json").read_text())
        assert meta["kind"] == "biased_binary"
        assert meta["n"] == 64
        assert meta["p"] == 0.6
        assert meta["seed"] == 77
        assert meta["prng"] == PRNG_NAME
        assert meta["scan_model"]["symbols"] == ["0", "1"]
