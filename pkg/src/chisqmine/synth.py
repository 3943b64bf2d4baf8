"""Seeded generators for the synthetic string families used in benchmarks.

Five kinds of strings are supported:

* ``null`` -- i.i.d. draws from an explicit multinomial model (uniform by
  default);
* ``geometric`` -- i.i.d. draws where symbol i has probability proportional
  to 1/2^i;
* ``harmonic`` -- i.i.d. draws where symbol i has probability proportional
  to 1/(i+1);
* ``markov`` -- a first-order chain whose transition probability from symbol
  i to symbol j is proportional to 1/2^((i-j) mod k); the first symbol is
  drawn uniformly;
* ``biased_binary`` -- a binary chain that repeats the previous symbol with
  probability p and flips otherwise; the first symbol is drawn uniformly.
  p = 0.5 coincides in distribution with the uniform binary null.

:func:`generate` returns both the string and the model the analyst should
scan it against.  For every kind except an explicit-model ``null`` that is
the *uniform* i.i.d. model: the non-null generators exist to exercise scans
on data that deviates from the uniform null, so scoring them against their
own source distribution would defeat the purpose.

All randomness comes from numpy's PCG64 generator seeded with the 64-bit
``seed`` field; symbols are drawn from uniforms by inverse CDF.  Identical
specs produce identical strings, and each call owns its generator state, so
concurrent calls are independent.
"""

import json
from dataclasses import dataclass
from bisect import bisect_right
from pathlib import Path

import numpy as np

from .model import (
    EncodedString,
    Model,
    build_model,
    decode_string,
    default_alphabet,
    uniform_model,
)

PRNG_NAME = "numpy.random.PCG64"

KINDS = ("null", "geometric", "harmonic", "markov", "biased_binary")

__all__ = [
    "GeneratorSpec",
    "geometric_probs",
    "harmonic_probs",
    "markov_transition",
    "generate",
    "write_generated",
    "PRNG_NAME",
    "KINDS",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """Everything needed to reproduce one synthetic string."""

    kind: str
    n: int
    k: int = 2
    p: float | None = None
    model: Model | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError(f"string length must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.k}")
        if self.kind == "biased_binary":
            if self.k != 2:
                raise ValueError("biased_binary strings are binary; k must be 2")
            if self.p is None or not 0.0 < self.p < 1.0:
                raise ValueError("biased_binary needs a repeat probability p in (0, 1)")
        elif self.p is not None:
            raise ValueError(f"p only applies to biased_binary, not {self.kind!r}")
        if self.model is not None:
            if self.kind != "null":
                raise ValueError("an explicit model only applies to kind='null'")
            if self.model.k != self.k:
                raise ValueError(
                    f"model has k={self.model.k} but spec says k={self.k}"
                )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def geometric_probs(k: int) -> list[float]:
    """Probabilities proportional to 1/2^i for i = 0..k-1, normalized."""
    if k < 2:
        raise ValueError(f"alphabet size must be >= 2, got {k}")
    weights = [0.5**i for i in range(k)]
    total = sum(weights)
    return [w / total for w in weights]


def harmonic_probs(k: int) -> list[float]:
    """Probabilities proportional to 1/(i+1) for i = 0..k-1, normalized."""
    if k < 2:
        raise ValueError(f"alphabet size must be >= 2, got {k}")
    weights = [1.0 / (i + 1) for i in range(k)]
    total = sum(weights)
    return [w / total for w in weights]


def markov_transition(k: int) -> list[list[float]]:
    """Row-stochastic matrix with entry (i, j) proportional to 1/2^((i-j) mod k)."""
    if k < 2:
        raise ValueError(f"alphabet size must be >= 2, got {k}")
    rows = []
    for i in range(k):
        weights = [0.5 ** ((i - j) % k) for j in range(k)]
        total = sum(weights)
        rows.append([w / total for w in weights])
    return rows


def _inverse_cdf_sample(rng: np.random.Generator, probs, n: int) -> np.ndarray:
    cum = np.cumsum(np.asarray(probs, dtype=np.float64))
    cum[-1] = 1.0
    return np.searchsorted(cum, rng.random(n), side="right").astype(np.int64)


def _markov_string(rng: np.random.Generator, k: int, n: int) -> np.ndarray:
    rows = [list(np.cumsum(row)) for row in markov_transition(k)]
    for row in rows:
        row[-1] = 1.0
    us = rng.random(n)
    out = np.empty(n, dtype=np.int64)
    prev = min(int(us[0] * k), k - 1)
    out[0] = prev
    for t in range(1, n):
        prev = bisect_right(rows[prev], us[t])
        if prev >= k:
            prev = k - 1
        out[t] = prev
    return out


def _biased_binary_string(rng: np.random.Generator, p: float, n: int) -> np.ndarray:
    us = rng.random(n)
    first = 0 if us[0] < 0.5 else 1
    out = np.empty(n, dtype=np.int64)
    out[0] = first
    if n > 1:
        flips = (us[1:] >= p).astype(np.int64)
        out[1:] = first ^ (np.cumsum(flips) & 1)
    return out


def generate(spec: GeneratorSpec) -> tuple[EncodedString, Model]:
    """Generate the string for ``spec`` and the model to scan it against."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    k, n = spec.k, spec.n
    if spec.kind == "null":
        model = spec.model if spec.model is not None else uniform_model(k)
        data = _inverse_cdf_sample(rng, model.probs, n)
        scan_model = model
    elif spec.kind == "geometric":
        data = _inverse_cdf_sample(rng, geometric_probs(k), n)
        scan_model = uniform_model(k)
    elif spec.kind == "harmonic":
        data = _inverse_cdf_sample(rng, harmonic_probs(k), n)
        scan_model = uniform_model(k)
    elif spec.kind == "markov":
        data = _markov_string(rng, k, n)
        scan_model = uniform_model(k)
    else:  # biased_binary
        data = _biased_binary_string(rng, spec.p, n)
        scan_model = build_model(("0", "1"), (0.5, 0.5))
    return EncodedString(tuple(data.tolist()), k), scan_model


def write_generated(path, s: EncodedString, model: Model, spec: GeneratorSpec) -> None:
    """Write the string file plus an adjacent ``<path>.meta.json``.

    The metadata records the full generator spec and the PRNG identity, so
    any string file can be regenerated bit-for-bit.
    """
    path = Path(path)
    path.write_text(decode_string(s, model) + "\n", encoding="utf-8")
    meta = {
        "kind": spec.kind,
        "n": spec.n,
        "k": spec.k,
        "p": spec.p,
        "seed": spec.seed,
        "prng": PRNG_NAME,
        "scan_model": {"symbols": list(model.symbols), "probs": list(model.probs)},
    }
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
