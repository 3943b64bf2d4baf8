"""Multinomial null model, string encoding, and O(1) substring count queries.

A :class:`Model` fixes the alphabet and the per-character probabilities of a
memoryless multinomial source.  Raw text is translated into a compact
:class:`EncodedString` of symbol indices, and :class:`PrefixCounts` stores one
cumulative count array per character so that the count vector of any substring
can be extracted in O(k) time.

All indices in the public interface are 1-based and inclusive, i.e. the pair
``(start, end)`` names the substring spanning positions ``start..end`` of the
text.  Every type here is immutable after construction and safe to share
between threads.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Model:
    """A fixed multinomial distribution over a small alphabet.

    ``symbols`` holds k distinct single-character tokens and ``probs`` their
    occurrence probabilities.  Validation happens at construction, so any
    live instance satisfies: k >= 2, all probabilities positive, and the
    probabilities sum to 1 within ``PROB_SUM_TOL``.
    """

    symbols: tuple[str, ...]
    probs: tuple[float, ...]
    inv_probs: tuple[float, ...] = field(init=False, repr=False, compare=False)
    one_minus_probs: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "probs", probs)
        if len(symbols) != len(probs):
            raise ValueError(
                f"got {len(symbols)} symbols but {len(probs)} probabilities"
            )
        if len(symbols) < 2:
            raise ValueError("alphabet needs at least 2 symbols")
        for s in symbols:
            if not isinstance(s, str) or len(s) != 1:
                raise ValueError(f"symbol {s!r} is not a single character")
        if len(set(symbols)) != len(symbols):
            dupes = sorted({s for s in symbols if symbols.count(s) > 1})
            raise ValueError(f"duplicate symbol(s): {dupes}")
        for s, p in zip(symbols, probs):
            if not (p > 0.0):
                raise ValueError(f"probability of {s!r} must be positive, got {p}")
        total = sum(probs)
        if not abs(total - 1.0) <= PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "inv_probs", tuple(1.0 / p for p in probs))
        object.__setattr__(self, "one_minus_probs", tuple(1.0 - p for p in probs))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @property
    def k(self) -> int:
        return len(self.symbols)

    def index_of(self, ch: str) -> int:
        """Symbol index of ``ch``; raises ValueError for foreign characters."""
        try:
            return self._index[ch]
        except KeyError:
            raise ValueError(f"character {ch!r} is not in the alphabet") from None


def build_model(symbols, probs) -> Model:
    """Validate and build a :class:`Model` from parallel symbol/probability lists."""
    return Model(tuple(symbols), tuple(probs))


def uniform_model(k: int, symbols=None) -> Model:
    """Uniform model over ``k`` symbols (defaults to 'a', 'b', ...)."""
    if symbols is None:
        symbols = default_alphabet(k)
    return Model(tuple(symbols), tuple(1.0 / k for _ in range(k)))


_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


def default_alphabet(k: int) -> tuple[str, ...]:
    if not 2 <= k <= len(_ALPHABET):
        raise ValueError(f"default alphabet supports 2 <= k <= {len(_ALPHABET)}")
    return tuple(_ALPHABET[:k])


@dataclass(frozen=True)
class EncodedString:
    """A text as a sequence of symbol indices in ``[0, k)``.

    Length 0 is legal for storage; scans reject empty inputs themselves.
    """

    data: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        if self.k < 2:
            raise ValueError("alphabet size must be at least 2")
        if self.data:
            lo, hi = min(self.data), max(self.data)
            if lo < 0 or hi >= self.k:
                raise ValueError(f"symbol index out of range [0, {self.k})")

    @property
    def n(self) -> int:
        return len(self.data)


def encode_string(text, model: Model) -> EncodedString:
    """Map each character of ``text`` to its symbol index.

    Characters outside the alphabet raise ValueError naming the (1-based)
    offending position.
    """
    index = model._index
    data = []
    for pos, ch in enumerate(text):
        try:
            data.append(index[ch])
        except KeyError:
            raise ValueError(
                f"character {ch!r} at position {pos + 1} is not in the alphabet"
            ) from None
    return EncodedString(tuple(data), model.k)


def decode_string(s: EncodedString, model: Model) -> str:
    if model.k != s.k:
        raise ValueError(f"alphabet size mismatch: string has k={s.k}, model k={model.k}")
    symbols = model.symbols
    return "".join(symbols[i] for i in s.data)


@dataclass(frozen=True)
class PrefixCounts:
    """Per-character cumulative counts: ``cum[c][j]`` occurrences of symbol
    ``c`` among the first ``j`` characters (``cum[c][0] == 0``)."""

    cum: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.cum:
            raise ValueError("need at least one count array")
        lengths = {len(row) for row in self.cum}
        if len(lengths) != 1:
            raise ValueError("count arrays must all have the same length")

    @property
    def k(self) -> int:
        return len(self.cum)

    @property
    def n(self) -> int:
        return len(self.cum[0]) - 1


def build_prefix_counts(s: EncodedString) -> PrefixCounts:
    """Build the k cumulative count arrays in one pass over the string."""
    arr = np.asarray(s.data, dtype=np.int64)
    rows = []
    for c in range(s.k):
        row = np.zeros(s.n + 1, dtype=np.int64)
        np.cumsum(arr == c, out=row[1:])
        rows.append(tuple(row.tolist()))
    return PrefixCounts(tuple(rows))


@dataclass(frozen=True)
class CountVector:
    """Per-character occurrence counts of one substring; the sole input to
    chi-square scoring."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @property
    def length(self) -> int:
        return sum(self.counts)


def count_vector(pc: PrefixCounts, start: int, end: int) -> CountVector:
    """Count vector of the substring ``start..end`` (1-based, inclusive)."""
    if not (1 <= start <= end <= pc.n):
        raise IndexError(
            f"substring ({start}, {end}) out of range for a string of length {pc.n}"
        )
    return CountVector(tuple(row[end] - row[start - 1] for row in pc.cum))


# ---------------------------------------------------------------------------
# File formats
#
# Model file: two lines of UTF-8 text -- symbols separated by single spaces,
# then their probabilities.  String file: one contiguous run of symbol
# characters; a trailing newline is ignored.
# ---------------------------------------------------------------------------


def read_model_file(path) -> Model:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 2:
        raise ValueError(f"model file {path} needs two lines (symbols, probabilities)")
    symbols = lines[0].split()
    try:
        probs = [float(tok) for tok in lines[1].split()]
    except ValueError:
        raise ValueError(f"model file {path} has a non-numeric probability") from None
    return build_model(symbols, probs)


def write_model_file(path, model: Model) -> None:
    text = " ".join(model.symbols) + "\n" + " ".join(repr(p) for p in model.probs) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def read_string_file(path, model: Model) -> EncodedString:
    text = Path(path).read_text(encoding="utf-8").rstrip("\r\n")
    return encode_string(text, model)


def write_string_file(path, s: EncodedString, model: Model) -> None:
    Path(path).write_text(decode_string(s, model) + "\n", encoding="utf-8")
