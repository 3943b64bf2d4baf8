"""The four substring-mining scans and their brute-force oracle.

Every scan enumerates substrings in the same order: start index i from n down
to 1, and for each start, lengths increasing.  After evaluating a substring
whose score did not beat the skip budget, the chain-cover bound licenses
jumping over the next ``x`` lengths (they provably cannot beat the budget),
so the next evaluated length is ``current + x + 1``.  What differs between
variants is only the budget:

* ``mss``       -- the best score seen so far (single winner);
* ``minlen``    -- same, but lengths start above a floor;
* ``topt``      -- the minimum of a size-t heap of the best scores;
* ``threshold`` -- a constant; every evaluated substring above it is emitted,
  and the scan advances by one position from such hits (no skip can be
  justified from a position that itself beats the budget).

Reported spans use 1-based inclusive indices.  Ties on the best score go to
the span reached first in scan order; the brute-force oracle applies the
identical rule, and both compute scores with the same operation order, so
results compare exactly.

Instrumentation counts ``evaluations`` (substrings actually scored) and
``skipped`` (positions jumped over); their sum equals the number of eligible
substrings, which is what the brute-force scan evaluates.

Each scan is a single-threaded pure function over immutable inputs; any
number of scans may run concurrently against a shared PrefixCounts.
"""

import heapq
import math
from dataclasses import dataclass, field
from time import perf_counter
from typing import Iterator, NamedTuple

import numpy as np

from .chisq import _skip_amount
from .model import Model, PrefixCounts
from .stats import p_value

__all__ = [
    "ScoredSpan",
    "Instrumentation",
    "ScanResult",
    "scan_mss",
    "scan_top_t",
    "scan_threshold",
    "iter_threshold_spans",
    "scan_min_length",
    "brute_force_scan",
    "attach_p_values",
    "VARIANTS",
]

VARIANTS = ("mss", "topt", "threshold", "minlen")


class ScoredSpan(NamedTuple):
    """One substring result: 1-based inclusive span, its score, and an
    optional p-value (attached post hoc, see :func:`attach_p_values`)."""

    start: int
    end: int
    score: float
    p_value: float | None = None

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass
class Instrumentation:
    evaluations: int = 0
    skipped: int = 0
    elapsed: float = 0.0


@dataclass
class ScanResult:
    """Spans (best score first; ties in scan order), instrumentation, and
    the scan's identity for reproducibility."""

    spans: list
    instrumentation: Instrumentation
    variant: str
    params: dict = field(default_factory=dict)
    seed: int | None = None


def _span_order(sp: ScoredSpan):
    # Descending score; ties in scan order (start descending, length ascending).
    return (-sp.score, -sp.start, sp.end)


def _check_input(pc: PrefixCounts, model: Model) -> None:
    if model.k != pc.k:
        raise ValueError(f"prefix counts have k={pc.k} but model has k={model.k}")
    if pc.n < 1:
        raise ValueError("cannot scan an empty string")


def scan_mss(pc: PrefixCounts, model: Model) -> ScanResult:
    """Find the substring with the highest chi-square score."""
    _check_input(pc, model)
    return _scan_best(pc, model, min_len=1, variant="mss", params={})


def scan_min_length(pc: PrefixCounts, model: Model, gamma0: int) -> ScanResult:
    """Best-scoring substring among those of length strictly greater than ``gamma0``."""
    _check_input(pc, model)
    if gamma0 < 0:
        raise ValueError(f"length floor must be nonnegative, got {gamma0}")
    if gamma0 >= pc.n:
        raise ValueError(
            f"no substring of length > {gamma0} in a string of length {pc.n}"
        )
    return _scan_best(
        pc, model, min_len=gamma0 + 1, variant="minlen", params={"gamma0": gamma0}
    )


def _scan_best(pc: PrefixCounts, model: Model, min_len: int, variant: str, params: dict) -> ScanResult:
    n = pc.n
    k = pc.k
    cum = pc.cum
    probs = model.probs
    inv_p = model.inv_probs
    one_minus = model.one_minus_probs
    sym = range(k)

    best_score = -math.inf
    best_start = best_end = 0
    budget = 0.0
    evals = 0
    skipped = 0
    t0 = perf_counter()
    for i in range(n - min_len + 1, 0, -1):
        i1 = i - 1
        base = [row[i1] for row in cum]
        top = n - i1
        l = min_len
        while l <= top:
            e = i1 + l
            counts = [cum[c][e] - base[c] for c in sym]
            s = 0.0
            for c in sym:
                y = counts[c]
                s += y * y * inv_p[c]
            score = s / l - l
            evals += 1
            if score > best_score:
                best_score = score
                best_start = i
                best_end = e
                if score > budget:
                    budget = score
            x = _skip_amount(counts, l, score, budget, probs, one_minus)
            if x:
                rem = top - l
                skipped += x if x < rem else rem
            l += x + 1
    elapsed = perf_counter() - t0

    spans = [ScoredSpan(best_start, best_end, best_score)]
    return ScanResult(
        spans=spans,
        instrumentation=Instrumentation(evals, skipped, elapsed),
        variant=variant,
        params=params,
    )


def scan_top_t(pc: PrefixCounts, model: Model, t: int) -> ScanResult:
    """Find the t highest-scoring substrings (strictly positive scores only).

    The heap starts filled with zero sentinels and admission requires beating
    the current heap minimum, so zero-score substrings never enter; fewer
    than t spans come back when fewer than t substrings score above zero.
    """
    _check_input(pc, model)
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")

    n = pc.n
    k = pc.k
    cum = pc.cum
    probs = model.probs
    inv_p = model.inv_probs
    one_minus = model.one_minus_probs
    sym = range(k)
    replace = heapq.heapreplace

    heap = [(0.0, 0, 0)] * t
    evals = 0
    skipped = 0
    t0 = perf_counter()
    for i in range(n, 0, -1):
        i1 = i - 1
        base = [row[i1] for row in cum]
        top = n - i1
        l = 1
        while l <= top:
            e = i1 + l
            counts = [cum[c][e] - base[c] for c in sym]
            s = 0.0
            for c in sym:
                y = counts[c]
                s += y * y * inv_p[c]
            score = s / l - l
            evals += 1
            budget = heap[0][0]
            if score > budget:
                replace(heap, (score, i, e))
                budget = heap[0][0]
            if score <= budget:
                x = _skip_amount(counts, l, score, budget, probs, one_minus)
            else:
                # The new heap minimum is still below this score; no cover
                # argument applies, so move on by a single position.
                x = 0
            if x:
                rem = top - l
                skipped += x if x < rem else rem
            l += x + 1
    elapsed = perf_counter() - t0

    spans = [ScoredSpan(st, en, sc) for sc, st, en in heap if st > 0]
    spans.sort(key=_span_order)
    return ScanResult(
        spans=spans,
        instrumentation=Instrumentation(evals, skipped, elapsed),
        variant="topt",
        params={"t": t},
    )


def iter_threshold_spans(
    pc: PrefixCounts,
    model: Model,
    alpha0: float,
    instrumentation: Instrumentation | None = None,
) -> Iterator[ScoredSpan]:
    """Yield every span scoring strictly above ``alpha0``, in scan order.

    Result sets can be Theta(n^2) large, so this streams; pass an
    :class:`Instrumentation` to collect counters (filled in even if the
    consumer stops early).
    """
    _check_input(pc, model)
    alpha0 = float(alpha0)
    if not math.isfinite(alpha0) or alpha0 < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {alpha0}")

    n = pc.n
    k = pc.k
    cum = pc.cum
    probs = model.probs
    inv_p = model.inv_probs
    one_minus = model.one_minus_probs
    sym = range(k)

    evals = 0
    skipped = 0
    t0 = perf_counter()
    try:
        for i in range(n, 0, -1):
            i1 = i - 1
            base = [row[i1] for row in cum]
            top = n - i1
            l = 1
            while l <= top:
                e = i1 + l
                counts = [cum[c][e] - base[c] for c in sym]
                s = 0.0
                for c in sym:
                    y = counts[c]
                    s += y * y * inv_p[c]
                score = s / l - l
                evals += 1
                if score > alpha0:
                    yield ScoredSpan(i, e, score)
                    x = 0
                else:
                    x = _skip_amount(counts, l, score, alpha0, probs, one_minus)
                    if x:
                        rem = top - l
                        skipped += x if x < rem else rem
                l += x + 1
    finally:
        if instrumentation is not None:
            instrumentation.evaluations = evals
            instrumentation.skipped = skipped
            instrumentation.elapsed = perf_counter() - t0


def scan_threshold(pc: PrefixCounts, model: Model, alpha0: float) -> ScanResult:
    """Collect every span scoring strictly above ``alpha0``."""
    inst = Instrumentation()
    spans = list(iter_threshold_spans(pc, model, alpha0, inst))
    spans.sort(key=_span_order)
    return ScanResult(
        spans=spans,
        instrumentation=inst,
        variant="threshold",
        params={"alpha0": alpha0},
    )


def attach_p_values(result: ScanResult, model: Model) -> ScanResult:
    """Return a copy of ``result`` whose spans carry p-values."""
    spans = [sp._replace(p_value=p_value(sp.score, model.k)) for sp in result.spans]
    return ScanResult(
        spans=spans,
        instrumentation=result.instrumentation,
        variant=result.variant,
        params=dict(result.params),
        seed=result.seed,
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_scan(
    pc: PrefixCounts,
    model: Model,
    variant: str = "mss",
    *,
    t: int | None = None,
    alpha0: float | None = None,
    gamma0: int | None = None,
) -> ScanResult:
    """Evaluate every eligible substring; the reference the scans are checked
    against.

    Scan order and tie-breaking match the pruned variants, and scores are
    accumulated symbol by symbol in the same order, so score comparisons
    against the pruned scans are exact rather than approximate.
    """
    _check_input(pc, model)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    n = pc.n
    k = pc.k

    t0 = perf_counter()
    cum = np.asarray(pc.cum, dtype=np.float64)
    inv_p = model.inv_probs
    lengths = np.arange(0, n + 1, dtype=np.float64)
    acc = np.empty(n, dtype=np.float64)
    tmp = np.empty(n, dtype=np.float64)

    def scores_from(i: int) -> np.ndarray:
        """Scores of substrings (i, i..n); element j is the length-(j+1) span."""
        m = n - i + 1
        a = acc[:m]
        np.subtract(cum[0, i:], cum[0, i - 1], out=a)
        np.multiply(a, a, out=a)
        a *= inv_p[0]
        for c in range(1, k):
            b = tmp[:m]
            np.subtract(cum[c, i:], cum[c, i - 1], out=b)
            np.multiply(b, b, out=b)
            b *= inv_p[c]
            a += b
        ln = lengths[1 : m + 1]
        a /= ln
        a -= ln
        return a

    evals = 0
    params: dict = {}

    if variant in ("mss", "minlen"):
        g = 0
        if variant == "minlen":
            if gamma0 is None:
                raise ValueError("minlen needs gamma0")
            if gamma0 < 0 or gamma0 >= n:
                raise ValueError(
                    f"no substring of length > {gamma0} in a string of length {n}"
                )
            g = gamma0
            params = {"gamma0": gamma0}
        best = -math.inf
        best_span = (0, 0)
        for i in range(n - g, 0, -1):
            a = scores_from(i)[g:]
            evals += len(a)
            j = int(np.argmax(a))
            sc = float(a[j])
            if sc > best:
                best = sc
                best_span = (i, i + g + j)
        spans = [ScoredSpan(best_span[0], best_span[1], best)]

    elif variant == "topt":
        if t is None or t < 1:
            raise ValueError(f"topt needs t >= 1, got {t}")
        params = {"t": t}
        heap = [(0.0, 0, 0)] * t
        for i in range(n, 0, -1):
            a = scores_from(i)
            m = len(a)
            evals += m
            if m > t:
                cand = np.argpartition(a, m - t)[m - t :]
            else:
                cand = range(m)
            for j in cand:
                sc = float(a[j])
                if sc > heap[0][0]:
                    heapq.heapreplace(heap, (sc, i, i + int(j)))
        spans = [ScoredSpan(st, en, sc) for sc, st, en in heap if st > 0]
        spans.sort(key=_span_order)

    else:  # threshold
        if alpha0 is None or not math.isfinite(alpha0) or alpha0 < 0.0:
            raise ValueError(f"threshold needs a finite alpha0 >= 0, got {alpha0}")
        params = {"alpha0": alpha0}
        starts_parts = []
        ends_parts = []
        score_parts = []
        for i in range(n, 0, -1):
            a = scores_from(i)
            evals += len(a)
            js = np.nonzero(a > alpha0)[0]
            if len(js):
                starts_parts.append(np.full(len(js), i, dtype=np.int64))
                ends_parts.append(js + i)
                score_parts.append(a[js].copy())
        if starts_parts:
            starts = np.concatenate(starts_parts)
            ends = np.concatenate(ends_parts)
            scores = np.concatenate(score_parts)
            order = np.lexsort((ends - starts, -starts, -scores))
            spans = [
                ScoredSpan(int(s), int(e), float(sc))
                for s, e, sc in zip(starts[order], ends[order], scores[order])
            ]
        else:
            spans = []

    elapsed = perf_counter() - t0
    return ScanResult(
        spans=spans,
        instrumentation=Instrumentation(evaluations=evals, skipped=0, elapsed=elapsed),
        variant=variant,
        params=params,
    )
