"""Chi-square scoring and the pruning bounds that drive the scans.

The statistic for a substring with count vector {Y_1..Y_k} and length
l = sum(Y_i) under character probabilities {p_1..p_k} is

    X^2 = sum_i (Y_i - l*p_i)^2 / (l*p_i) = sum_i Y_i^2 / (l*p_i) - l

which depends only on the counts, never on character order.  Scores are
dimensionless and nonnegative; a score is 0 exactly when every count matches
its expectation.

Two facts about extending a substring to the right make pruning possible:

* appending the character maximizing Y_j/p_j always strictly increases the
  score (:func:`best_append_char`);
* every extension by exactly ``ext`` characters scores at most the "cover"
  obtained by appending ``ext`` copies of the character maximizing
  (2*Y_j + ext)/p_j (:func:`best_cover_char`, :func:`chain_cover_score`).

Combining the two, extensions by *up to* ``ext`` characters are bounded by
that same cover.  :func:`safe_skip` inverts the bound: given the score of the
current substring and a budget no skipped substring may exceed, it returns
the largest number of extensions that are all provably within budget.  For
each symbol j the cover score stays within budget exactly while the extension
length x satisfies

    (1 - p_j) x^2 + (2*Y_j - 2*l*p_j - p_j*B) x + (score - B) * l * p_j <= 0

an upward parabola that is nonpositive at x = 0 (score <= B), so the
admissible region is [0, root_j] with root_j its positive root.  Taking the
floor of min_j root_j makes every per-symbol cover -- and therefore every
possible extension -- stay within budget.  Solving for all symbols costs O(k)
and sidesteps the chicken-and-egg of choosing the covering character before
knowing the skip length.

All functions are pure; scores are computed fresh from count vectors each
time.  Budgets and scores are plain floats.
"""

import math

from .model import CountVector, Model

__all__ = [
    "chi_square",
    "chain_cover_score",
    "best_append_char",
    "best_cover_char",
    "safe_skip",
]


def chi_square(cv: CountVector, model: Model) -> float:
    """Pearson chi-square score of a count vector against the model.

    Raises ValueError for an empty count vector or a k mismatch.
    """
    counts = cv.counts
    if len(counts) != model.k:
        raise ValueError(f"count vector has {len(counts)} entries, model has k={model.k}")
    length = cv.length
    if length < 1:
        raise ValueError("cannot score an empty count vector")
    inv_p = model.inv_probs
    s = 0.0
    for c in range(len(counts)):
        y = counts[c]
        s += y * y * inv_p[c]
    return s / length - length


def chain_cover_score(cv: CountVector, ch: int, ext: int, model: Model) -> float:
    """Score of the cover string: ``cv`` extended by ``ext`` copies of symbol ``ch``.

    ``ext`` may be 0, in which case this is just ``chi_square(cv)``.
    """
    if not 0 <= ch < model.k:
        raise ValueError(f"symbol index {ch} out of range [0, {model.k})")
    if ext < 0:
        raise ValueError("extension length must be nonnegative")
    counts = list(cv.counts)
    counts[ch] += ext
    return chi_square(CountVector(tuple(counts)), model)


def best_append_char(cv: CountVector, model: Model) -> int:
    """Symbol whose single-character append strictly increases the score.

    Returns argmax_j Y_j/p_j, ties broken toward the lowest index.
    """
    if cv.length < 1:
        raise ValueError("count vector is empty")
    counts = cv.counts
    inv_p = model.inv_probs
    best, best_v = 0, counts[0] * inv_p[0]
    for j in range(1, len(counts)):
        v = counts[j] * inv_p[j]
        if v > best_v:
            best, best_v = j, v
    return best


def best_cover_char(cv: CountVector, ext: int, model: Model) -> int:
    """Symbol whose length-``ext`` cover dominates every length-``ext`` extension.

    Returns argmax_j (2*Y_j + ext)/p_j, ties broken toward the lowest index.
    """
    if cv.length < 1:
        raise ValueError("count vector is empty")
    if ext < 1:
        raise ValueError("extension length must be at least 1")
    counts = cv.counts
    inv_p = model.inv_probs
    best, best_v = 0, (2 * counts[0] + ext) * inv_p[0]
    for j in range(1, len(counts)):
        v = (2 * counts[j] + ext) * inv_p[j]
        if v > best_v:
            best, best_v = j, v
    return best


def safe_skip(cv: CountVector, score: float, budget: float, model: Model) -> int:
    """Largest x such that every extension of 1..x characters scores <= budget.

    ``score`` must be the chi-square score of ``cv`` itself and must not
    exceed ``budget``: skips are only taken from positions that did not beat
    the budget (callers that just raised the budget pass score == budget).
    """
    if len(cv.counts) != model.k:
        raise ValueError(f"count vector has {len(cv.counts)} entries, model has k={model.k}")
    if cv.length < 1:
        raise ValueError("count vector is empty")
    if not math.isfinite(score) or not math.isfinite(budget):
        raise ValueError("score and budget must be finite")
    if budget < 0.0:
        raise ValueError("budget must be nonnegative")
    if score > budget:
        raise ValueError(f"score {score} exceeds budget {budget}; nothing may be skipped")
    return _skip_amount(
        cv.counts, cv.length, score, budget, model.probs, model.one_minus_probs
    )


def _skip_amount(counts, length, score, budget, probs, one_minus_p) -> int:
    """Core skip computation shared with the scan loops (no validation).

    Solves the per-symbol quadratic for its positive root with the
    numerically stable branch, then floors the smallest root.  A relative
    guard of 1e-9 protects against rounding pushing the root high; when the
    guard alone would lose an integer step, the candidate is kept only if it
    verifiably satisfies every per-symbol constraint.
    """
    t2 = 2.0 * length + budget
    gap = (score - budget) * length
    k = len(counts)
    root_min = math.inf
    for j in range(k):
        p = probs[j]
        a = one_minus_p[j]
        b = 2.0 * counts[j] - p * t2
        c = gap * p
        sq = math.sqrt(b * b - 4.0 * a * c)
        r = (sq - b) / (2.0 * a) if b <= 0.0 else (-2.0 * c) / (b + sq)
        if r < root_min:
            root_min = r
    guard = 1e-9 * (root_min if root_min > 1.0 else 1.0)
    x = int(root_min - guard)
    if x < 0:
        return 0
    x_unguarded = int(root_min)
    if x_unguarded > x:
        y = float(x_unguarded)
        for j in range(k):
            p = probs[j]
            b = 2.0 * counts[j] - p * t2
            if one_minus_p[j] * y * y + b * y + gap * p > 0.0:
                return x
        return x_unguarded
    return x
