"""Mining statistically significant substrings under a multinomial null model.

A substring is scored by the Pearson chi-square statistic of its character
counts against a fixed multinomial model; the scans locate high-scoring
substrings while provably skipping candidates that cannot matter, giving
expected O(n^1.5) behaviour instead of the naive O(n^2).
"""

from .model import (
    CountVector,
    EncodedString,
    Model,
    PrefixCounts,
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
from .chisq import (
    best_append_char,
    best_cover_char,
    chain_cover_score,
    chi_square,
    safe_skip,
)
from .scan import (
    Instrumentation,
    ScanResult,
    ScoredSpan,
    attach_p_values,
    brute_force_scan,
    iter_threshold_spans,
    scan_min_length,
    scan_mss,
    scan_threshold,
    scan_top_t,
)
from .stats import SlopeFit, chi2_cdf, fit_loglog_slope, p_value
from .synth import (
    GeneratorSpec,
    generate,
    geometric_probs,
    harmonic_probs,
    markov_transition,
    write_generated,
)

__version__ = "0.1.0"

__all__ = [
    "Model",
    "EncodedString",
    "PrefixCounts",
    "CountVector",
    "build_model",
    "uniform_model",
    "encode_string",
    "decode_string",
    "build_prefix_counts",
    "count_vector",
    "read_model_file",
    "write_model_file",
    "read_string_file",
    "write_string_file",
    "chi_square",
    "chain_cover_score",
    "best_append_char",
    "best_cover_char",
    "safe_skip",
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
    "chi2_cdf",
    "p_value",
    "SlopeFit",
    "fit_loglog_slope",
    "GeneratorSpec",
    "generate",
    "geometric_probs",
    "harmonic_probs",
    "markov_transition",
    "write_generated",
    "__version__",
]
