"""Command-line interface: scans, generators, series encoding, benchmarks.

Subcommands
-----------
scan    score a string file against a model and emit result spans as CSV
gen     write a synthetic string file plus its reproducibility metadata
encode  turn a single-column numeric CSV into an up/down binary string
bench   run seeded scan benchmarks over a size grid and report a log-log slope
pvalue  convert a chi-square score to its p-value

All CSV output uses ',' separators, '\\n' line endings and '.' decimal points
regardless of locale; floats are written with repr so they parse back exactly.
Exit codes: 0 success, 1 usage error, 2 data/validation error.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

from .model import (
    Model,
    build_model,
    build_prefix_counts,
    encode_string,
    read_model_file,
)
from .scan import (
    Instrumentation,
    ScanResult,
    VARIANTS,
    brute_force_scan,
    iter_threshold_spans,
    scan_min_length,
    scan_mss,
    scan_threshold,
    scan_top_t,
)
from .stats import fit_loglog_slope, p_value
from .synth import KINDS, PRNG_NAME, GeneratorSpec, generate, write_generated

__all__ = ["main", "encode_updown", "BenchConfig", "BenchRow", "run_bench", "iter_bench_rows"]


class _UsageError(Exception):
    pass


def encode_updown(series) -> str:
    """Encode a numeric series as '1' per rise and '0' per tie or fall.

    The output has one character per consecutive pair, so it is one shorter
    than the input.
    """
    series = list(series)
    if len(series) < 2:
        raise ValueError(f"need at least 2 points to encode, got {len(series)}")
    for v in series:
        if not math.isfinite(v):
            raise ValueError(f"series contains a non-finite value: {v!r}")
    return "".join(
        "1" if b > a else "0" for a, b in zip(series, series[1:])
    )


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    """One benchmark campaign: a generator template run over a size grid."""

    sizes: tuple[int, ...]
    trials: int
    kind: str = "null"
    k: int = 2
    p: float | None = None
    model: Model | None = None
    variant: str = "mss"
    t: int | None = None
    alpha0: float | None = None
    gamma0: int | None = None
    oracle: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ValueError("sizes must be a nonempty list of positive lengths")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class BenchRow:
    n: int
    k: int
    trial: int
    evaluations: int
    chi2_max: float
    elapsed_seconds: float
    seed: int


def _derived_seed(base: int, size_index: int, trial: int) -> int:
    ss = np.random.SeedSequence((base, size_index, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_variant(pc, model, variant, *, t=None, alpha0=None, gamma0=None, oracle=False) -> ScanResult:
    if oracle:
        return brute_force_scan(pc, model, variant, t=t, alpha0=alpha0, gamma0=gamma0)
    if variant == "mss":
        return scan_mss(pc, model)
    if variant == "topt":
        if t is None:
            raise ValueError("topt needs t")
        return scan_top_t(pc, model, t)
    if variant == "threshold":
        if alpha0 is None:
            raise ValueError("threshold needs alpha0")
        return scan_threshold(pc, model, alpha0)
    if gamma0 is None:
        raise ValueError("minlen needs gamma0")
    return scan_min_length(pc, model, gamma0)


def iter_bench_rows(config: BenchConfig) -> Iterator[BenchRow]:
    for si, n in enumerate(config.sizes):
        for trial in range(config.trials):
            seed = _derived_seed(config.seed, si, trial)
            spec = GeneratorSpec(
                kind=config.kind,
                n=n,
                k=config.k,
                p=config.p,
                model=config.model,
                seed=seed,
            )
            s, model = generate(spec)
            pc = build_prefix_counts(s)
            result = _run_variant(
                pc,
                model,
                config.variant,
                t=config.t,
                alpha0=config.alpha0,
                gamma0=config.gamma0,
                oracle=config.oracle,
            )
            result.seed = seed
            chi2_max = result.spans[0].score if result.spans else 0.0
            yield BenchRow(
                n=n,
                k=config.k,
                trial=trial,
                evaluations=result.instrumentation.evaluations,
                chi2_max=chi2_max,
                elapsed_seconds=result.instrumentation.elapsed,
                seed=seed,
            )


def run_bench(config: BenchConfig, sink: TextIO) -> None:
    """Write benchmark rows as CSV plus a fitted log-log slope footer."""
    sink.write(
        f"# prng={PRNG_NAME} base_seed={config.seed} kind={config.kind}"
        f" variant={config.variant} oracle={config.oracle}\n"
    )
    sink.write("n,k,trial,evaluations,chi2_max,elapsed_seconds,seed\n")
    sums: dict[int, int] = {}
    counts: dict[int, int] = {}
    for row in iter_bench_rows(config):
        sink.write(
            f"{row.n},{row.k},{row.trial},{row.evaluations},{row.chi2_max!r},"
            f"{row.elapsed_seconds!r},{row.seed}\n"
        )
        sums[row.n] = sums.get(row.n, 0) + row.evaluations
        counts[row.n] = counts.get(row.n, 0) + 1
    means = [(n, sums[n] / counts[n]) for n in sorted(sums)]
    if len(means) >= 2:
        fit = fit_loglog_slope(means)
        sink.write(f"# slope={fit.slope!r} intercept={fit.intercept!r} points={fit.points}\n")
    else:
        sink.write("# slope=NA (need at least 2 sizes)\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _empirical_model(text: str) -> Model:
    """Model whose probabilities are the observed character frequencies.

    Estimating the null from the very data being scanned is circular; this
    mirrors common practice for up/down series but inflates apparent
    significance, so it is opt-in via ``--model empirical``.
    """
    if not text:
        raise ValueError("cannot build an empirical model from an empty string")
    symbols = sorted(set(text))
    if len(symbols) < 2:
        raise ValueError("empirical model needs at least 2 distinct characters")
    total = len(text)
    return build_model(symbols, [text.count(sym) / total for sym in symbols])


def _scan_params(args) -> dict:
    if args.mode == "topt":
        if args.t is None:
            raise _UsageError("--mode topt requires --t")
        return {"t": args.t}
    if args.mode == "threshold":
        if args.alpha is None:
            raise _UsageError("--mode threshold requires --alpha")
        return {"alpha0": args.alpha}
    if args.mode == "minlen":
        if args.gamma is None:
            raise _UsageError("--mode minlen requires --gamma")
        return {"gamma0": args.gamma}
    return {}


def _open_sink(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _cmd_scan(args) -> int:
    params = _scan_params(args)
    raw = Path(args.input).read_text(encoding="utf-8").rstrip("\r\n")
    if args.model == "empirical":
        model = _empirical_model(raw)
    else:
        model = read_model_file(args.model)
    s = encode_string(raw, model)
    pc = build_prefix_counts(s)
    k = model.k

    sink, owned = _open_sink(args.out)
    try:
        sink.write("start,end,length,chi2,p_value\n")
        if args.mode == "threshold" and not args.oracle:
            # Threshold results can be Theta(n^2); stream them in scan order
            # instead of buffering to sort.
            inst = Instrumentation()
            for sp in iter_threshold_spans(pc, model, params["alpha0"], inst):
                pv = p_value(sp.score, k)
                sink.write(f"{sp.start},{sp.end},{sp.length},{sp.score!r},{pv!r}\n")
        else:
            result = _run_variant(pc, model, args.mode, oracle=args.oracle, **params)
            inst = result.instrumentation
            rows = sorted(result.spans, key=lambda sp: (-sp.score, sp.start, sp.length))
            for sp in rows:
                pv = p_value(sp.score, k)
                sink.write(f"{sp.start},{sp.end},{sp.length},{sp.score!r},{pv!r}\n")
        if args.stats:
            sink.write(
                f"# evaluations={inst.evaluations} skipped={inst.skipped}"
                f" elapsed={inst.elapsed:.6f}\n"
            )
    finally:
        if owned:
            sink.close()
    return 0


def _cmd_gen(args) -> int:
    model = read_model_file(args.model) if args.model else None
    k = model.k if model is not None else args.k
    spec = GeneratorSpec(
        kind=args.kind, n=args.n, k=k, p=args.p, model=model, seed=args.seed
    )
    s, scan_model = generate(spec)
    write_generated(args.out, s, scan_model, spec)
    return 0


def _read_series(path) -> list[float]:
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path} is empty")
    start = 0
    try:
        float(lines[0])
    except ValueError:
        start = 1  # header line
    series = []
    for ln in lines[start:]:
        try:
            series.append(float(ln))
        except ValueError:
            raise ValueError(f"non-numeric series value {ln!r} in {path}") from None
    return series


def _cmd_encode(args) -> int:
    text = encode_updown(_read_series(args.input))
    sink, owned = _open_sink(args.out)
    try:
        sink.write(text + "\n")
    finally:
        if owned:
            sink.close()
    return 0


def _cmd_bench(args) -> int:
    params = {}
    if args.mode == "topt":
        if args.t is None:
            raise _UsageError("--mode topt requires --t")
        params["t"] = args.t
    elif args.mode == "threshold":
        if args.alpha is None:
            raise _UsageError("--mode threshold requires --alpha")
        params["alpha0"] = args.alpha
    elif args.mode == "minlen":
        if args.gamma is None:
            raise _UsageError("--mode minlen requires --gamma")
        params["gamma0"] = args.gamma
    try:
        sizes = tuple(int(tok) for tok in args.sizes.split(",") if tok)
    except ValueError:
        raise _UsageError(f"--sizes expects comma-separated integers, got {args.sizes!r}")
    model = read_model_file(args.model) if args.model else None
    config = BenchConfig(
        sizes=sizes,
        trials=args.trials,
        kind=args.kind,
        k=model.k if model is not None else args.k,
        p=args.p,
        model=model,
        variant=args.mode,
        oracle=args.oracle,
        seed=args.seed,
        **params,
    )
    sink, owned = _open_sink(args.out)
    try:
        run_bench(config, sink)
    finally:
        if owned:
            sink.close()
    return 0


def _cmd_pvalue(args) -> int:
    print(repr(p_value(args.chi2, args.k)))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="chisqmine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_scan = sub.add_parser("scan", help="mine significant substrings of a string file")
    p_scan.add_argument("--model", required=True,
                        help="model file, or 'empirical' to estimate character "
                             "frequencies from the input itself")
    p_scan.add_argument("--input", required=True, help="string file")
    p_scan.add_argument("--mode", required=True, choices=VARIANTS)
    p_scan.add_argument("--t", type=int, help="number of top substrings (topt)")
    p_scan.add_argument("--alpha", type=float, help="score threshold (threshold)")
    p_scan.add_argument("--gamma", type=int, help="length floor (minlen)")
    p_scan.add_argument("--oracle", action="store_true", help="use the brute-force scan")
    p_scan.add_argument("--stats", action="store_true",
                        help="append an instrumentation summary line prefixed '#'")
    p_scan.add_argument("--out", help="write CSV here instead of stdout")
    p_scan.set_defaults(func=_cmd_scan)

    p_gen = sub.add_parser("gen", help="generate a synthetic string file")
    p_gen.add_argument("--kind", required=True, choices=KINDS)
    p_gen.add_argument("--n", required=True, type=int, help="string length")
    p_gen.add_argument("--k", type=int, default=2, help="alphabet size (default 2)")
    p_gen.add_argument("--p", type=float,
                       help="repeat probability in (0,1) (biased_binary only)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--model", help="explicit model file (kind=null only)")
    p_gen.add_argument("--out", required=True,
                       help="output string file; metadata goes to <out>.meta.json")
    p_gen.set_defaults(func=_cmd_gen)

    p_enc = sub.add_parser("encode", help="encode a numeric series as an up/down string")
    p_enc.add_argument("--input", required=True,
                       help="single-column CSV; a non-numeric first line is "
                            "treated as a header")
    p_enc.add_argument("--out", help="write the string here instead of stdout")
    p_enc.set_defaults(func=_cmd_encode)

    p_bench = sub.add_parser("bench", help="benchmark scans over a grid of sizes")
    p_bench.add_argument("--sizes", required=True, help="comma-separated string lengths")
    p_bench.add_argument("--trials", type=int, default=1, help="trials per size")
    p_bench.add_argument("--kind", default="null", choices=KINDS)
    p_bench.add_argument("--k", type=int, default=2)
    p_bench.add_argument("--p", type=float, help="biased_binary repeat probability")
    p_bench.add_argument("--model", help="explicit model file (kind=null only)")
    p_bench.add_argument("--mode", default="mss", choices=VARIANTS)
    p_bench.add_argument("--t", type=int)
    p_bench.add_argument("--alpha", type=float)
    p_bench.add_argument("--gamma", type=int)
    p_bench.add_argument("--oracle", action="store_true")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", help="write CSV here instead of stdout")
    p_bench.set_defaults(func=_cmd_bench)

    p_pv = sub.add_parser("pvalue", help="p-value of a chi-square score")
    p_pv.add_argument("--chi2", required=True, type=float)
    p_pv.add_argument("--k", required=True, type=int, help="alphabet size")
    p_pv.set_defaults(func=_cmd_pvalue)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # Downstream consumer (e.g. `head`) closed the pipe; not an error.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    except (OSError, ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
