"""Command-line front end: generate, detect, eval, correlate.

Exit codes: 0 on success, 1 for I/O or parse failures, 2 for usage and
validation errors.  All randomness flows from one --seed flag and every
command validates its inputs before writing any output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import detector, metrics, sbm, spectra
from .errors import (
    EdgeListParseError,
    LapanomError,
    UndefinedStatisticError,
    ValidationError,
)
from .graphs import load_snapshots, save_snapshots

DEFAULT_SHORT_WINDOW = 5
DEFAULT_LONG_WINDOW = 10
# Above this many nodes the default detection rank drops to a truncated top-6.
AUTO_RANK_NODE_LIMIT = 500
AUTO_RANK = 6


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    if (args.preset is None) == (args.spec is None):
        raise ValidationError("provide exactly one of --preset or --spec")
    if args.preset is not None:
        spec = sbm.preset_scenario(args.preset, seed=args.seed)
    else:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = sbm.scenario_from_dict(json.load(fh))
        if args.seed is not None:
            spec = sbm.ScenarioSpec(
                segments=spec.segments,
                total_steps=spec.total_steps,
                continuity_rate_normal=spec.continuity_rate_normal,
                continuity_rate_at_change=spec.continuity_rate_at_change,
                seed=args.seed,
            )
    graph, truth = sbm.generate_scenario(spec)
    out = _out_dir(args)
    save_snapshots(graph, out / "snapshots.txt")
    sbm.write_ground_truth(truth, out / "ground_truth.json")
    changes = [t for t, label in truth if label == sbm.LABEL_CHANGE]
    events = [t for t, label in truth if label == sbm.LABEL_EVENT]
    print(
        f"generated {len(graph)} snapshots over {graph.global_node_count} nodes "
        f"-> {out / 'snapshots.txt'}"
    )
    print(f"change points: {changes}")
    print(f"events: {events}")
    return 0


def _parse_rank(value: str):
    if value == "full":
        return "full"
    if value == "auto":
        return "auto"
    try:
        rank = int(value)
    except ValueError:
        raise ValidationError(
            f"--rank must be 'full', 'auto' or a positive integer, got {value!r}"
        ) from None
    if rank < 1:
        raise ValidationError(f"--rank must be >= 1, got {rank}")
    return rank


def _embedding_kind(args, node_count):
    if args.embedding == "activity":
        return spectra.EmbeddingKind.activity()
    rank = _parse_rank(args.rank)
    if rank == "auto":
        rank = "full" if node_count <= AUTO_RANK_NODE_LIMIT else AUTO_RANK
    return spectra.EmbeddingKind.laplacian(None if rank == "full" else rank)


def cmd_detect(args) -> int:
    graph = load_snapshots(args.input, directed=args.directed)
    kind = _embedding_kind(args, graph.global_node_count)
    cfg = detector.DetectorConfig(
        short_window=args.short_window,
        long_window=args.long_window,
        embedding=kind,
    )
    embeddings = spectra.embed_sequence(graph, kind)
    series = detector.score_series(embeddings, cfg)
    out = _out_dir(args)
    spectra.write_embeddings_csv(embeddings, out / "embeddings.csv")
    detector.write_scores_csv(series, out / "scores.csv")
    detector.write_ranked_json(series, out / "ranked.json")
    top = series.top(args.top_n)
    print(
        f"scored {len(series)} snapshots "
        f"(s={cfg.short_window}, l={cfg.long_window}, embedding={kind.kind}, "
        f"rank={'full' if kind.rank is None else kind.rank})"
    )
    print(f"top-{args.top_n} anomalies: {top}")
    print(f"wrote {out / 'scores.csv'}, {out / 'ranked.json'}, {out / 'embeddings.csv'}")
    return 0


def cmd_eval(args) -> int:
    ranked = detector.read_ranked_json(args.ranked)
    truth_entries = sbm.read_ground_truth(args.truth)
    truth = {t for t, _ in truth_entries}
    if not truth:
        raise UndefinedStatisticError(f"{args.truth}: empty ground truth")
    known_times = set(ranked)
    outside = sorted(truth - known_times)
    if outside:
        raise ValidationError(
            f"ground-truth times {outside} fall outside the ranked time range"
        )
    fraction = metrics.hits_at_n(ranked, truth, args.top_n)
    hits = len(set(ranked[: args.top_n]) & truth)
    percent = 100.0 * fraction
    print(f"H@{args.top_n} = {hits}/{len(truth)} ({percent:.4g}%)")
    out = _out_dir(args)
    payload = {
        "n": args.top_n,
        "hits": hits,
        "truth_size": len(truth),
        "hits_at_n": fraction,
    }
    with open(out / "metrics.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_correlate(args) -> int:
    graph = load_snapshots(args.input, directed=args.directed)
    scores = detector.read_scores_csv(args.scores)
    report = metrics.correlation_report(scores["z"], graph, args.window)
    out = _out_dir(args)
    metrics.write_correlation_csv(report, out / "correlation.csv")
    print(metrics.format_correlation_table(report))
    print(f"wrote {out / 'correlation.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapanom",
        description=(
            "Change point and event detection in dynamic graphs via "
            "Laplacian singular spectra."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic labeled scenario")
    gen.add_argument("--preset", choices=sbm.PRESET_NAMES, help="built-in scenario")
    gen.add_argument("--spec", help="scenario spec JSON file")
    gen.add_argument("--seed", type=int, default=None, help="generator seed")
    gen.add_argument("--out", default=".", help="output directory")
    gen.set_defaults(func=cmd_generate)

    det = sub.add_parser("detect", help="score a snapshot edge-list file")
    det.add_argument("--input", required=True, help="edge-list file (t u v [w])")
    det.add_argument("--directed", action="store_true", help="treat edges as directed")
    det.add_argument("--short-window", type=int, default=DEFAULT_SHORT_WINDOW)
    det.add_argument("--long-window", type=int, default=DEFAULT_LONG_WINDOW)
    det.add_argument(
        "--rank",
        default="auto",
        help="spectrum rank: 'full', 'auto' or a positive integer (default auto)",
    )
    det.add_argument(
        "--embedding",
        choices=("laplacian", "activity"),
        default="laplacian",
        help="per-snapshot embedding",
    )
    det.add_argument("--top-n", type=int, default=10, help="anomalies to print")
    det.add_argument("--out", default=".", help="output directory")
    det.set_defaults(func=cmd_detect)

    ev = sub.add_parser("eval", help="Hits@n of a ranking against ground truth")
    ev.add_argument("--ranked", required=True, help="ranked.json from detect")
    ev.add_argument("--truth", required=True, help="ground_truth.json from generate")
    ev.add_argument("--top-n", type=int, default=10)
    ev.add_argument("--out", default=".", help="output directory")
    ev.set_defaults(func=cmd_eval)

    corr = sub.add_parser(
        "correlate", help="rank-correlate scores with graph statistics"
    )
    corr.add_argument("--input", required=True, help="edge-list file (t u v [w])")
    corr.add_argument("--scores", required=True, help="scores.csv from detect")
    corr.add_argument("--directed", action="store_true")
    corr.add_argument(
        "--window",
        type=int,
        default=DEFAULT_SHORT_WINDOW,
        help="moving window for property outliers",
    )
    corr.add_argument("--out", default=".", help="output directory")
    corr.set_defaults(func=cmd_correlate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UndefinedStatisticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EdgeListParseError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LapanomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
