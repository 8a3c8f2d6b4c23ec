"""Operator command line: build, inspect, analyze, simulate, select, serve.

Every subcommand maps onto one module's operations and emits either a
human-readable table or, with --json, stable JSON (sorted keys) suitable
for golden files. Stochastic subcommands require an explicit --seed so runs
are reproducible by construction. Exit codes: 0 success, 1 operation error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from typing import Any, Sequence

from . import alpha as alpha_mod
from . import datasets, models, quality, tlc
from .errors import FacetnavError, KeystrokeRejected
from .ingest import build_from_jsonl
from .snapshot import load as snapshot_load
from .snapshot import save as snapshot_save


def _emit(payload: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
        return
    width = max(len(k) for k in payload)
    for key, value in payload.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{key:<{width}}  {value}")


def cmd_build(args: argparse.Namespace) -> int:
    index = build_from_jsonl(args.input, any_groups=args.any_group)
    digest = snapshot_save(index, args.output)
    _emit(
        {
            "categories": index.n,
            "items": index.N,
            "links": index.link_count,
            "snapshot": str(args.output),
            "fingerprint": digest,
        },
        args.json,
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    index = snapshot_load(args.snapshot)
    _emit(index.stats().as_dict(), args.json)
    return 0


def cmd_quality(args: argparse.Namespace) -> int:
    index = snapshot_load(args.snapshot)
    inference = quality.inference_sets(index)
    synonyms = quality.synonym_sets(index)
    gran = quality.granularity(index)
    report = quality.flag_badly_categorized(
        index, q_threshold=args.q_threshold, g_threshold=args.g_threshold
    )
    flagged = list(report.flagged)
    payload = {
        "max_inference_count": inference.max_count,
        "mean_inference_count": inference.mean,
        "std_inference_count": inference.std,
        "duplicate_item_classes": sum(
            1 for cls in inference.classes if len(cls) > 1
        ),
        "synonym_classes": sum(1 for cls in synonyms.classes if len(cls) > 1),
        "max_granularity": max(gran.values()),
        "q_threshold": args.q_threshold,
        "g_threshold": args.g_threshold,
        "flagged_count": len(flagged),
        "flagged": flagged[:50],
    }
    _emit(payload, args.json)
    return 0


def cmd_cooccur(args: argparse.Namespace) -> int:
    index = snapshot_load(args.snapshot)
    report = quality.cooccurrence_stats(index)
    payload = report.as_dict()
    if args.brute_force:
        payload["brute_mean_shared_cats"] = quality.pairwise_shared_cats_mean(index)
        payload["brute_mean_shared_items"] = quality.pairwise_shared_items_mean(index)
    _emit(payload, args.json)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    params = models.ModelParams(
        item_count=args.N,
        category_count=args.n,
        max_cats_per_item=args.cmax,
        min_cats_per_item=args.cmin,
        profile=args.profile,
        seed=args.seed,
    )
    prediction = models.predict(params)
    report = models.monte_carlo(params, trials=args.trials, walks_per_trial=args.walks)
    payload = report.as_dict()
    payload["mean_cats_per_item_model"] = prediction.mean_cats_per_item
    payload["variance_cats_per_item_model"] = prediction.variance_cats_per_item
    _emit(payload, args.json)
    return 0


def cmd_tlc(args: argparse.Namespace) -> int:
    index = snapshot_load(args.snapshot)
    scores = tlc.relevance_scores(index)
    config = tlc.TlcConfig(
        seed_size=args.seed_size,
        residual_threshold=args.residual_threshold,
        pool_multiplier=args.pool_multiplier,
    )
    head, tail, audit = tlc.select_tlc(index, scores, config)
    payload = {
        "head_size": len(head),
        "tail_size": len(tail),
        "complete": audit.complete,
        "uncovered_count": len(audit.uncovered),
        "head": [
            {"cat": c, "name": index.category_names[c], "score": int(scores[c])}
            for c in audit.selection_order[:50]
        ],
    }
    _emit(payload, args.json)
    return 0


def cmd_typeahead_bench(args: argparse.Namespace) -> int:
    import random

    names = datasets.personal_names(args.count, seed=args.seed)
    index = alpha_mod.build_alpha_index(names, args.mode)
    rng = random.Random(args.seed)
    counts: list[int] = []
    rejected = 0
    for _ in range(args.samples):
        name = names[rng.randrange(len(names))].lower()
        distinct: list[str] = []
        for ch in name:
            if ch not in distinct:
                distinct.append(ch)
        state = index.start()
        for ch in distinct[: args.keys]:
            try:
                state, _ = alpha_mod.type_key(index, state, ch)
            except KeystrokeRejected:
                rejected += 1
        counts.append(state.candidate_count)
    counts.sort()
    payload = {
        "names": args.count,
        "samples": args.samples,
        "keys": args.keys,
        "mode": args.mode,
        "median_candidates": statistics.median(counts),
        "mean_candidates": statistics.fmean(counts),
        "p90_candidates": counts[int(0.9 * (len(counts) - 1))],
        "max_candidates": counts[-1],
        "rejected_keystrokes": rejected,
    }
    _emit(payload, args.json)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    index = snapshot_load(args.snapshot)
    if args.shards > 1:
        app = create_app(shards=index.shard(args.shards), use_cache=not args.no_cache)
    else:
        app = create_app(index=index, use_cache=not args.no_cache)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="facetnav",
        description="Guided faceted navigation over an association index.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("build", help="build a snapshot from JSONL")
    p.add_argument("input", help="JSONL file of {name, categories}")
    p.add_argument("-o", "--output", required=True, help="snapshot path")
    p.add_argument(
        "--any-group",
        action="append",
        default=[],
        metavar="GROUP",
        help="treat GROUP as OR instead of AND (repeatable)",
    )
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", help="degree statistics of a snapshot")
    p.add_argument("snapshot")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("quality", help="categorization-quality report")
    p.add_argument("snapshot")
    p.add_argument("--q-threshold", type=int, default=20)
    p.add_argument("--g-threshold", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("cooccur", help="co-occurrence statistics")
    p.add_argument("snapshot")
    p.add_argument(
        "--brute-force",
        action="store_true",
        help="also materialize pair tables (size-guarded)",
    )
    common(p)
    p.set_defaults(func=cmd_cooccur)

    p = sub.add_parser("simulate", help="Monte Carlo vs closed-form predictions")
    p.add_argument("--N", type=int, required=True, help="item count")
    p.add_argument("--n", type=int, required=True, help="category count")
    p.add_argument("--cmax", type=int, required=True, help="max categories per item")
    p.add_argument("--cmin", type=int, required=True, help="min categories per item")
    p.add_argument(
        "--profile", choices=models.PROFILES, default=models.LINEAR
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--walks", type=int, default=64)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tlc", help="top-level category selection")
    p.add_argument("snapshot")
    p.add_argument("--seed-size", type=int, default=tlc.SEED_SIZE)
    p.add_argument(
        "--residual-threshold", type=int, default=tlc.RESIDUAL_THRESHOLD
    )
    p.add_argument("--pool-multiplier", type=int, default=tlc.POOL_MULTIPLIER)
    common(p)
    p.set_defaults(func=cmd_tlc)

    p = sub.add_parser(
        "typeahead-bench", help="candidate-count distribution for typing"
    )
    p.add_argument("--count", type=int, default=60000, help="names to generate")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--keys", type=int, default=5, help="distinct keys to type")
    p.add_argument(
        "--mode",
        choices=alpha_mod.MODES,
        default=alpha_mod.POSITION_INDEPENDENT,
    )
    p.add_argument("--seed", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_typeahead_bench)

    p = sub.add_parser("serve", help="serve a snapshot over HTTP")
    p.add_argument("snapshot")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8300)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except FacetnavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
