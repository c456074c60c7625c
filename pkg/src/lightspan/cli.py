"""Command-line entry point: construct, verify, stream, generate, bench.

Exit codes: 0 success, 1 stretch violations found, 2 bad parameters or input.
"""

from __future__ import annotations

import argparse
import hashlib
import statistics
import sys
import time

from . import stats as statsfile
from .blackbox import greedy_spanner
from .graph import (
    GeneratorError,
    GeneratorSpec,
    GraphFormatError,
    WeightedGraph,
    generate,
    read_graph,
    serialize_graph,
    write_graph,
)
from .lightsp import VARIANTS, ParameterError, SpannerResult, check_parameters, construct, epsilon_to_q
from .mst import DisconnectedGraphError, build_backbone, build_mst
from .streamsim import run_stream
from .verify import ALL_PAIRS_LIMIT, match_edges, measure, verify_all_pairs, verify_hop_stretch, verify_stretch

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_graph(args) -> tuple[WeightedGraph, str]:
    if args.input:
        return read_graph(args.input), args.input
    spec = GeneratorSpec.parse(args.gen)
    seed = args.seed if args.gen_seed is None else args.gen_seed
    return generate(spec, seed), f"{spec}@{seed}"


def _resolve_q(args) -> tuple[float, dict]:
    info: dict = {}
    if args.epsilon is not None:
        q, clamped = epsilon_to_q(args.epsilon, args.k)
        info = {"epsilon": args.epsilon, "q_from_epsilon": "3/epsilon", "q_clamped": clamped}
    else:
        q = args.q
    check_parameters(args.k, q, args.rho)
    return q, info


def _backbone_section(order, length: float, tree_weight: float) -> dict:
    digest = hashlib.sha256(",".join(map(str, order)).encode()).hexdigest()[:16]
    return {"path_length": length, "tree_weight": tree_weight, "order_digest": digest}


def result_stats(result: SpannerResult, source: str, extra: dict, timings: bool) -> dict:
    data = {
        "graph": {"source": source, "n": result.n, "m": result.m},
        "params": {"k": result.k, "q": result.q, "rho": result.rho, "variant": result.variant,
                   "seed": result.seed, **extra},
        "result": {
            "edges": result.size,
            "weight": result.total_weight,
            "mst_weight": result.mst_weight,
            "lightness": result.lightness,
            "declared_stretch": result.declared_stretch,
            "levels": result.levels,
            "discarded": result.discarded,
        },
        "level": {
            str(s.level): {
                "bucket": s.bucket_size, "crossing": s.crossing, "aux_edges": s.aux_edges,
                "kept": s.kept, "weight": s.weight, "representatives": s.representatives,
            }
            for s in result.level_stats
        },
    }
    if timings:
        data["timing"] = dict(result.timings)
    return data


def _emit_stats(args, data: dict) -> None:
    text = statsfile.dumps(data)
    if args.stats:
        with open(args.stats, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_spanner(g: WeightedGraph, refs, path) -> None:
    write_graph(g.subgraph(refs), path)


def cmd_construct(args) -> int:
    g, source = _load_graph(args)
    q, info = _resolve_q(args)
    result = construct(g, args.k, q, args.rho, args.variant, args.seed)
    data = {"command": "construct", **result_stats(result, source, info, args.timings)}
    if g.n >= 2:
        simple, _ = g.simplify()
        bb = build_backbone(simple, build_mst(simple))
        data["backbone"] = _backbone_section(bb.order, bb.length, bb.tree_weight)
    if args.out:
        _write_spanner(g, result.edges, args.out)
    _emit_stats(args, data)
    return EXIT_OK


def cmd_stream(args) -> int:
    g, source = _load_graph(args)
    q, info = _resolve_q(args)
    run = run_stream(g, args.k, q, args.rho, args.seed)
    data = {"command": "stream", **result_stats(run.spanner, source, info, args.timings)}
    data["backbone"] = _backbone_section(run.backbone.order, run.backbone.length, run.backbone.tree_weight)
    data["stream"] = {
        "pass_count": run.pass_count,
        "sort_passes": 1,
        "data_passes": run.pass_count - 1,
        "touches_pass2": run.touches_pass2,
        "skipped_internal": run.skipped_internal,
        "forwarded": run.forwarded,
        "resident_edges": run.resident_edges,
        "peak_resident_edges": run.peak_resident_edges,
        "bookkeeping_words": run.bookkeeping_words,
        "memory_words": run.memory_words,
        "memory_unit": "edges+words (model proxy)",
        "hop_stretch_bound": run.hop_stretch_bound,
        "weighted_stretch_bound": run.weighted_stretch_bound,
        "pass1": {
            "unions": run.pass1.unions,
            "rejected": run.pass1.rejected,
            "finds": run.pass1.finds,
            "find_steps": run.pass1.find_steps,
            "steps_per_edge": run.pass1.steps_per_edge,
        },
    }
    if args.out:
        _write_spanner(g, run.spanner.edges, args.out)
    _emit_stats(args, data)
    return EXIT_OK


def cmd_verify(args) -> int:
    g, source = _load_graph(args)
    refs = match_edges(g, read_graph(args.spanner))
    if args.hops:
        report = verify_hop_stretch(g, refs, args.k)
    else:
        if args.bound is not None:
            bound = args.bound
        elif args.from_stats:
            bound = float(statsfile.read(args.from_stats)["result.declared_stretch"])
        else:
            raise UsageError("verify needs --bound, --from-stats or --hops")
        if args.all_pairs:
            if g.n > ALL_PAIRS_LIMIT:
                raise UsageError(f"--all-pairs is limited to n <= {ALL_PAIRS_LIMIT}")
            report = verify_all_pairs(g, refs, bound)
        else:
            report = verify_stretch(g, refs, bound)
    data = {
        "command": "verify",
        "graph": {"source": source, "n": g.n, "m": g.m},
        "verify": {
            "mode": "hops" if args.hops else ("all-pairs" if args.all_pairs else "edges"),
            "bound": report.bound,
            "max_observed_stretch": report.max_observed_stretch,
            "violations": len(report.violations),
            "borderline": len(report.borderline),
            "edge_count": report.edge_count,
            "total_weight": report.total_weight,
            "lightness": report.lightness,
            "checked": report.checked,
        },
    }
    for n, (ref, observed, bound) in enumerate(report.violations[:20]):
        data["verify"][f"violation.{n}"] = f"{ref} {observed!r} {bound!r}"
    _emit_stats(args, data)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_generate(args) -> int:
    if not args.gen:
        raise UsageError("generate needs --gen SPEC")
    g = generate(GeneratorSpec.parse(args.gen), args.seed)
    if args.out:
        write_graph(g, args.out)
    else:
        sys.stdout.write(serialize_graph(g))
    return EXIT_OK


BENCH_COLUMNS = (
    "n", "m", "k", "q", "rho", "variant", "seed", "edges", "weight", "lightness",
    "max_stretch", "declared_stretch", "time_mst", "time_backbone", "time_levels", "time_total",
)


def bench_rows(sizes, m_factor: int, k: int, q: float, rho: float, variants, seeds: int,
               greedy: bool = False, check_stretch: bool = False, model: str = "uniform"):
    """One row per (size, variant, seed); greedy rows use t = the variant's declared stretch."""
    rows = []
    for n in sizes:
        for seed in range(seeds):
            spec = _bench_spec(model, n, m_factor)
            g = generate(spec, seed)
            for variant in variants:
                result = construct(g, k, q, rho, variant, seed)
                row = _bench_row(g, k, q, rho, variant, seed, result.edges, result.declared_stretch,
                                 result.timings, check_stretch)
                row["lightness_recomputed"] = measure(g, result.edges)[2]
                rows.append(row)
                if greedy:
                    t0 = time.perf_counter()
                    refs = greedy_spanner(g, result.declared_stretch)
                    elapsed = time.perf_counter() - t0
                    rows.append(_bench_row(g, k, q, rho, f"greedy@{variant}", seed, refs,
                                           result.declared_stretch, {"total": elapsed}, check_stretch))
    return rows


def _bench_spec(model: str, n: int, m_factor: int) -> GeneratorSpec:
    if model == "uniform":
        return GeneratorSpec("uniform", {"n": n, "m": min(m_factor * n, n * (n - 1) // 2), "wmin": 1.0, "wmax": 100.0})
    if model == "geometric":
        # expected degree ~ 2 * m_factor in the unit square
        radius = (2 * m_factor / (3.14159 * n)) ** 0.5
        return GeneratorSpec("geometric", {"n": n, "radius": radius})
    raise UsageError(f"bench supports models uniform and geometric, not {model!r}")


def _bench_row(g, k, q, rho, variant, seed, refs, declared, timings, check_stretch) -> dict:
    count, weight, lightness = measure(g, refs)
    max_stretch = verify_stretch(g, refs, declared).max_observed_stretch if check_stretch else float("nan")
    return {
        "n": g.n, "m": g.m, "k": k, "q": q, "rho": rho, "variant": variant, "seed": seed,
        "edges": count, "weight": weight, "lightness": lightness, "max_stretch": max_stretch,
        "declared_stretch": declared,
        "time_mst": timings.get("mst", float("nan")),
        "time_backbone": timings.get("backbone", float("nan")),
        "time_levels": timings.get("levels", float("nan")),
        "time_total": timings.get("total", float("nan")),
    }


def format_table(rows) -> str:
    lines = ["\t".join(BENCH_COLUMNS)]
    for row in rows:
        cells = []
        for col in BENCH_COLUMNS:
            v = row[col]
            cells.append(f"{v:.6g}" if isinstance(v, float) else str(v))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    variants = [v for v in args.variants.split(",") if v]
    for v in variants:
        if v not in VARIANTS:
            raise UsageError(f"unknown variant {v!r}")
    q, _ = _resolve_q(args)
    rows = bench_rows(sizes, args.m_factor, args.k, q, args.rho, variants, args.seeds,
                      greedy=args.greedy, check_stretch=args.check_stretch, model=args.model)
    table = format_table(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)
    if len(sizes) > 1:
        # median construction time per size, for eyeballing the doubling ratio
        for variant in variants:
            med = [statistics.median(r["time_total"] for r in rows if r["n"] == n and r["variant"] == variant)
                   for n in sizes]
            ratios = " ".join(f"{b / a:.2f}" for a, b in zip(med, med[1:]))
            print(f"# {variant}: time ratio per size step: {ratios}", file=sys.stderr)
    return EXIT_OK


def _add_graph_source(p, required: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--input", metavar="PATH", help="edge-list graph file")
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. uniform:n=100,m=400")
    p.add_argument("--gen-seed", type=int, default=None, help="generator seed (default: --seed)")


def _add_params(p) -> None:
    p.add_argument("--k", type=int, default=2, help="stretch parameter k >= 2 (default 2)")
    qe = p.add_mutually_exclusive_group()
    qe.add_argument("--q", type=float, default=None, help="interval parameter, 1/(2k-1) < q < k")
    qe.add_argument("--epsilon", type=float, default=None, help="stretch slack; q = 3/epsilon, clamped")
    p.add_argument("--rho", type=float, default=2.0, help="bucket ratio in (1, 2] (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lightspan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a light spanner")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--variant", choices=VARIANTS, default="basic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="write the spanner as an edge list")
    p.add_argument("--stats", metavar="PATH", help="write stats here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in stats")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("stream", help="simulate the sort + two-pass streaming construction")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--stats", metavar="PATH")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("verify", help="check a spanner's stretch exactly")
    _add_graph_source(p)
    p.add_argument("--spanner", metavar="PATH", required=True, help="spanner edge-list file")
    p.add_argument("--bound", type=float, default=None, help="stretch bound to check")
    p.add_argument("--from-stats", metavar="PATH", help="read the bound from a construct/stream stats file")
    p.add_argument("--hops", action="store_true", help="check hop stretch 2k-1 instead")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--all-pairs", action="store_true", help=f"check all vertex pairs (n <= {ALL_PAIRS_LIMIT})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stats", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a generated graph")
    p.add_argument("--gen", metavar="SPEC", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="size sweep table")
    _add_params(p)
    p.add_argument("--sizes", default="1024,2048,4096,8192")
    p.add_argument("--m-factor", type=int, default=8, help="m = factor * n (default 8)")
    p.add_argument("--model", default="uniform", choices=("uniform", "geometric"))
    p.add_argument("--variants", default="basic", help="comma-separated variants")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--greedy", action="store_true", help="add greedy baseline rows")
    p.add_argument("--check-stretch", action="store_true", help="measure max stretch (slower)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_bench, k=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "q", None) is None and getattr(args, "epsilon", None) is None and hasattr(args, "q"):
        args.q = _default_q(args.k)
    try:
        return args.func(args)
    except (UsageError, ParameterError, GraphFormatError, GeneratorError, DisconnectedGraphError, ValueError,
            OSError) as exc:
        print(f"lightspan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _default_q(k: int) -> float:
    # largest integer strictly inside the window, at least 1
    return float(max(1, k - 1))


if __name__ == "__main__":
    sys.exit(main())
