"""Command-line driver: cluster, generate, bench.

Exit codes: 0 success, 1 usage error, 2 input-data error, 3 numeric
failure. Reported runtimes cover the clustering pipeline only, excluding
file I/O.
"""

from __future__ import annotations

import argparse
import sys
import time
from contextlib import nullcontext

import numpy as np

from .datagen import er_bipartite, planted_bipartite, write_labels_tsv
from .errors import DataError, NumericError, ParameterError
from .graph import BipartiteGraph, load_graph, write_edge_tsv
from .hope import Clustering, hope
from .hopeplus import hopeplus
from .metrics import LabelSet, MetricsReport, load_labels

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

ALGORITHMS = ("hope", "hope-fnem", "hope-snem")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageExit(message)


class _UsageExit(Exception):
    pass


def _thread_limit(threads: int | None):
    if threads is None:
        return nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        print("warning: threadpoolctl not installed; --threads ignored",
              file=sys.stderr)
        return nullcontext()
    return threadpool_limits(limits=threads)


def _run_algorithm(
    graph: BipartiteGraph,
    algorithm: str,
    k: int,
    alpha: float,
    beta: int,
    iters: int,
    seed: int,
) -> tuple[Clustering, float]:
    start = time.perf_counter()
    if algorithm == "hope":
        result = hope(graph, k=k, alpha=alpha, beta=beta, seed=seed,
                      max_iters=iters)
    else:
        mode = algorithm.split("-", 1)[1]
        result = hopeplus(graph, k=k, alpha=alpha, beta=beta, mode=mode,
                          max_iters=iters, seed=seed)
    return result, time.perf_counter() - start


def _add_algorithm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--alpha", type=float, default=0.3,
                   help="walk decay factor in (0, 1)")
    p.add_argument("--beta", type=int, default=None,
                   help="embedding dimensionality (default 5*k, clamped)")
    p.add_argument("--iters", type=int, default=None,
                   help="iteration cap (default 100 for rounding, 300 for k-means)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="limit BLAS/kernel threads")


def _resolve_beta_iters(args) -> tuple[int, int]:
    beta = args.beta if args.beta is not None else 5 * args.k
    if beta < args.k:
        raise ParameterError(f"--beta {beta} must be at least --k {args.k}")
    if args.iters is not None:
        iters = args.iters
    else:
        iters = 300 if args.algorithm == "hope" else 100
    if iters < 1:
        raise ParameterError(f"--iters must be positive, got {args.iters}")
    return beta, iters


def _clamped_beta_warning(beta: int, graph: BipartiteGraph) -> None:
    cap = min(graph.u_count, graph.v_count)
    if beta > cap:
        print(f"warning: beta {beta} clamped to min(|U|, |V|) = {cap}",
              file=sys.stderr)


def cmd_cluster(args) -> int:
    beta, iters = _resolve_beta_iters(args)
    graph = load_graph(args.input)
    if args.target == "v":
        graph = graph.transpose()
    _clamped_beta_warning(beta, graph)
    with _thread_limit(args.threads):
        result, runtime = _run_algorithm(
            graph, args.algorithm, args.k, args.alpha, beta, iters, args.seed
        )
    with open(args.output, "w", encoding="utf-8") as fh:
        for uid, cluster in zip(graph.u_ids, result.assignments):
            fh.write(f"{uid}\t{cluster}\n")
    truth: LabelSet | None = None
    if args.labels:
        truth = load_labels(args.labels, graph.u_index)
    if args.metrics_out or truth is not None:
        report = MetricsReport.build(
            result,
            truth,
            runtime_seconds=runtime,
            parameters={
                "algorithm": args.algorithm,
                "k": args.k,
                "alpha": args.alpha,
                "beta": beta,
                "iters": iters,
                "seed": args.seed,
                "target": args.target,
            },
        )
        if args.metrics_out:
            with open(args.metrics_out, "w", encoding="utf-8") as fh:
                fh.write(report.to_json())
        else:
            sys.stdout.write(report.to_json())
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.er:
        if args.u is None or args.v is None or args.edges is None:
            raise ParameterError("--er requires --u, --v, and --edges")
        graph = er_bipartite(args.u, args.v, args.edges, seed=args.seed)
        write_edge_tsv(graph, args.output)
    else:
        if args.blocks is None:
            raise ParameterError("--planted requires --blocks")
        graph, labels = planted_bipartite(
            blocks=args.blocks,
            u_per_block=args.u_per_block,
            v_per_block=args.v_per_block,
            p_in=args.p_in,
            p_out=args.p_out,
            seed=args.seed,
        )
        write_edge_tsv(graph, args.output)
        if args.labels_out:
            write_labels_tsv(graph, labels, args.labels_out)
    return EXIT_OK


def cmd_bench(args) -> int:
    beta, iters = _resolve_beta_iters(args)
    values = [int(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ParameterError("--values must list at least one integer")
    rows = []
    with _thread_limit(args.threads):
        for value in values:
            vertices = args.vertices
            edges = args.edges
            k = args.k
            if args.vary == "edges":
                edges = value
            elif args.vary == "vertices":
                vertices = value
            else:
                k = value
            n_u = vertices // 2
            n_v = vertices - n_u
            graph = er_bipartite(n_u, n_v, edges, seed=args.seed)
            bench_beta = beta if args.vary != "k" else 5 * k
            _, runtime = _run_algorithm(
                graph, args.algorithm, k, args.alpha, bench_beta, iters,
                args.seed,
            )
            rows.append((value, runtime))
    lines = [
        f"# algorithm={args.algorithm} vary={args.vary} vertices={args.vertices} "
        f"edges={args.edges} k={args.k} alpha={args.alpha} seed={args.seed}",
        f"{args.vary}\tseconds",
    ]
    lines += [f"{value}\t{runtime:.6f}" for value, runtime in rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bgclust",
                     description="Bipartite graph clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="cluster the target side of a graph")
    p_cluster.add_argument("--input", required=True, help="edge TSV file")
    _add_algorithm_flags(p_cluster)
    p_cluster.add_argument("--target", choices=("u", "v"), default="u",
                           help="which side to cluster")
    p_cluster.add_argument("--output", required=True,
                           help="assignment TSV to write")
    p_cluster.add_argument("--metrics-out", default=None,
                           help="metrics JSON to write")
    p_cluster.add_argument("--labels", default=None,
                           help="ground-truth label TSV for evaluation")
    p_cluster.set_defaults(func=cmd_cluster)

    p_gen = sub.add_parser("generate", help="emit a synthetic graph")
    kind = p_gen.add_mutually_exclusive_group(required=True)
    kind.add_argument("--er", action="store_true",
                      help="uniform random graph with an exact edge count")
    kind.add_argument("--planted", action="store_true",
                      help="block-structured graph with known labels")
    p_gen.add_argument("--u", type=int, default=None)
    p_gen.add_argument("--v", type=int, default=None)
    p_gen.add_argument("--edges", type=int, default=None)
    p_gen.add_argument("--blocks", type=int, default=None)
    p_gen.add_argument("--u-per-block", type=int, default=40)
    p_gen.add_argument("--v-per-block", type=int, default=40)
    p_gen.add_argument("--p-in", type=float, default=0.3)
    p_gen.add_argument("--p-out", type=float, default=0.02)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", required=True, help="edge TSV to write")
    p_gen.add_argument("--labels-out", default=None,
                       help="label TSV to write (planted only)")
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="time a parameter sweep")
    p_bench.add_argument("--vary", choices=("edges", "vertices", "k"),
                         required=True)
    p_bench.add_argument("--values", required=True,
                         help="comma-separated sweep values")
    p_bench.add_argument("--vertices", type=int, default=100_000,
                         help="total |U| + |V| (split evenly)")
    p_bench.add_argument("--edges", type=int, default=2_000_000)
    _add_algorithm_flags(p_bench)
    p_bench.add_argument("--output", default=None,
                         help="timing table path (default stdout)")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
