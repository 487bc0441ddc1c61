"""Command-line front end.

One subcommand per pipeline stage plus end-to-end drivers:

    hotmine synth       generate a synthetic corpus with ground truth
    hotmine graph       kernel + kNN + mix two similarity matrices
    hotmine candidates  threshold-cascade candidates from a graph
    hotmine rank        weight and rank candidates
    hotmine bundle      rank, then bundle into coarse topics
    hotmine refine      full pipeline on a prebuilt graph
    hotmine run         full pipeline from raw matrices
    hotmine eval        score a detections file against ground truth
    hotmine oracle      property checks on random instances

Every pipeline knob is a flag; `--config FILE` loads a JSON object with
the same keys first, and explicit flags override the file. Exit codes:
0 success, 1 bad input (or a failed oracle check), 2 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bundling import bundle, nms_dedupe
from .candidates import cascade_candidates, load_candidates, save_candidates, TopicCandidate
from .errors import ConvergenceError, InputError
from .evaluation import evaluate, load_ground_truth, write_curve_csv
from .graph import load_graph, load_similarity, save_graph, save_similarity
from .oracle import check_monotonicity, check_submodularity, sample_instance
from .pipeline import (
    PipelineConfig,
    build_mixed_graph,
    run_br,
    run_br_from_matrices,
    write_detections,
    write_provenance,
    write_report,
)
from .ranking import apply_weights, estimate_weights, rank
from .synth import SyntheticScenario, generate_synthetic

_CONFIG_FIELDS = tuple(PipelineConfig.__dataclass_fields__)


def _load_config_file(path: str) -> PipelineConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"config file {path} must hold a JSON object")
    return PipelineConfig.from_dict(data)


def _add_config_flags(parser: argparse.ArgumentParser, base: PipelineConfig) -> None:
    g = parser.add_argument_group("pipeline config")
    g.add_argument("--knn-txt", type=int, default=base.knn_txt)
    g.add_argument("--knn-vis", type=int, default=base.knn_vis)
    g.add_argument("--sigma2-affinity", type=float, default=base.sigma2_affinity)
    g.add_argument(
        "--apply-kernel",
        action=argparse.BooleanOptionalAction,
        default=base.apply_kernel,
        help="apply the distance-to-affinity kernel (--no-apply-kernel for "
        "inputs that already are affinities)",
    )
    g.add_argument(
        "--cascade-thresholds",
        type=_float_list,
        default=base.cascade_thresholds,
        metavar="T1,T2,...",
    )
    g.add_argument("--window", type=int, default=base.window)
    g.add_argument("--tau", type=float, default=base.tau)
    g.add_argument("--nms-thresh", type=float, default=base.nms_thresh)
    g.add_argument("--alpha", type=float, default=base.alpha)
    g.add_argument("--sigma-dissim", type=float, default=base.sigma_dissim)
    g.add_argument("--lam", type=float, default=base.lam)
    g.add_argument("--margin", type=float, default=base.margin)
    g.add_argument("--pd-max-iter", type=int, default=base.pd_max_iter)
    g.add_argument("--pd-tol", type=float, default=base.pd_tol)
    g.add_argument("--pr-tol", type=float, default=base.pr_tol)
    g.add_argument("--pr-max-iter", type=int, default=base.pr_max_iter)
    g.add_argument("--seed", type=int, default=base.seed)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(**{name: getattr(args, name) for name in _CONFIG_FIELDS})


def _build_parser(base: PipelineConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hotmine",
        description="Mine hot topics from webpage similarity graphs.",
    )
    parser.add_argument("--version", action="version", version=f"hotmine {__version__}")
    parser.add_argument(
        "--config",
        metavar="FILE",
        help="JSON file with PipelineConfig keys; flags override it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--n", type=int, required=True, help="total webpage count")
    p.add_argument(
        "--topic-sizes", type=_int_list, required=True, metavar="S1,S2,..."
    )
    p.add_argument("--fragments", type=int, default=3)
    p.add_argument("--fragment-drop", type=int, default=0)
    p.add_argument("--fragment-noise", type=int, default=0)
    p.add_argument("--intra-similarity", type=float, default=0.8)
    p.add_argument("--noise-similarity", type=float, default=0.05)
    p.add_argument("--jitter", type=float, default=0.02)
    p.add_argument("--cluster-size", type=int, default=12)
    p.add_argument("--cluster-count", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    _add_config_flags(p, base)

    p = sub.add_parser("graph", help="build the mixed kNN graph")
    p.add_argument("--vis", required=True, help="visual similarity file")
    p.add_argument("--txt", required=True, help="textual similarity file")
    p.add_argument("--out", required=True)
    _add_config_flags(p, base)

    p = sub.add_parser("candidates", help="cascade candidates from a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    _add_config_flags(p, base)

    p = sub.add_parser("rank", help="weight and rank candidates")
    p.add_argument("--graph", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--out", required=True, help="ranked candidate file")
    _add_config_flags(p, base)

    p = sub.add_parser("bundle", help="rank and bundle into coarse topics")
    p.add_argument("--graph", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--out", required=True, help="coarse topic file")
    _add_config_flags(p, base)

    p = sub.add_parser("refine", help="full pipeline on a prebuilt graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--truth", help="optional ground-truth file")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--stop-after", choices=("rank", "bundle", "refine"), default="refine")
    p.add_argument("--max-fppt", type=int, default=None)
    _add_config_flags(p, base)

    p = sub.add_parser("run", help="full pipeline from raw matrices")
    p.add_argument("--vis", required=True)
    p.add_argument("--txt", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--truth", help="optional ground-truth file")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--stop-after", choices=("rank", "bundle", "refine"), default="refine")
    p.add_argument("--max-fppt", type=int, default=None)
    _add_config_flags(p, base)

    p = sub.add_parser("eval", help="score detections against ground truth")
    p.add_argument("--detections", required=True, help="file in rank order")
    p.add_argument("--truth", required=True)
    p.add_argument("--n", type=int, required=True, help="total webpage count")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--max-fppt", type=int, default=None)

    p = sub.add_parser("oracle", help="run property checks on random instances")
    p.add_argument("--trials", type=int, default=1000, help="trials per check")
    p.add_argument("--nodes", type=int, default=8, help="instance size")
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--oracle-seed", type=int, default=0)
    return parser


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad int list {text!r}") from exc


def _cmd_synth(args: argparse.Namespace) -> int:
    scenario = SyntheticScenario(
        n_webpages=args.n,
        topic_sizes=args.topic_sizes,
        fragments_per_topic=args.fragments,
        fragment_drop=args.fragment_drop,
        fragment_noise=args.fragment_noise,
        intra_similarity=args.intra_similarity,
        noise_similarity=args.noise_similarity,
        jitter=args.jitter,
        noise_cluster_size=args.cluster_size,
        noise_cluster_count=args.cluster_count,
    )
    data = generate_synthetic(scenario, seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_similarity(data.w_vis, out / "vis.sim")
    save_similarity(data.w_txt, out / "txt.sim")
    save_candidates(data.candidates, out / "candidates.txt")
    save_candidates(
        [TopicCandidate(t) for t in data.truth.topics], out / "truth.txt"
    )
    for name in ("vis.sim", "txt.sim", "candidates.txt", "truth.txt"):
        print(out / name)
    return 0


def _cmd_graph(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    graph = build_mixed_graph(
        config, load_similarity(args.vis), load_similarity(args.txt)
    )
    save_graph(graph, args.out)
    print(f"{args.out}: {graph.n} nodes, {graph.edge_count} edges")
    return 0


def _cmd_candidates(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    graph = load_graph(args.graph)
    cands = cascade_candidates(graph, thresholds=config.cascade_thresholds)
    save_candidates(cands, args.out)
    print(f"{args.out}: {len(cands)} candidates")
    return 0


def _rank_from_files(args: argparse.Namespace, config: PipelineConfig):
    graph = load_graph(args.graph)
    cands = load_candidates(args.candidates, n=graph.n)
    weights = estimate_weights(
        graph, cands, max_iter=config.pd_max_iter, tol=config.pd_tol
    )
    apply_weights(cands, weights)
    return graph, cands, rank(cands)


def _cmd_rank(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _, _, ranked = _rank_from_files(args, config)
    header = [
        f"rank {pos}: interestingness={item.interestingness!r} "
        f"weight={item.weight!r} size={item.size}"
        for pos, item in enumerate(ranked.items)
    ]
    save_candidates(ranked.items, args.out, header=header)
    print(f"{args.out}: {len(ranked.items)} candidates ranked")
    return 0


def _cmd_bundle(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _, _, ranked = _rank_from_files(args, config)
    coarse = nms_dedupe(
        bundle(ranked, window=config.window, tau=config.tau),
        overlap_thresh=config.nms_thresh,
    )
    save_candidates(coarse, args.out)
    print(f"{args.out}: {len(coarse)} coarse topics")
    return 0


def _write_run_outputs(result, args: argparse.Namespace) -> int:
    prefix = Path(args.out_prefix)
    topics_path = prefix.with_name(prefix.name + "_topics.txt")
    prov_path = prefix.with_name(prefix.name + "_provenance.json")
    write_detections(result, topics_path)
    write_provenance(result, prov_path)
    print(topics_path)
    print(prov_path)
    if result.report is not None:
        for path in write_report(result, prefix):
            print(path)
        print(f"accuracy at FPPT<=5: {result.report.accuracy_at(5):.4f}")
    return 0


def _cmd_refine(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    graph = load_graph(args.graph)
    cands = load_candidates(args.candidates, n=graph.n)
    truth = load_ground_truth(args.truth, n=graph.n) if args.truth else None
    result = run_br(
        config,
        graph,
        cands,
        truth=truth,
        stop_after=args.stop_after,
        max_fppt=args.max_fppt,
    )
    return _write_run_outputs(result, args)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    w_vis = load_similarity(args.vis)
    w_txt = load_similarity(args.txt)
    if w_vis.n != w_txt.n:
        raise InputError(
            f"similarity matrices disagree on size: {w_vis.n} vs {w_txt.n}"
        )
    cands = load_candidates(args.candidates, n=w_vis.n)
    truth = load_ground_truth(args.truth, n=w_vis.n) if args.truth else None
    result = run_br_from_matrices(
        config,
        w_vis,
        w_txt,
        cands,
        truth=truth,
        stop_after=args.stop_after,
        max_fppt=args.max_fppt,
    )
    return _write_run_outputs(result, args)


def _cmd_eval(args: argparse.Namespace) -> int:
    detections = load_candidates(args.detections, n=args.n)
    truth = load_ground_truth(args.truth, n=args.n)
    report = evaluate(detections, truth, max_fppt=args.max_fppt)
    prefix = Path(args.out_prefix)
    f1_path = prefix.with_name(prefix.name + "_top10_f1.csv")
    acc_path = prefix.with_name(prefix.name + "_accuracy.csv")
    write_curve_csv(report.top10_f1_curve, f1_path)
    write_curve_csv(report.accuracy_fppt_curve, acc_path)
    print(f1_path)
    print(acc_path)
    print(f"accuracy at FPPT<=5: {report.accuracy_at(5):.4f}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.instances < 1:
        raise InputError("need at least one instance")
    rng = np.random.default_rng(args.oracle_seed)
    reports = []
    for i in range(args.instances):
        pi, d = sample_instance(rng, args.nodes)
        for lam in (0.5, 1.0, 2.0, 5.0):
            reports.append(
                check_submodularity(
                    pi, d, lam=lam, trials=args.trials, seed=args.oracle_seed + i
                )
            )
        pi_n, d_n = sample_instance(rng, args.nodes, normalize=True)
        for lam in (2.0, 3.0):
            reports.append(
                check_monotonicity(
                    pi_n, d_n, lam=lam, trials=args.trials, seed=args.oracle_seed + i
                )
            )
    failed = 0
    for report in reports:
        print(report.summary())
        failed += 0 if report.passed else 1
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 0 if failed == 0 else 1


_COMMANDS = {
    "synth": _cmd_synth,
    "graph": _cmd_graph,
    "candidates": _cmd_candidates,
    "rank": _cmd_rank,
    "bundle": _cmd_bundle,
    "refine": _cmd_refine,
    "run": _cmd_run,
    "eval": _cmd_eval,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        base = _load_config_file(known.config) if known.config else PipelineConfig()
        args = _build_parser(base).parse_args(argv)
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
