"""Command-line interface: detect, eval, gen, bench, export, rerun.

Every command is deterministic given --seed, and every emitted file embeds a
manifest comment sufficient to reproduce it (``flexcomm rerun <file>``).
Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import bench, files
from .fitness import FlexParams, Partition, make_objective
from .graph import Graph, GraphParseError, load_edge_list, load_gml
from .metrics import nmi_cover, nmi_disjoint
from .optimizer import OptimizerConfig, run
from .overlap import OverlapThresholds, find_overlaps
from .presets import PRESETS, resolve_preset

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def load_graph_file(path: str) -> Graph:
    text = Path(path).read_text()
    if path.endswith(".gml") or text.lstrip().startswith("graph"):
        return load_gml(text)
    return load_edge_list(text)


def _optimizer_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("optimizer")
    group.add_argument("--iterations", type=int, default=None,
                       help="maximum iterations (default 1500)")
    group.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    group.add_argument("--sigma-s", type=float, default=None,
                       help="suppression similarity threshold (default 0.2)")
    group.add_argument("--alpha-ini", type=float, default=None,
                       help="initial mutation intensity (default 10)")
    group.add_argument("--alpha-end", type=float, default=None,
                       help="final mutation intensity (default 1)")
    group.add_argument("--init-pop", type=int, default=None,
                       help="initial population size (default 4)")
    group.add_argument("--max-pop", type=int, default=None,
                       help="maximum population size (default 6)")
    group.add_argument("--clones-per-cell", type=int, default=None)
    group.add_argument("--suppression-rate", type=float, default=None)
    group.add_argument("--concentration-gain", type=float, default=None)
    group.add_argument("--config", type=str, default=None,
                       help="key=value file with optimizer settings")


_FLAG_TO_FIELD = {
    "iterations": "max_iterations",
    "seed": "rng_seed",
    "sigma_s": "sigma_s",
    "alpha_ini": "alpha_ini",
    "alpha_end": "alpha_end",
    "init_pop": "initial_population",
    "max_pop": "max_population",
    "clones_per_cell": "clones_per_cell",
    "suppression_rate": "suppression_rate",
    "concentration_gain": "concentration_gain",
}


def read_config_file(path: str) -> dict:
    """key = value lines; blank lines and '#' comments ignored."""
    settings = {}
    valid = set(OptimizerConfig.__dataclass_fields__)
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in valid:
            raise ValueError(f"{path}:{line_no}: unknown setting {key!r}")
        field_type = OptimizerConfig.__dataclass_fields__[key].type
        settings[key] = int(value) if field_type == "int" else float(value)
    return settings


def build_optimizer_config(args) -> OptimizerConfig:
    settings = read_config_file(args.config) if args.config else {}
    for flag, fieldname in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[fieldname] = value
    return OptimizerConfig(**settings)


def _fitness_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("quality function")
    group.add_argument("--preset", choices=sorted(PRESETS), default=None,
                       help="named parameter row; explicit flags override it")
    group.add_argument("--alpha", type=float, default=None)
    group.add_argument("--beta", type=float, default=None)
    group.add_argument("--gamma", type=float, default=None)
    group.add_argument("--thr-tri", type=float, default=None)
    group.add_argument("--thr-nbr", type=float, default=None)
    group.add_argument("--thr-shared", type=float, default=None)


def build_fitness_params(args) -> tuple[FlexParams, OverlapThresholds]:
    if args.preset:
        fp, th = resolve_preset(args.preset)
    else:
        fp, th = PRESETS["karate"]
    fp = FlexParams(
        alpha=args.alpha if args.alpha is not None else fp.alpha,
        beta=args.beta if args.beta is not None else fp.beta,
        gamma=args.gamma if args.gamma is not None else fp.gamma,
    )
    th = OverlapThresholds(
        thr_tri=args.thr_tri if args.thr_tri is not None else th.thr_tri,
        thr_nbr=args.thr_nbr if args.thr_nbr is not None else th.thr_nbr,
        thr_shared=args.thr_shared if args.thr_shared is not None else th.thr_shared,
    )
    return fp, th


def _manifest(args, command: str, inputs: dict, parameters: dict,
              outputs: list[str]) -> files.RunManifest:
    return files.RunManifest(
        command=command,
        argv=list(getattr(args, "_argv", [])),
        inputs=inputs,
        parameters=parameters,
        seed=parameters.get("optimizer", {}).get("rng_seed"),
        outputs=outputs,
    )


# -- commands -----------------------------------------------------------------

def cmd_detect(args) -> int:
    g = load_graph_file(args.graph)
    fp, th = build_fitness_params(args)
    opt = build_optimizer_config(args)
    objective = make_objective(args.objective, g, fp)
    result = run(g, objective, opt)
    partition = result.best_partition

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [str(out_dir / "partition.communities"), str(out_dir / "summary.json")]
    cover = None
    if args.overlap:
        cover = find_overlaps(g, partition, th)
        outputs.insert(1, str(out_dir / "cover.communities"))
    manifest = _manifest(args, "detect",
                         {"graph": args.graph},
                         {"objective": args.objective, "flex": asdict(fp),
                          "thresholds": asdict(th), "optimizer": asdict(opt)},
                         outputs)
    labels = [g.label_of(i) for i in range(g.node_count)]
    (out_dir / "partition.communities").write_text(
        files.partition_to_text(partition, labels, manifest))
    if cover is not None:
        (out_dir / "cover.communities").write_text(
            files.cover_to_text(cover, labels, manifest))
    summary = {
        "manifest": json.loads(manifest.to_json()),
        "fitness": result.best.fitness,
        "n_communities": len(partition.communities),
        "n_overlapping": len(cover.overlap_nodes) if cover is not None else 0,
        "evaluations": result.evaluations,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"fitness: {result.best.fitness:.6f}")
    print(f"communities: {len(partition.communities)}")
    if cover is not None:
        print(f"overlapping nodes: {len(cover.overlap_nodes)}")
    print(f"wrote: {', '.join(outputs)}")
    return 0


def cmd_eval(args) -> int:
    left, left_labels = files.read_cover(Path(args.partition).read_text())
    right, right_labels = files.read_cover(Path(args.truth).read_text())
    if left_labels != right_labels:
        print("error: files cover different node universes", file=sys.stderr)
        return DATA_ERROR
    report = {}
    if not left.overlap_nodes and not right.overlap_nodes:
        report["nmi"] = nmi_disjoint(left.to_partition(), right.to_partition())
    report["nmi_over"] = nmi_cover(left, right)
    for key, value in report.items():
        print(f"{key}: {value:.6f}")
    return 0


def cmd_gen(args) -> int:
    cfg = bench.GeneratorConfig(
        n_nodes=args.nodes, avg_degree=args.avg_degree, max_degree=args.max_degree,
        max_communities=args.communities, mixing=args.mixing,
        n_overlap_nodes=args.overlap_nodes, avg_memberships=args.avg_memberships,
        target_clustering=args.clustering, rng_seed=args.seed if args.seed is not None else 0)
    g, truth = bench.generate(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [str(out_dir / "network.edges"), str(out_dir / "truth.communities")]
    manifest = files.RunManifest(command="gen", argv=list(getattr(args, "_argv", [])),
                                 inputs={}, parameters={"generator": asdict(cfg)},
                                 seed=cfg.rng_seed, outputs=outputs)
    (out_dir / "network.edges").write_text(files.edge_list_to_text(g, manifest))
    (out_dir / "truth.communities").write_text(files.cover_to_text(truth, None, manifest))
    print(f"generated {g.node_count} nodes, {g.edge_count} edges, "
          f"{len(truth.communities)} communities "
          f"(measured mixing {bench.measured_mixing(g, truth):.3f})")
    print(f"wrote: {', '.join(outputs)}")
    return 0


def _load_batch_dataset(entry: dict, base: Path):
    if "params" in entry and isinstance(entry["params"], str):
        fp, th = resolve_preset(entry["params"])
    elif "params" in entry:
        p = entry["params"]
        fp = FlexParams(p["alpha"], p["beta"], p["gamma"])
        th = OverlapThresholds(p["thr_tri"], p["thr_nbr"], p["thr_shared"])
    else:
        fp, th = resolve_preset("karate")
    if "generator" in entry:
        g, truth = bench.generate(bench.GeneratorConfig(**entry["generator"]))
    else:
        g = load_graph_file(str(base / entry["graph"]))
        truth = files.cover_for_graph(Path(base / entry["truth"]).read_text(), g)
    return g, truth, fp, th


def cmd_bench(args) -> int:
    manifest_path = Path(args.manifest)
    batch = json.loads(manifest_path.read_text())
    base = manifest_path.parent
    results, rows = bench.run_batch(batch, lambda e: _load_batch_dataset(e, base))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [str(out_dir / "results.json"), str(out_dir / "results.csv")]
    run_manifest = files.RunManifest(command="bench",
                                     argv=list(getattr(args, "_argv", [])),
                                     inputs={"manifest": str(manifest_path)},
                                     parameters={"batch": batch}, outputs=outputs)
    results["manifest"] = json.loads(run_manifest.to_json())
    if args.format in ("json", "both"):
        (out_dir / "results.json").write_text(
            json.dumps(results, indent=2, sort_keys=True) + "\n")
    if args.format in ("csv", "both"):
        (out_dir / "results.csv").write_text(
            "# manifest: " + run_manifest.to_json() + "\n" + "\n".join(rows) + "\n")
    print(f"wrote: {', '.join(outputs)}")
    return 0


def cmd_export(args) -> int:
    g = load_graph_file(args.graph)
    cover = files.cover_for_graph(Path(args.cover).read_text(), g)
    out = Path(args.out)
    manifest = files.RunManifest(command="export", argv=list(getattr(args, "_argv", [])),
                                 inputs={"graph": args.graph, "cover": args.cover},
                                 parameters={}, outputs=[str(out)])
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(files.cover_to_dot(g, cover, manifest))
    print(f"wrote: {out}")
    return 0


def cmd_rerun(args) -> int:
    text = Path(args.artifact).read_text()
    manifest = files.extract_manifest(text)
    if manifest is None:
        try:
            doc = json.loads(text)
            manifest = files.RunManifest(**doc["manifest"])
        except (json.JSONDecodeError, KeyError, TypeError):
            print("error: no manifest found in file", file=sys.stderr)
            return DATA_ERROR
    return main(manifest.argv)


def build_parser() -> _Parser:
    parser = _Parser(prog="flexcomm",
                     description="Community detection with a flexible quality "
                                 "function and an immune-network optimizer.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect communities in a graph file")
    p.add_argument("--graph", required=True, help="edge list or GML file")
    p.add_argument("--objective", choices=["flex", "modularity"], default="flex")
    p.add_argument("--overlap", action="store_true",
                   help="also emit an overlapping cover")
    p.add_argument("--out-dir", default="flexcomm-out")
    _fitness_flags(p)
    _optimizer_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="score a partition/cover against a truth file")
    p.add_argument("--partition", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a benchmark graph with ground truth")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=10.0)
    p.add_argument("--max-degree", type=int, default=15)
    p.add_argument("--communities", type=int, default=10,
                   help="maximum number of communities")
    p.add_argument("--mixing", type=float, default=0.1)
    p.add_argument("--overlap-nodes", type=int, default=3)
    p.add_argument("--avg-memberships", type=float, default=2.0)
    p.add_argument("--clustering", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="flexcomm-out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a batch experiment manifest")
    p.add_argument("--manifest", required=True, help="JSON batch description")
    p.add_argument("--out-dir", default="flexcomm-out")
    p.add_argument("--format", choices=["json", "csv", "both"], default="both")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="write a DOT rendering of a cover")
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--out", required=True, help="output .dot path")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("rerun", help="re-execute the command recorded in a "
                                     "result file's manifest")
    p.add_argument("artifact")
    p.set_defaults(func=cmd_rerun)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    args._argv = argv
    try:
        return args.func(args)
    except (GraphParseError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
