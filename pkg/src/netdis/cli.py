"""Batch command-line front-end.

Subcommands: generate | compare | alpha-sweep | venn | bench. Each takes a
YAML config (see README) plus overriding flags. Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._kernels import implementation_name
from ._kernels._fallback import KernelConvergenceError
from .connectivity import DegenerateBaselineError
from .graph import GraphFormatError
from .experiments import (
    ConfigError,
    ExperimentConfig,
    cmd_generate,
    load_config,
    run_alpha_sweep,
    run_bench,
    run_compare,
    run_venn,
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="YAML experiment config")
    p.add_argument("--seed", type=int, default=None, help="override master seed")
    p.add_argument("--out", default=None, help="override output directory")
    p.add_argument("--gamma-method", choices=["auto", "exact", "approx"],
                   default=None, help="override objective backend")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for batched evaluations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netdis",
        description="Node-removal disintegration experiments "
                    f"(kernels: {implementation_name})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic edge-list file")
    _add_common(p)
    p.add_argument("--out-file", default=None,
                   help="edge-list path (default <out>/graph.txt)")

    p = sub.add_parser("compare", help="strategy comparison sweep")
    _add_common(p)

    p = sub.add_parser("alpha-sweep", help="effect vs redundancy coefficient")
    _add_common(p)
    p.add_argument("--alphas", default=None,
                   help="comma-separated redundancy coefficients")

    p = sub.add_parser("venn", help="candidate-set overlap across criteria")
    _add_common(p)

    p = sub.add_parser("bench", help="wall time per strategy vs network size")
    _add_common(p)
    p.add_argument("--sizes", default=None, help="comma-separated node counts")
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.out is not None:
        cfg.output_dir = args.out
    if args.gamma_method is not None:
        cfg.gamma_method = args.gamma_method
    if args.threads is not None:
        cfg.threads = args.threads
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(cfg.output_dir)
    try:
        if args.command == "generate":
            if cfg.input.get("kind") != "generator":
                raise ConfigError("generate requires a generator input")
            out_file = Path(args.out_file) if args.out_file else out_dir / "graph.txt"
            out_file.parent.mkdir(parents=True, exist_ok=True)
            spec = cfg.generator_spec(seed=cfg.master_seed)
            meta = cmd_generate(spec, out_file)
            print(f"wrote {out_file} (N={meta['n_nodes']}, W={meta['link_count']})")
        elif args.command == "compare":
            run_compare(cfg, out_dir)
            print(f"wrote {out_dir}/results.csv, summary.csv, timing.csv, run.json")
        elif args.command == "alpha-sweep":
            alphas = ([float(a) for a in args.alphas.split(",")]
                      if args.alphas else cfg.alphas)
            run_alpha_sweep(cfg, alphas, out_dir)
            print(f"wrote {out_dir}/alpha_sweep.csv, alpha_rows.csv, run.json")
        elif args.command == "venn":
            run_venn(cfg, out_dir)
            print(f"wrote {out_dir}/venn.json")
        elif args.command == "bench":
            sizes = ([int(s) for s in args.sizes.split(",")]
                     if args.sizes else cfg.bench_sizes)
            run_bench(cfg, sizes, out_dir)
            print(f"wrote {out_dir}/bench.csv, run.json")
    except (ConfigError, GraphFormatError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (KernelConvergenceError, DegenerateBaselineError,
            FloatingPointError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
