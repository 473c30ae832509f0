"""Config-driven experiment pipelines: strategy comparison sweeps, redundancy
sweeps, candidate-set overlap reports, and size/time benchmarks.

Every run fans its master seed out through a counter-based splitter, so each
instance, baseline and strategy owns an independent substream: adding a
strategy or an instance never perturbs the randomness of the others. The
data CSVs (results, summaries) are byte-identical across repeated runs with
one master seed; wall-clock timings live in separate files because they can
never be.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import yaml

from ._kernels import implementation_name
from .aggregation import candidate_size
from .connectivity import GammaEvaluator, phi_from_values, random_baseline
from .generators import GeneratorSpec, build
from .graph import Graph, parse_edge_list, to_edge_list
from .strategies import (
    TabuParams,
    centrality_attack,
    collective_influence,
    random_attack,
    tabu_search,
    targeted_enumeration,
)

CENTRALITY_STRATEGIES = {
    "degree": "D",
    "betweenness": "B",
    "eigenvector": "E",
    "closeness": "C",
    "subgraph": "S",
}
STRATEGY_CODES = {
    "te": 1, "degree": 2, "betweenness": 3, "eigenvector": 4,
    "closeness": 5, "subgraph": 6, "ci": 7, "tabu": 8, "random": 9,
}

# seed-splitter domains
_DOM_INSTANCE = 1
_DOM_BASELINE = 2
_DOM_STRATEGY = 3


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def child_seed(master: int, *path: int) -> int:
    """Deterministic 64-bit substream seed for a (domain, index...) path."""
    ss = np.random.SeedSequence([int(master)] + [int(p) for p in path])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class ExperimentConfig:
    """Everything a batch run needs; loadable from flat YAML."""

    input: dict
    strategies: list = field(default_factory=lambda: [{"name": "te"}])
    instances: int = 1
    n_schedule: object = "log10N"
    alpha: object = 0.05
    criteria: str = "DBE"
    gamma_method: str = "auto"
    baseline_trials: int = 100
    master_seed: int = 0
    output_dir: str = "out"
    alphas: list = field(default_factory=list)
    venn_combos: list = field(default_factory=lambda: ["D", "B", "E", "C", "S", "DBE"])
    venn_size: int = 10
    bench_sizes: list = field(default_factory=list)
    threads: int = 1

    def validate(self) -> None:
        if not isinstance(self.input, dict) or "kind" not in self.input:
            raise ConfigError("input must be a mapping with a 'kind' key")
        kind = self.input["kind"]
        if kind == "generator":
            try:
                self.generator_spec(seed=0)
            except ValueError as exc:
                raise ConfigError(f"bad generator input: {exc}") from exc
        elif kind == "file":
            if "path" not in self.input:
                raise ConfigError("file input needs a 'path'")
        else:
            raise ConfigError(f"unknown input kind {kind!r}")
        if self.instances < 1:
            raise ConfigError("instances must be >= 1")
        if isinstance(self.alpha, str):
            if self.alpha != "matched":
                raise ConfigError("alpha must be a number in [0,1] or 'matched'")
        elif not 0.0 <= float(self.alpha) <= 1.0:
            raise ConfigError("alpha must lie in [0, 1]")
        for tag in self.criteria:
            if tag not in "DBECS":
                raise ConfigError(f"unknown criterion tag {tag!r}")
        if self.gamma_method not in ("auto", "exact", "approx"):
            raise ConfigError(f"unknown gamma_method {self.gamma_method!r}")
        if self.baseline_trials < 1:
            raise ConfigError("baseline_trials must be >= 1")
        if not isinstance(self.n_schedule, (list, tuple)) and \
                self.n_schedule not in ("log10N", "lnN"):
            raise ConfigError("n_schedule must be a list or 'log10N' or 'lnN'")
        for strat in self.strategies:
            if not isinstance(strat, dict) or "name" not in strat:
                raise ConfigError("each strategy needs a 'name'")
            if strat["name"] not in STRATEGY_CODES:
                raise ConfigError(f"unknown strategy {strat['name']!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def generator_spec(self, seed: int) -> GeneratorSpec:
        fields = {k: v for k, v in self.input.items() if k != "kind"}
        fields["seed"] = seed
        return GeneratorSpec.from_dict(fields)

    def resolve_n_schedule(self, n_nodes: int) -> list[int]:
        if isinstance(self.n_schedule, (list, tuple)):
            ns = [int(v) for v in self.n_schedule]
        elif self.n_schedule == "log10N":
            ns = [max(1, int(math.floor(math.log10(n_nodes) + 0.5)))]
        else:  # lnN
            ns = [max(1, int(math.ceil(math.log(n_nodes))))]
        for n in ns:
            if not 1 <= n < n_nodes:
                raise ConfigError(f"removal size {n} out of range for N={n_nodes}")
        return ns

    def alpha_for(self, n: int, n_nodes: int) -> float:
        # 'matched' pairs the redundancy with the removal budget (alpha = n/N),
        # giving candidate sets of about 2n nodes.
        if self.alpha == "matched":
            return n / n_nodes
        return float(self.alpha)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        if "input" not in d:
            raise ConfigError("config needs an 'input' section")
        cfg = cls(**d)
        cfg.validate()
        return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a mapping")
    return ExperimentConfig.from_dict(data)


def dump_config(cfg: ExperimentConfig) -> str:
    """Canonical text form (sorted keys), suitable for diffing runs."""
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True, default_flow_style=False)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_csv(path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class _InstanceRun:
    index: int
    seed: int
    graph: Graph


def _instances(cfg: ExperimentConfig):
    runs = []
    file_graph = None
    if cfg.input["kind"] == "file":
        with open(cfg.input["path"], encoding="utf-8") as fh:
            file_graph = parse_edge_list(fh)
    for i in range(cfg.instances):
        seed = child_seed(cfg.master_seed, _DOM_INSTANCE, i)
        if file_graph is not None:
            g = file_graph
        else:
            g = build(cfg.generator_spec(seed=seed))
        runs.append(_InstanceRun(i, seed, g))
    return runs


def _run_strategy(cfg, g, strat, n, baseline, evaluator, gamma_g, strat_seed):
    """Returns (result-ish dict). Times the complete strategy pipeline."""
    name = strat["name"]
    start = time.perf_counter()
    if name == "te":
        alpha = strat.get("alpha", cfg.alpha_for(n, g.n))
        res = targeted_enumeration(
            g, n, alpha, criteria=strat.get("criteria", cfg.criteria),
            method=cfg.gamma_method, baseline=baseline, threads=cfg.threads)
        return res.to_json_dict(g) | {"strategy_seed": None}
    if name == "tabu":
        params = TabuParams(
            tabu_length=strat.get("tabu_length", 5),
            candidates=strat.get("candidates", 5),
            stall_limit=strat.get("stall_limit", 2000),
            seed=strat_seed)
        res = tabu_search(g, n, params, method=cfg.gamma_method,
                          baseline=baseline,
                          criteria=strat.get("criteria", cfg.criteria),
                          threads=cfg.threads)
        return res.to_json_dict(g) | {"strategy_seed": strat_seed}
    if name in CENTRALITY_STRATEGIES:
        removed = centrality_attack(g, CENTRALITY_STRATEGIES[name], n)
        seed_used = None
    elif name == "ci":
        removed = collective_influence(g, strat.get("radius", 2), n)
        seed_used = None
    elif name == "random":
        removed = random_attack(g, n, strat_seed)
        seed_used = strat_seed
    else:
        raise ConfigError(f"unknown strategy {name!r}")
    gamma_hat = evaluator.without(removed)
    phi = phi_from_values(gamma_g, gamma_hat, baseline)
    return {
        "strategy": name,
        "removed": [g.labels[v] for v in removed],
        "phi": phi,
        "gamma_initial": gamma_g,
        "gamma_removed": gamma_hat,
        "gamma_random": baseline.mean,
        "evaluations": 1,
        "wall_time_s": time.perf_counter() - start,
        "seed": seed_used,
        "params": {k: v for k, v in strat.items() if k != "name"},
        "strategy_seed": seed_used,
    }


def run_compare(cfg: ExperimentConfig, out_dir) -> dict:
    """Instance x strategy x n sweep sharing one random baseline per
    (instance, n). Writes results.csv / summary.csv / timing.csv / run.json
    and returns the JSON document."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for inst in _instances(cfg):
        g = inst.graph
        evaluator = GammaEvaluator(g, cfg.gamma_method, threads=cfg.threads)
        gamma_g = evaluator.full()
        for n in cfg.resolve_n_schedule(g.n):
            b_seed = child_seed(cfg.master_seed, _DOM_BASELINE, inst.index, n)
            baseline = random_baseline(g, n, trials=cfg.baseline_trials,
                                       seed=b_seed, method=cfg.gamma_method,
                                       evaluator=evaluator)
            degenerate = abs(gamma_g - baseline.mean) < 1e-12
            for strat in cfg.strategies:
                name = strat["name"]
                s_seed = child_seed(cfg.master_seed, _DOM_STRATEGY,
                                    inst.index, n, STRATEGY_CODES[name])
                if degenerate:
                    record = {
                        "strategy": name, "removed": [], "phi": float("nan"),
                        "gamma_initial": gamma_g, "gamma_removed": float("nan"),
                        "gamma_random": baseline.mean, "evaluations": 0,
                        "wall_time_s": 0.0, "seed": None, "params": {},
                        "strategy_seed": None, "flag": "degenerate-baseline",
                    }
                else:
                    record = _run_strategy(cfg, g, strat, n, baseline,
                                           evaluator, gamma_g, s_seed)
                record |= {
                    "instance": inst.index,
                    "instance_seed": inst.seed,
                    "baseline_seed": b_seed,
                    "n": n,
                }
                rows.append(record)
    result_rows = [(r["instance_seed"], r["strategy"], r["n"], float(r["phi"]),
                    r["evaluations"]) for r in rows]
    write_csv(out_dir / "results.csv",
              ["instance_seed", "strategy", "n", "phi", "evaluations"],
              result_rows)
    summary_rows = []
    for strat in cfg.strategies:
        name = strat["name"]
        for n in sorted({r["n"] for r in rows}):
            phis = [float(r["phi"]) for r in rows
                    if r["strategy"] == name and r["n"] == n]
            if phis:
                mean = float(np.mean(phis))
                std = float(np.std(phis, ddof=1)) if len(phis) > 1 else 0.0
                summary_rows.append((name, n, mean, std))
    write_csv(out_dir / "summary.csv",
              ["strategy", "n", "mean_phi", "std_phi"], summary_rows)
    timing_rows = [(r["instance_seed"], r["strategy"], r["n"],
                    float(r["wall_time_s"]), r["evaluations"]) for r in rows]
    write_csv(out_dir / "timing.csv",
              ["instance_seed", "strategy", "n", "wall_time_s", "evaluations"],
              timing_rows)
    doc = {
        "command": "compare",
        "config": cfg.to_dict(),
        "kernel": implementation_name,
        "rows": rows,
    }
    (out_dir / "run.json").write_text(json.dumps(doc, indent=2, default=float),
                                      encoding="utf-8")
    return doc


def run_alpha_sweep(cfg: ExperimentConfig, alphas, out_dir) -> dict:
    """Targeted enumeration across redundancy coefficients; one baseline per
    instance so the whole curve shares its denominator."""
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ConfigError("alpha sweep needs at least one alpha")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ConfigError("alphas must lie in [0, 1]")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for inst in _instances(cfg):
        g = inst.graph
        n = cfg.resolve_n_schedule(g.n)[0]
        b_seed = child_seed(cfg.master_seed, _DOM_BASELINE, inst.index, n)
        baseline = random_baseline(g, n, trials=cfg.baseline_trials,
                                   seed=b_seed, method=cfg.gamma_method)
        for alpha in alphas:
            res = targeted_enumeration(g, n, alpha, criteria=cfg.criteria,
                                       method=cfg.gamma_method,
                                       baseline=baseline, threads=cfg.threads)
            rows.append(res.to_json_dict(g) | {
                "instance": inst.index, "instance_seed": inst.seed,
                "baseline_seed": b_seed, "alpha": alpha, "n": n,
            })
    write_csv(out_dir / "alpha_rows.csv",
              ["instance_seed", "alpha", "phi", "evaluations"],
              [(r["instance_seed"], float(r["alpha"]), float(r["phi"]),
                r["evaluations"]) for r in rows])
    summary = []
    for alpha in alphas:
        phis = [float(r["phi"]) for r in rows if r["alpha"] == alpha]
        mean = float(np.mean(phis))
        std = float(np.std(phis, ddof=1)) if len(phis) > 1 else 0.0
        summary.append((alpha, mean, std))
    write_csv(out_dir / "alpha_sweep.csv", ["alpha", "mean_phi", "std_phi"],
              summary)
    doc = {"command": "alpha-sweep", "config": cfg.to_dict(),
           "alphas": alphas, "kernel": implementation_name, "rows": rows}
    (out_dir / "run.json").write_text(json.dumps(doc, indent=2, default=float),
                                      encoding="utf-8")
    return doc


def run_venn(cfg: ExperimentConfig, out_dir) -> dict:
    """Candidate-set overlap across criteria combinations."""
    from .aggregation import overlap_analysis

    out_dir.mkdir(parents=True, exist_ok=True)
    inst = _instances(cfg)[0]
    report = overlap_analysis(inst.graph, cfg.venn_combos, cfg.venn_size)
    doc = {
        "command": "venn",
        "config": cfg.to_dict(),
        "n_nodes": inst.graph.n,
        "link_count": inst.graph.link_count,
        "report": report.to_json_dict(inst.graph),
    }
    (out_dir / "venn.json").write_text(json.dumps(doc, indent=2),
                                       encoding="utf-8")
    return doc


def run_bench(cfg: ExperimentConfig, sizes, out_dir) -> dict:
    """Median-of-3 wall time per strategy per network size (one warm-up run
    discarded)."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ConfigError("bench needs at least one size")
    if cfg.input["kind"] != "generator":
        raise ConfigError("bench requires a generator input")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for size in sizes:
        seed = child_seed(cfg.master_seed, _DOM_INSTANCE, size)
        spec = cfg.generator_spec(seed=seed)
        spec = replace(spec, n=size)
        spec.validate()
        g = build(spec)
        n = cfg.resolve_n_schedule(g.n)[0]
        b_seed = child_seed(cfg.master_seed, _DOM_BASELINE, size, n)
        baseline = random_baseline(g, n, trials=cfg.baseline_trials,
                                   seed=b_seed, method=cfg.gamma_method)
        evaluator = GammaEvaluator(g, cfg.gamma_method, threads=cfg.threads)
        gamma_g = evaluator.full()
        for strat in cfg.strategies:
            s_seed = child_seed(cfg.master_seed, _DOM_STRATEGY, size, n,
                                STRATEGY_CODES[strat["name"]])
            times = []
            for rep in range(4):  # first is warm-up
                record = _run_strategy(cfg, g, strat, n, baseline, evaluator,
                                       gamma_g, s_seed)
                if rep > 0:
                    times.append(record["wall_time_s"])
            rows.append((size, strat["name"], float(np.median(times))))
    write_csv(out_dir / "bench.csv",
              ["n_nodes", "strategy", "median_wall_time_s"], rows)
    doc = {"command": "bench", "config": cfg.to_dict(), "sizes": sizes,
           "kernel": implementation_name,
           "rows": [{"n_nodes": a, "strategy": b, "median_wall_time_s": c}
                    for a, b, c in rows]}
    (out_dir / "run.json").write_text(json.dumps(doc, indent=2, default=float),
                                      encoding="utf-8")
    return doc


def cmd_generate(spec: GeneratorSpec, out_path) -> dict:
    """Write an edge-list file plus a JSON sidecar describing its provenance."""
    g = build(spec)
    out_path.write_text(to_edge_list(g), encoding="utf-8")
    meta = {"spec": spec.to_dict(), "n_nodes": g.n, "link_count": g.link_count}
    sidecar = out_path.with_suffix(out_path.suffix + ".json")
    sidecar.write_text(json.dumps(meta, indent=2), encoding="utf-8")
    return meta


def expected_enumerations(n_nodes: int, n: int, alpha: float) -> int:
    """How many subsets targeted enumeration will evaluate."""
    return math.comb(candidate_size(n_nodes, n, alpha), n)
