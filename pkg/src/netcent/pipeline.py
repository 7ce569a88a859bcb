"""Config-driven pipeline: ingest -> metrics -> rankings -> overlap ->
correlation -> intervention, with file outputs.

Every stochastic component draws from a named sub-stream of the single
config seed, so adding or dropping one metric never perturbs another's
results. The consolidated ``report.json`` contains only reproducible
content (wall-clock stage timings go to a ``timings.json`` sidecar), so
two runs with identical inputs, config, and seed are byte-identical.
"""

from __future__ import annotations

import configparser
import dataclasses
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import io as _io
from . import __version__ as _pkg_version
from .errors import (InvalidParameter, NothingToEmit, PipelineError)
from .graph import DIRECTIONS, DirectedGraph
from .ranking import overlap_report, rank_correlation, top_k
from .novel import (DicConfig, MvcConfig, NodeAttributes, PcConfig, dic, mvc,
                    propagation_centrality)
from .rng import derive_seed, substream
from .scores import METRICS, TRADITIONAL_METRICS, ScoreVector
from .simulate import CascadeConfig, intervention_experiment, metric_removal_set
from .traditional import (PowerIterationConfig, betweenness_centrality,
                          closeness_centrality, degree_centrality,
                          eigenvector_centrality)

DEFAULT_METRICS = ("degree_total", "closeness", "betweenness", "eigenvector",
                   "pc", "mvc", "dic")
METRIC_ALIASES = {"degree": "degree_total"}
FORMATS = ("interactions", "edges")
BUDGET_MODES = ("equal", "natural")


@dataclass
class RunConfig:
    """Flat, file-loadable description of one pipeline run.

    Mirrors the CLI flags one to one; command-line values override
    config-file values. The echo stored in the report reproduces the run.
    """

    input: str = ""
    format: str = "interactions"
    direction: str = "info_flow"
    metrics: tuple[str, ...] = DEFAULT_METRICS
    k: int = 10
    seed: int = 0
    out: str = "netcent-out"
    workers: int = 1
    attributes: str | None = None
    emit_plots: bool = False
    # propagation centrality
    pc_damping: float = 0.85
    pc_tolerance: float = 1e-10
    pc_max_iterations: int = 100
    pc_weighted: bool = False
    # None = orientation-aware default (endorsement direction carries rank)
    pc_reverse: bool | None = None
    # eigenvector
    eig_tolerance: float = 1e-10
    eig_max_iterations: int = 100
    eig_reverse: bool | None = None
    # vulnerability centrality
    mvc_steps: int = 5
    mvc_init: str = "seeded_uniform"
    mvc_attribute: str = "vulnerability_0"
    mvc_exposure: str = "in_degree"
    # dynamic influence centrality
    dic_steps: int = 10
    dic_reverse: bool | None = None
    # shortest-path metrics
    betweenness_mode: str = "auto"
    betweenness_samples: int | None = None
    closeness_mode: str = "auto"
    closeness_samples: int | None = None
    closeness_weighted: bool = False
    # correlation: "metric:proxy" pairs
    correlate: tuple[str, ...] = ()
    # intervention simulation
    simulate: bool = False
    sim_model: str = "independent_cascade"
    sim_p: float = 0.1
    sim_trials: int = 1000
    sim_seeds: tuple[str, ...] = ()
    sim_random_seeds: int = 0
    sim_strategies: tuple[str, ...] = ("traditional_union", "combined_union",
                                       "random")
    sim_budget: str = "equal"
    sim_weight_scaled: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise InvalidParameter(f"format must be one of {FORMATS}")
        if self.direction not in DIRECTIONS:
            raise InvalidParameter(f"direction must be one of {DIRECTIONS}")
        if self.k < 1:
            raise InvalidParameter("k must be >= 1")
        if self.workers < 1:
            raise InvalidParameter("workers must be >= 1")
        if self.sim_budget not in BUDGET_MODES:
            raise InvalidParameter(f"sim_budget must be one of {BUDGET_MODES}")
        resolved = []
        for name in self.metrics:
            name = METRIC_ALIASES.get(name, name)
            if name not in METRICS:
                raise InvalidParameter(f"unknown metric {name!r}")
            if name not in resolved:
                resolved.append(name)
        self.metrics = tuple(resolved)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        # workers is an execution detail with no effect on results; keeping
        # it out of the echo lets reports stay byte-identical across worker
        # counts while still round-tripping
        del d["workers"]
        for key, value in d.items():
            if isinstance(value, tuple):
                d[key] = list(value)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        kwargs = {}
        for f in dataclasses.fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if isinstance(value, list):
                value = tuple(value)
            kwargs[f.name] = value
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)


# config file: flat key-value sections, one section per component
_FILE_SCHEMA = {
    ("run", "input"): ("input", str),
    ("run", "format"): ("format", str),
    ("run", "direction"): ("direction", str),
    ("run", "metrics"): ("metrics", "strlist"),
    ("run", "k"): ("k", int),
    ("run", "seed"): ("seed", int),
    ("run", "out"): ("out", str),
    ("run", "workers"): ("workers", int),
    ("run", "attributes"): ("attributes", str),
    ("run", "emit_plots"): ("emit_plots", "bool"),
    ("pc", "damping"): ("pc_damping", float),
    ("pc", "tolerance"): ("pc_tolerance", float),
    ("pc", "max_iterations"): ("pc_max_iterations", int),
    ("pc", "weighted"): ("pc_weighted", "bool"),
    ("pc", "reverse"): ("pc_reverse", "bool"),
    ("eigenvector", "tolerance"): ("eig_tolerance", float),
    ("eigenvector", "max_iterations"): ("eig_max_iterations", int),
    ("eigenvector", "reverse"): ("eig_reverse", "bool"),
    ("mvc", "steps"): ("mvc_steps", int),
    ("mvc", "init"): ("mvc_init", str),
    ("mvc", "attribute"): ("mvc_attribute", str),
    ("mvc", "exposure_mode"): ("mvc_exposure", str),
    ("dic", "steps"): ("dic_steps", int),
    ("dic", "reverse"): ("dic_reverse", "bool"),
    ("betweenness", "mode"): ("betweenness_mode", str),
    ("betweenness", "sample_size"): ("betweenness_samples", int),
    ("closeness", "mode"): ("closeness_mode", str),
    ("closeness", "sample_size"): ("closeness_samples", int),
    ("closeness", "weighted"): ("closeness_weighted", "bool"),
    ("correlate", "pairs"): ("correlate", "strlist"),
    ("simulate", "enabled"): ("simulate", "bool"),
    ("simulate", "model"): ("sim_model", str),
    ("simulate", "p"): ("sim_p", float),
    ("simulate", "trials"): ("sim_trials", int),
    ("simulate", "seeds"): ("sim_seeds", "strlist"),
    ("simulate", "random_seeds"): ("sim_random_seeds", int),
    ("simulate", "strategies"): ("sim_strategies", "strlist"),
    ("simulate", "budget"): ("sim_budget", str),
    ("simulate", "weight_scaled"): ("sim_weight_scaled", "bool"),
}


def load_config_file(path) -> dict:
    """Parse the INI-style config file into RunConfig keyword values."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    values: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            entry = _FILE_SCHEMA.get((section, key))
            if entry is None:
                raise InvalidParameter(f"{path}: unknown config key [{section}] {key}")
            name, kind = entry
            raw = raw.strip()
            if kind == "strlist":
                values[name] = tuple(x.strip() for x in raw.split(",") if x.strip())
            elif kind == "bool":
                values[name] = raw.lower() in ("1", "true", "yes", "on")
            elif kind is str:
                values[name] = raw
            else:
                try:
                    values[name] = kind(raw)
                except ValueError:
                    raise InvalidParameter(
                        f"{path}: bad value {raw!r} for [{section}] {key}") from None
    return values


@dataclass
class AnalysisReport:
    """Everything one run produced; to_report_dict() is the stable subset."""

    version: str
    config: dict
    graph_summary: dict
    metrics: dict
    overlap: dict | None = None
    correlations: list = field(default_factory=list)
    interventions: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_report_dict(self) -> dict:
        # timings are wall-clock and excluded so reports stay byte-identical
        return {"version": self.version, "config": self.config,
                "graph": self.graph_summary, "metrics": self.metrics,
                "overlap": self.overlap, "correlations": self.correlations,
                "interventions": self.interventions}


def load_graph(cfg: RunConfig) -> DirectedGraph:
    if cfg.format == "interactions":
        from .graph import build_graph
        return build_graph(_io.read_interactions_csv(cfg.input), cfg.direction)
    return _io.read_edge_csv(cfg.input, direction=cfg.direction)


def compute_metric(g: DirectedGraph, metric: str, cfg: RunConfig,
                   attrs: NodeAttributes | None = None) -> ScoreVector:
    """Run one metric with parameters and named sub-seeds from the config."""
    if metric.startswith("degree_"):
        return degree_centrality(g, metric.removeprefix("degree_"))
    if metric == "closeness":
        return closeness_centrality(
            g, mode=cfg.closeness_mode, sample_size=cfg.closeness_samples,
            seed=derive_seed(cfg.seed, "closeness_pivots"),
            weighted=cfg.closeness_weighted, workers=cfg.workers)
    if metric == "betweenness":
        return betweenness_centrality(
            g, mode=cfg.betweenness_mode, sample_size=cfg.betweenness_samples,
            seed=derive_seed(cfg.seed, "betweenness_pivots"),
            workers=cfg.workers)
    if metric == "eigenvector":
        return eigenvector_centrality(
            g, PowerIterationConfig(tolerance=cfg.eig_tolerance,
                                    max_iterations=cfg.eig_max_iterations),
            reverse=cfg.eig_reverse)
    if metric == "pc":
        return propagation_centrality(
            g, PcConfig(damping=cfg.pc_damping, tolerance=cfg.pc_tolerance,
                        max_iterations=cfg.pc_max_iterations,
                        weighted=cfg.pc_weighted, reverse=cfg.pc_reverse))
    if metric == "mvc":
        return mvc(g, attrs, MvcConfig(
            init=cfg.mvc_init, seed=derive_seed(cfg.seed, "mvc_init"),
            attribute=cfg.mvc_attribute, steps=cfg.mvc_steps,
            exposure_mode=cfg.mvc_exposure))
    if metric == "dic":
        return dic(g, DicConfig(steps=cfg.dic_steps, reverse=cfg.dic_reverse))
    raise InvalidParameter(f"unknown metric {metric!r}")


def _metric_summary(sv: ScoreVector, k: int) -> dict:
    table = top_k(sv, k)
    return {"params": sv.params, "iterations_run": sv.iterations_run,
            "normalised": sv.normalised,
            "top": [{"rank": r, "node": lab, "score": s}
                    for r, lab, s in table.entries]}


def _pick_sim_seeds(g: DirectedGraph, cfg: RunConfig) -> tuple[str, ...]:
    if cfg.sim_seeds:
        return cfg.sim_seeds
    if cfg.sim_random_seeds < 1:
        raise InvalidParameter("simulation needs sim_seeds or sim_random_seeds")
    count = min(cfg.sim_random_seeds, g.n)
    rng = substream(cfg.seed, "sim_seeds")
    picks = rng.choice(g.n, size=count, replace=False)
    return tuple(sorted(g.labels[i] for i in picks))


def _run_interventions(g: DirectedGraph, deep_rankings, cfg: RunConfig) -> list:
    seeds = _pick_sim_seeds(g, cfg)
    cascade = CascadeConfig(seeds=seeds, model=cfg.sim_model, p=cfg.sim_p,
                            trials=cfg.sim_trials,
                            seed=derive_seed(cfg.seed, "cascade"),
                            weight_scaled=cfg.sim_weight_scaled)
    natural = {}
    for s in cfg.sim_strategies:
        name, _, metric = s.partition(":")
        if name != "random":
            natural[s] = len(metric_removal_set(deep_rankings, name,
                                                metric=metric or None, k=cfg.k))
    budget = max(natural.values()) if (cfg.sim_budget == "equal" and natural) else None

    results = []
    for strategy in cfg.sim_strategies:
        # "single:<metric>" targets one metric's ranking
        name, _, metric = strategy.partition(":")
        if name == "random":
            size = budget if budget is not None else cfg.k
            removal = metric_removal_set(
                deep_rankings, "random", budget=size, universe=g.labels,
                seed=derive_seed(cfg.seed, "removal_random"))
        else:
            removal = metric_removal_set(
                deep_rankings, name, metric=metric or None, k=cfg.k,
                budget=budget, universe=g.labels,
                seed=derive_seed(cfg.seed, "removal_pad"))
        res = intervention_experiment(g, removal, cascade, workers=cfg.workers)
        entry = {"strategy": strategy, "budget": len(removal)}
        entry.update(res.to_dict())
        results.append(entry)
    return results


def run_pipeline(cfg: RunConfig) -> AnalysisReport:
    """Execute every configured stage and write the output files.

    Outputs land in ``cfg.out``: one ``<metric>.scores.csv`` per metric,
    ``overlap.json`` when two or more metrics ran, ``report.json``,
    ``timings.json``, and the plot-data CSVs when requested. All writes
    are atomic. Stage failures raise PipelineError naming the stage.
    """
    out_dir = Path(cfg.out)
    timings: dict[str, float] = {}

    def stage(name, fn):
        start = time.perf_counter()
        try:
            result = fn()
        except Exception as exc:
            raise PipelineError(name, exc) from exc
        timings[name] = time.perf_counter() - start
        return result

    g = stage("ingest", lambda: load_graph(cfg))
    attrs = stage("attributes", lambda: (
        NodeAttributes.from_csv(cfg.attributes) if cfg.attributes else None))

    score_vectors: dict[str, ScoreVector] = {}

    def compute_all():
        for metric in cfg.metrics:
            sv = compute_metric(g, metric, cfg, attrs)
            score_vectors[metric] = sv
            _io.write_scores_csv(sv, out_dir / f"{metric}.scores.csv")

    stage("metrics", compute_all)

    metric_summaries = stage("rank", lambda: {
        m: _metric_summary(sv, cfg.k) for m, sv in score_vectors.items()})

    overlap_dict = None
    traditional_present = [m for m in score_vectors if m in TRADITIONAL_METRICS]
    if len(score_vectors) >= 2 and traditional_present:
        def build_overlap():
            rankings = {m: top_k(sv, cfg.k) for m, sv in score_vectors.items()}
            report = overlap_report(rankings, traditional_present)
            _io.write_json(report.to_dict(), out_dir / "overlap.json")
            return report.to_dict()

        overlap_dict = stage("overlap", build_overlap)

    correlations = []
    if cfg.correlate:
        def run_correlations():
            if attrs is None:
                raise InvalidParameter("correlation requires an attributes file")
            out = []
            for pair in cfg.correlate:
                metric, _, proxy = pair.partition(":")
                if not proxy or metric not in score_vectors:
                    raise InvalidParameter(
                        f"correlate entries are 'metric:proxy' over computed "
                        f"metrics, got {pair!r}")
                out.append(rank_correlation(score_vectors[metric], attrs,
                                            proxy).to_dict())
            return out

        correlations = stage("correlate", run_correlations)

    interventions = []
    if cfg.simulate:
        deep = {m: top_k(sv, sv.n) for m, sv in score_vectors.items()}
        interventions = stage("simulate",
                              lambda: _run_interventions(g, deep, cfg))

    report = AnalysisReport(
        version=_pkg_version,
        config=cfg.to_dict(),
        graph_summary={"nodes": g.n, "edges": g.num_edges,
                       "direction": g.direction,
                       "self_loops_dropped": g.self_loops_dropped},
        metrics=metric_summaries,
        overlap=overlap_dict,
        correlations=correlations,
        interventions=interventions,
        timings=timings,
    )

    def write_report():
        _io.write_json(report.to_report_dict(), out_dir / "report.json")
        _io.write_json(report.timings, out_dir / "timings.json")

    stage("report", write_report)
    if cfg.emit_plots:
        stage("emit_plots", lambda: emit_plot_data(report, out_dir))
    return report


def emit_plot_data(report, out_dir) -> list[Path]:
    """Write tabular series for external figure rendering.

    ``venn_regions.csv`` holds one row per overlap region (metric names
    joined by ``&``); ``topk_bars.csv`` holds per-metric top-k bars.
    """
    if isinstance(report, AnalysisReport):
        report = report.to_report_dict()
    overlap = report.get("overlap")
    if not overlap or not overlap.get("regions"):
        raise NothingToEmit("report has no overlap section")
    out_dir = Path(out_dir)

    import csv
    import io as _stringio

    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metrics", "count"])
    for region in overlap["regions"]:
        writer.writerow(["&".join(region["metrics"]), region["count"]])
    venn_path = out_dir / "venn_regions.csv"
    _io.write_atomic(venn_path, buf.getvalue())

    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "rank", "node_label", "score"])
    for metric in sorted(report.get("metrics", {})):
        for row in report["metrics"][metric]["top"]:
            writer.writerow([metric, row["rank"], row["node"], repr(row["score"])])
    bars_path = out_dir / "topk_bars.csv"
    _io.write_atomic(bars_path, buf.getvalue())
    return [venn_path, bars_path]
