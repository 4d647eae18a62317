"""Seeded experiment harness: configs, sweeps, CSV, and plot data.

A sweep runs a grid of sample sizes times trial repetitions on one fixed
instance (graph, concept class, distribution rule, learner mode).  Every
trial's seed is derived from the base seed and the cell coordinates with a
documented splitmix64 chain, so re-running a config reproduces every
output byte.  Wall-clock times are recorded only when ``record_timings``
is set; otherwise the runtime column is a constant 0 to keep CSV output
byte-identical across runs.
"""

import hashlib
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from .concepts import (
    Concept,
    ConceptClass,
    ExplicitClass,
    FullClass,
    SingletonClass,
    ThresholdClass,
    concept_class_from_json,
    load_concept_class,
)
from .errors import ConfigError
from .graphs import (
    DirectedGraph,
    complete_bidirected_graph,
    edgeless_graph,
    load_graph,
    path_graph,
    star_graph,
    tournament_graph,
)
from .hardness import (
    BichromaticInstance,
    gen_bichromatic_instance,
    perturbed_distribution,
    sample_sign_string,
)
from .learner import choose_k, fit_amplified, fit_erm, fit_neighbor_average
from .measure import (
    Distribution,
    LabeledSample,
    draw_sample,
    load_distribution,
    risk,
)
from .params import compute_param_report, theoretical_sample_bound
from .rng import mix_seed, philox

MODES = ("neighbor_avg", "amplified", "erm")
FAMILIES = ("edgeless", "complete", "tournament", "star", "path", "custom")

# Sub-stream tags for per-trial seed derivation.
_STREAM_CONCEPT = 1
_STREAM_SIGNS = 2
_STREAM_SAMPLE = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one sweep.

    ``concept`` picks the labeling per trial: ``{"kind": "index"}``,
    ``{"kind": "labels"}``, or ``{"kind": "random"}`` (uniform over the
    class, reseeded per trial).  ``distribution`` is ``uniform``,
    ``weights``, ``file``, or ``bichromatic`` (per-trial sign-string
    perturbation of the generated hard instance; requires a fixed
    concept).
    """

    family: str
    n: int
    m_grid: tuple[int, ...]
    trials: int
    base_seed: int
    mode: str = "neighbor_avg"
    concept_class: dict | None = None
    class_file: str | None = None
    concept: dict = field(default_factory=lambda: {"kind": "index", "index": 0})
    distribution: dict = field(default_factory=lambda: {"kind": "uniform"})
    graph_file: str | None = None
    dist_file: str | None = None
    eps: float = 0.1
    delta: float = 0.05
    c0: float = 8.0
    budget: int | None = None
    record_timings: bool = False
    workers: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = {"family", "n", "m_grid", "trials", "base_seed"} - set(doc)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        doc = dict(doc)
        doc["m_grid"] = tuple(doc["m_grid"])
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid config JSON: {exc.msg} (line {exc.lineno})")
        return cls.from_dict(doc)

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.family != "custom" and self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if not self.m_grid:
            raise ConfigError("m_grid must be non-empty")
        if any(m < 1 for m in self.m_grid):
            raise ConfigError("sample sizes must be positive")
        if any(a >= b for a, b in zip(self.m_grid, self.m_grid[1:])):
            raise ConfigError("m_grid must be strictly increasing")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0 < self.eps < 1):
            raise ConfigError("eps must lie in (0, 1)")
        if not (0 < self.delta < 1):
            raise ConfigError("delta must lie in (0, 1)")
        if self.mode == "amplified" and min(self.m_grid) < choose_k(self.delta):
            raise ConfigError(
                f"amplified mode with delta={self.delta} needs "
                f"m >= {choose_k(self.delta)} for its blocks"
            )
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("budget must be positive when given")
        if self.family == "custom" and not self.graph_file:
            raise ConfigError('family "custom" requires graph_file')
        kind = self.concept.get("kind")
        if kind not in ("index", "labels", "random"):
            raise ConfigError("concept kind must be index, labels, or random")
        dkind = self.distribution.get("kind")
        if dkind not in ("uniform", "weights", "file", "bichromatic"):
            raise ConfigError(
                "distribution kind must be uniform, weights, file, or bichromatic"
            )
        if dkind == "bichromatic" and kind == "random":
            raise ConfigError("bichromatic distribution needs a fixed concept")

    # Execution details that cannot change any risk value; the fingerprint
    # must identify the experiment, not how it was scheduled.
    _EXECUTION_FIELDS = frozenset({"workers", "record_timings"})

    def to_json(self) -> str:
        """Full-fidelity serialization (round-trips through from_json)."""
        doc = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in self.__dict__.items()
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def canonical_json(self) -> str:
        """Result-determining fields only, in a canonical encoding."""
        doc = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in self.__dict__.items()
            if k not in self._EXECUTION_FIELDS
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return ExperimentConfig.from_json(fh.read())


@dataclass(frozen=True)
class TrialRecord:
    fingerprint: str
    family: str
    n: int
    m: int
    trial: int
    seed: int
    mode: str
    risk: float
    alpha: int
    alpha1: int
    alpha2: int
    runtime_ms: int


@dataclass(frozen=True)
class AggregateRow:
    m: int
    mean: float
    median: float
    q10: float
    q90: float


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    fingerprint: str
    records: tuple[TrialRecord, ...]
    aggregates: tuple[AggregateRow, ...]
    alpha: int
    alpha1: int
    alpha2: int
    sample_bound: int


class ResolvedSweep:
    """Config materialized into objects, ready to run trials."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.graph = _build_graph(config)
        self.concept_class = _build_class(config, self.graph)
        self.fixed_concept = _fixed_concept(config, self.concept_class)
        self.bichromatic: BichromaticInstance | None = None
        dkind = config.distribution["kind"]
        if dkind == "bichromatic":
            eps = float(config.distribution.get("eps", config.eps))
            self.bichromatic = gen_bichromatic_instance(
                self.graph, self.fixed_concept, eps, config.budget
            )
            self.fixed_distribution = None
        else:
            self.fixed_distribution = _fixed_distribution(config, self.graph)
        report = compute_param_report(self.graph, self.concept_class, config.budget)
        self.alpha = report.alpha
        self.alpha1 = report.alpha1
        self.alpha2 = report.alpha2
        self.k = choose_k(config.delta) if config.mode == "amplified" else None

    def concept_for_trial(self, seed: int) -> Concept:
        if self.fixed_concept is not None:
            return self.fixed_concept
        cc = self.concept_class
        idx = int(philox(mix_seed(seed, _STREAM_CONCEPT)).integers(cc.size))
        return _concept_by_index(cc, idx)

    def distribution_for_trial(self, seed: int) -> Distribution:
        if self.bichromatic is not None:
            signs = sample_sign_string(
                self.bichromatic.k, mix_seed(seed, _STREAM_SIGNS)
            )
            return perturbed_distribution(self.bichromatic, signs)
        assert self.fixed_distribution is not None
        return self.fixed_distribution


def _build_graph(config: ExperimentConfig) -> DirectedGraph:
    family = config.family
    if family == "edgeless":
        return edgeless_graph(config.n)
    if family == "complete":
        return complete_bidirected_graph(config.n)
    if family == "tournament":
        return tournament_graph(config.n)
    if family == "star":
        # n counts all vertices: root plus n - 1 leaves.
        return star_graph(config.n - 1)
    if family == "path":
        return path_graph(config.n)
    g = load_graph(config.graph_file)
    if config.n and config.n != g.n:
        raise ConfigError(f"config n={config.n} but graph file has n={g.n}")
    return g


def _build_class(config: ExperimentConfig, g: DirectedGraph) -> ConceptClass:
    if config.concept_class is not None and config.class_file is not None:
        raise ConfigError("give either concept_class or class_file, not both")
    if config.class_file is not None:
        cc = load_concept_class(config.class_file)
    elif config.concept_class is not None:
        cc = concept_class_from_json(json.dumps(config.concept_class))
    else:
        cc = FullClass(g.n)
    if cc.n != g.n:
        raise ConfigError(f"class domain size {cc.n} != graph size {g.n}")
    return cc


def _concept_by_index(cc: ConceptClass, idx: int) -> Concept:
    if not (0 <= idx < cc.size):
        raise ConfigError(f"concept index {idx} out of range for class size {cc.size}")
    if isinstance(cc, FullClass):
        return Concept(tuple((idx >> v) & 1 for v in range(cc.n)))
    if isinstance(cc, ExplicitClass):
        return cc.concepts[idx]
    if isinstance(cc, SingletonClass):
        return cc.concept
    if isinstance(cc, ThresholdClass):
        return Concept(tuple(1 if v < idx else 0 for v in range(cc.n)))
    raise TypeError(f"not a concept class: {cc!r}")


def _fixed_concept(config: ExperimentConfig, cc: ConceptClass) -> Concept | None:
    spec = config.concept
    kind = spec["kind"]
    if kind == "random":
        return None
    if kind == "index":
        return _concept_by_index(cc, int(spec.get("index", 0)))
    labels = spec.get("labels")
    if labels is None:
        raise ConfigError('concept kind "labels" requires a labels array')
    c = Concept(tuple(labels))
    if c.n != cc.n:
        raise ConfigError(f"concept length {c.n} != domain size {cc.n}")
    return c


def _fixed_distribution(config: ExperimentConfig, g: DirectedGraph) -> Distribution:
    spec = config.distribution
    kind = spec["kind"]
    if kind == "uniform":
        return Distribution.uniform(g.n)
    if kind == "weights":
        weights = spec.get("weights")
        if weights is None or len(weights) != g.n:
            raise ConfigError(f'distribution kind "weights" needs {g.n} weights')
        try:
            return Distribution.normalized(weights)
        except ValueError as exc:
            raise ConfigError(f"bad weights: {exc}") from exc
    if kind == "file":
        path = spec.get("path") or config.dist_file
        if not path:
            raise ConfigError('distribution kind "file" requires a path')
        d = load_distribution(path)
        if d.n != g.n:
            raise ConfigError(f"distribution size {d.n} != graph size {g.n}")
        return d
    raise ConfigError(f"unsupported distribution kind {kind!r}")


def run_trial(resolved: ResolvedSweep, m: int, trial: int) -> TrialRecord:
    """One seeded cell: draw, fit, and score exactly."""
    config = resolved.config
    seed = mix_seed(config.base_seed, m, trial)
    concept = resolved.concept_for_trial(seed)
    dist = resolved.distribution_for_trial(seed)
    started = time.perf_counter()
    sample = draw_sample(dist, concept, m, mix_seed(seed, _STREAM_SAMPLE))
    if config.mode == "neighbor_avg":
        model = fit_neighbor_average(resolved.graph, resolved.concept_class, sample)
    elif config.mode == "amplified":
        model = fit_amplified(resolved.graph, resolved.concept_class, sample, resolved.k)
    else:
        # ERM splits the draw into a fitting half and a smoothing half.
        half = m // 2
        model = fit_erm(
            resolved.graph,
            resolved.concept_class,
            LabeledSample(sample.items[:half]),
            LabeledSample(sample.items[half:]),
        )
    value = risk(resolved.graph, dist, concept, model)
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return TrialRecord(
        fingerprint=config.fingerprint(),
        family=config.family,
        n=resolved.graph.n,
        m=m,
        trial=trial,
        seed=seed,
        mode=config.mode,
        risk=value,
        alpha=resolved.alpha,
        alpha1=resolved.alpha1,
        alpha2=resolved.alpha2,
        runtime_ms=elapsed_ms if config.record_timings else 0,
    )


_WORKER_RESOLVED: ResolvedSweep | None = None


def _init_worker(config_json: str) -> None:
    global _WORKER_RESOLVED
    _WORKER_RESOLVED = ResolvedSweep(ExperimentConfig.from_json(config_json))


def _run_cell(cell: tuple[int, int]) -> TrialRecord:
    assert _WORKER_RESOLVED is not None
    return run_trial(_WORKER_RESOLVED, cell[0], cell[1])


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Run all cells; records are ordered by (m, trial) regardless of workers."""
    resolved = ResolvedSweep(config)
    cells = [(m, t) for m in config.m_grid for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(
            max_workers=config.workers,
            initializer=_init_worker,
            initargs=(config.to_json(),),
        ) as pool:
            records = list(pool.map(_run_cell, cells, chunksize=8))
    else:
        records = [run_trial(resolved, m, t) for m, t in cells]
    records.sort(key=lambda r: (r.m, r.trial))
    aggregates = []
    for m in config.m_grid:
        risks = np.array([r.risk for r in records if r.m == m], dtype=float)
        aggregates.append(
            AggregateRow(
                m=m,
                mean=float(np.mean(risks)),
                median=float(np.median(risks)),
                q10=float(np.quantile(risks, 0.1, method="linear")),
                q90=float(np.quantile(risks, 0.9, method="linear")),
            )
        )
    bound = theoretical_sample_bound(
        resolved.alpha1, resolved.alpha2, config.eps, config.delta, config.c0
    )
    return SweepResult(
        config=config,
        fingerprint=config.fingerprint(),
        records=tuple(records),
        aggregates=tuple(aggregates),
        alpha=resolved.alpha,
        alpha1=resolved.alpha1,
        alpha2=resolved.alpha2,
        sample_bound=bound,
    )


CSV_HEADER = "family,n,m,trial,seed,mode,risk,alpha,alpha1,alpha2,runtime_ms"


def sweep_csv(result: SweepResult) -> str:
    """Records as CSV text; floats use repr so parsing round-trips exactly."""
    lines = [CSV_HEADER]
    for r in result.records:
        lines.append(
            f"{r.family},{r.n},{r.m},{r.trial},{r.seed},{r.mode},"
            f"{r.risk!r},{r.alpha},{r.alpha1},{r.alpha2},{r.runtime_ms}"
        )
    return "\n".join(lines) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file and rename, so failures leave no partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".condavg-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sweep_csv(result: SweepResult, path: str) -> None:
    write_text_atomic(path, sweep_csv(result))


def emit_plot_data(results: Sequence[SweepResult]) -> str:
    """Aggregate table per learner mode, in a comment-headed text format.

    Columns: m, mean risk, median risk, q10, q90, and the sample-size
    bound for the sweep's (eps, delta), constant within a series.
    """
    blocks = []
    for result in results:
        lines = [
            f"# series mode={result.config.mode} family={result.config.family} "
            f"fingerprint={result.fingerprint}",
            f"# eps={result.config.eps!r} delta={result.config.delta!r} "
            f"alpha1={result.alpha1} alpha2={result.alpha2} "
            f"sample_bound={result.sample_bound}",
            "# columns: m mean median q10 q90 sample_bound",
        ]
        for row in result.aggregates:
            lines.append(
                f"{row.m} {row.mean!r} {row.median!r} {row.q10!r} {row.q90!r} "
                f"{result.sample_bound}"
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def write_plot_data(results: Sequence[SweepResult], path: str) -> None:
    write_text_atomic(path, emit_plot_data(results))
