"""Benchmark runner: suites, method grids, verdict collection, reports.

Benchmark rows are always direct model-generation rows (template routing is
disabled here so the keyword engine cannot mask model behavior); every
task x method x trial produces exactly one record, provider outages
included. Records persist as line-delimited JSON plus CSV summaries.
"""
from __future__ import annotations

import csv
import json
import random
import statistics
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import evaluation, gateway, scene as scene_mod, stats
from .chains import OperationChain, chain_from_spec
from .evaluation import ParseOutcome, check_parse
from .gateway import CompletionRecord, Provider, PromptStrategy, RetryPolicy
from .scene import Scene

ENDPOINTS = ("parse", "semantic", "fidelity", "exact_placement")

# Table of per-block completion budgets used by the protocol snapshot
# (Shenlong / Simple / Euclidean order within each block).
CORE33_MAX_TOKENS = {
    "5-object": (500, 300, 400),
    "stress": (500, 500, 500),
    "10-object": (500, 400, 500),
    "accuracy": (300, 300, 300),
    "100-object": (600, 600, 600),
}

RETRY_DEFAULTS = {"run_one_retries": 2, "stress_max_shots": 3}
TEMPERATURE_SCHEDULE = "0.1 + 0.05 * attempt"


class SuiteError(ValueError):
    pass


@dataclass(frozen=True)
class TaskDef:
    id: str
    instruction: str
    expected_chain: Optional[OperationChain] = None
    chain_object: Optional[str] = None
    semantic_rules: tuple = ()
    expected_positions: dict = field(default_factory=dict)
    scene: Optional[str] = None  # per-task scene override
    context_limit: Optional[int] = None


@dataclass(frozen=True)
class BenchmarkSuite:
    name: str
    tasks: tuple[TaskDef, ...]
    methods: tuple[str, ...]
    policy_k: int
    trials_per_task: int
    scene_fixture: str = "default"
    context_limit: Optional[int] = None

    def __post_init__(self):
        if not self.tasks:
            raise SuiteError("suite has no tasks")
        if not self.methods:
            raise SuiteError("suite has no methods")
        if self.trials_per_task < 1:
            raise SuiteError("trials_per_task must be >= 1")
        if self.policy_k < 1:
            raise SuiteError("policy_k must be >= 1")


def generate_large_scene(n: int, seed: int) -> Scene:
    """Seeded procedural scene: uniform centers in [-20, 20]^3, sizes in
    [0.5, 1.5], unique color-shape names. Not a paper-specified layout."""
    rng = random.Random(seed)
    objects = {}
    colors = ("red", "blue", "green", "yellow", "purple", "orange", "cyan",
              "magenta", "white", "black")
    for i in range(n):
        shape = "sphere" if rng.random() < 0.5 else "cube"
        color = colors[i % len(colors)]
        name = f"{color.capitalize()}{shape.capitalize()}{i:03d}"
        objects[name] = scene_mod.SceneObject(
            name=name,
            shape=shape,
            color=color,
            center=tuple(rng.uniform(-20.0, 20.0) for _ in range(3)),
            size=rng.uniform(0.5, 1.5),
        )
    return Scene(objects=objects, revision=0)


def resolve_scene(fixture: str, seed: int) -> Scene:
    if fixture == "default":
        return scene_mod.default_scene()
    if fixture.startswith("large:"):
        try:
            n = int(fixture.split(":", 1)[1])
        except ValueError:
            raise SuiteError(f"bad scene fixture {fixture!r}") from None
        return generate_large_scene(n, seed)
    raise SuiteError(f"unknown scene fixture {fixture!r}")


def load_suite(source: str | Path | dict) -> BenchmarkSuite:
    """Load a suite from a path, a packaged suite name, or a parsed dict."""
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        if not path.exists():
            packaged = resources.files("cgascene.data.suites").joinpath(f"{source}.json")
            if not packaged.is_file():
                raise SuiteError(f"no such suite file or packaged suite: {source!r}")
            doc = json.loads(packaged.read_text())
        else:
            doc = json.loads(path.read_text())
    try:
        tasks = []
        for t in doc["tasks"]:
            expected_chain = None
            if t.get("expected_chain"):
                expected_chain = chain_from_spec(t["expected_chain"])
            rules = tuple(evaluation.rule_from_spec(r) for r in t.get("semantic_rules", ()))
            tasks.append(
                TaskDef(
                    id=str(t["id"]),
                    instruction=t["instruction"],
                    expected_chain=expected_chain,
                    chain_object=t.get("chain_object"),
                    semantic_rules=rules,
                    expected_positions={
                        k: tuple(v) for k, v in t.get("expected_positions", {}).items()
                    },
                    scene=t.get("scene"),
                    context_limit=t.get("context_limit"),
                )
            )
        return BenchmarkSuite(
            name=doc["name"],
            tasks=tuple(tasks),
            methods=tuple(doc["methods"]),
            policy_k=int(doc.get("policy_k", 3)),
            trials_per_task=int(doc.get("trials_per_task", 1)),
            scene_fixture=doc.get("scene", "default"),
            context_limit=doc.get("context_limit"),
        )
    except KeyError as exc:
        raise SuiteError(f"suite is missing field {exc}") from exc


# -- per-attempt evaluation ------------------------------------------------------

@dataclass(frozen=True)
class AttemptVerdict:
    parse_ok: bool
    semantic_ok: Optional[bool] = None
    fidelity_ok: Optional[bool] = None
    exact_placement_ok: Optional[bool] = None
    spatial_error: Optional[float] = None
    diagnostics: tuple[str, ...] = ()

    def endpoint_ok(self, endpoint: str) -> Optional[bool]:
        if endpoint == "parse":
            return self.parse_ok
        value = getattr(self, f"{endpoint}_ok" if endpoint != "exact_placement"
                        else "exact_placement_ok")
        return value


def evaluate_attempt(raw_text: str, output_kind: str, task: TaskDef,
                     base_scene: Scene) -> tuple[AttemptVerdict, Optional[Scene]]:
    outcome: ParseOutcome = check_parse(raw_text, output_kind)
    if not outcome.parse_ok:
        return AttemptVerdict(parse_ok=False, diagnostics=outcome.diagnostics), None
    diagnostics = list(outcome.diagnostics)
    try:
        scene_after = evaluation.execute_parsed(base_scene, outcome.request)
    except Exception as exc:  # execution failure on a parse-valid request
        diagnostics.append(f"execution failed: {exc}")
        scene_after = base_scene

    semantic_ok = None
    if task.semantic_rules:
        try:
            semantic_ok = all(
                evaluation.check_semantic(rule, base_scene, scene_after)
                for rule in task.semantic_rules
            )
        except scene_mod.UnknownObjectError as exc:
            semantic_ok = False
            diagnostics.append(f"semantic rule references unknown object {exc}")

    exact_ok = None
    err_value = None
    if task.expected_positions:
        errors, exact_ok = evaluation.spatial_error(scene_after, task.expected_positions)
        err_value = max(errors.values())

    fidelity_ok = None
    if task.expected_chain is not None:
        try:
            actual = evaluation.extract_chain(
                outcome.request, output_kind, name=task.chain_object
            )
            fidelity_ok = evaluation.check_sequence_fidelity(task.expected_chain, actual)
        except Exception as exc:
            fidelity_ok = False
            diagnostics.append(f"chain extraction failed: {exc}")

    verdict = AttemptVerdict(
        parse_ok=True,
        semantic_ok=semantic_ok,
        fidelity_ok=fidelity_ok,
        exact_placement_ok=exact_ok,
        spatial_error=err_value,
        diagnostics=tuple(diagnostics),
    )
    return verdict, scene_after


# -- run records -------------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    suite: str
    task_id: str
    trial: int
    method: str
    route: str
    attempts: tuple[CompletionRecord, ...]
    attempt_verdicts: tuple[AttemptVerdict, ...]
    success_index: Optional[int]
    latency: dict
    tokens: dict
    defined_endpoints: tuple[str, ...] = ("parse",)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "task_id": self.task_id,
            "trial": self.trial,
            "method": self.method,
            "route": self.route,
            "attempts": [asdict(a) for a in self.attempts],
            "attempt_verdicts": [asdict(v) for v in self.attempt_verdicts],
            "success_index": self.success_index,
            "latency": self.latency,
            "tokens": self.tokens,
            "defined_endpoints": list(self.defined_endpoints),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RunRecord":
        return cls(
            suite=doc["suite"],
            task_id=doc["task_id"],
            trial=doc["trial"],
            method=doc["method"],
            route=doc["route"],
            attempts=tuple(CompletionRecord(**a) for a in doc["attempts"]),
            attempt_verdicts=tuple(
                AttemptVerdict(
                    parse_ok=v["parse_ok"],
                    semantic_ok=v["semantic_ok"],
                    fidelity_ok=v["fidelity_ok"],
                    exact_placement_ok=v["exact_placement_ok"],
                    spatial_error=v["spatial_error"],
                    diagnostics=tuple(v["diagnostics"]),
                )
                for v in doc["attempt_verdicts"]
            ),
            success_index=doc["success_index"],
            latency=doc["latency"],
            tokens=doc["tokens"],
            defined_endpoints=tuple(doc.get("defined_endpoints", ("parse",))),
        )


def task_endpoints(task: TaskDef) -> tuple[str, ...]:
    endpoints = ["parse"]
    if task.semantic_rules:
        endpoints.append("semantic")
    if task.expected_chain is not None:
        endpoints.append("fidelity")
    if task.expected_positions:
        endpoints.append("exact_placement")
    return tuple(endpoints)


def run_suite(
    suite: BenchmarkSuite,
    provider: Provider,
    strategies: Optional[dict[str, PromptStrategy]] = None,
    out_dir: Optional[str | Path] = None,
    seed: int = 0,
) -> list[RunRecord]:
    """Execute the full task x method x trial grid against the provider.

    Retries stop at the first parse-valid attempt (the retry budget exists
    to absorb malformed output); every attempt is evaluated and recorded so
    pass@k can be aggregated after the fact.
    """
    strategies = strategies or gateway.load_strategies()
    unknown = [m for m in suite.methods if m not in strategies]
    if unknown:
        raise SuiteError(f"unknown methods in suite: {unknown}")
    policy = RetryPolicy(max_attempts=suite.policy_k)
    records: list[RunRecord] = []
    sink = _RecordSink(out_dir) if out_dir else None
    try:
        for task in suite.tasks:
            base_scene = resolve_scene(task.scene or suite.scene_fixture, seed)
            limit = task.context_limit if task.context_limit is not None else suite.context_limit
            context = gateway.scene_context_render(base_scene, limit=limit)
            for method in suite.methods:
                strategy = strategies[method]
                for trial in range(suite.trials_per_task):
                    record = _run_one(
                        suite.name, task, trial, strategy, provider, context, base_scene, policy
                    )
                    records.append(record)
                    if sink:
                        sink.write(record)
    finally:
        if sink:
            sink.close()
    return records


def _run_one(suite_name, task, trial, strategy, provider, context, base_scene, policy):
    kind = strategy.output_kind
    outcome = gateway.complete(
        provider,
        strategy,
        context,
        task.instruction,
        policy,
        validator=lambda text: check_parse(text, kind).parse_ok,
    )
    t0 = time.perf_counter()
    verdicts = []
    final_scene = base_scene
    for rec in outcome.records:
        verdict, scene_after = evaluate_attempt(rec.raw_text, kind, task, base_scene)
        verdicts.append(verdict)
        if scene_after is not None:
            final_scene = scene_after
    parse_execute_s = time.perf_counter() - t0
    t1 = time.perf_counter()
    scene_mod.scene_to_document(final_scene)
    render_ready_s = time.perf_counter() - t1
    api_s = sum(rec.api_latency_s for rec in outcome.records)
    accepted = outcome.accepted
    return RunRecord(
        suite=suite_name,
        task_id=task.id,
        trial=trial,
        method=strategy.name,
        route="llm",
        attempts=outcome.records,
        attempt_verdicts=tuple(verdicts),
        success_index=outcome.success_index,
        latency={
            "api_s": api_s,
            "parse_execute_s": parse_execute_s,
            "render_ready_s": render_ready_s,
            "total_s": api_s + parse_execute_s + render_ready_s,
        },
        tokens={
            "completion_accepted": accepted.completion_tokens if accepted else None,
            "total_all_attempts": sum(
                rec.prompt_tokens + rec.completion_tokens for rec in outcome.records
            ),
        },
        defined_endpoints=task_endpoints(task),
    )


class _RecordSink:
    """Append-safe line-delimited record writer (single writer)."""

    def __init__(self, out_dir: str | Path):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._fh = (self.dir / "records.jsonl").open("w")

    def write(self, record: RunRecord) -> None:
        self._fh.write(json.dumps(record.to_json()) + "\n")

    def close(self) -> None:
        self._fh.close()


def load_records(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(RunRecord.from_json(json.loads(line)))
    return records


# -- aggregation ---------------------------------------------------------------------

@dataclass(frozen=True)
class MethodAggregate:
    method: str
    endpoint: str
    successes: int
    n: int
    rate: float
    wilson_ci: tuple[float, float]
    avg_completion_tokens_success_rows: Optional[float]
    avg_total_tokens_all_attempts: float
    latency_total: dict
    latency_api_mean: float
    template_routed: int

    def to_json(self) -> dict:
        return asdict(self)


def _row_success(record: RunRecord, endpoint: str, k: int) -> Optional[bool]:
    """pass@k: any accepted-by-endpoint attempt among the first k.

    Returns None when the task never defined this endpoint (excluded from
    the aggregate denominator); a parse-failed attempt counts as a failure
    for every endpoint, preserving the verdict layering.
    """
    if endpoint not in record.defined_endpoints:
        return None
    for verdict in record.attempt_verdicts[:k]:
        if verdict.endpoint_ok(endpoint):
            return True
    return False


def _latency_stats(values: Sequence[float]) -> dict:
    if not values:
        return {"mean": 0.0, "sd": 0.0, "median": 0.0, "iqr": 0.0}
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    median = statistics.median(values)
    if len(values) > 1:
        q = statistics.quantiles(values, n=4, method="inclusive")
        iqr = q[2] - q[0]
    else:
        iqr = 0.0
    return {"mean": mean, "sd": sd, "median": median, "iqr": iqr}


def aggregate(records: Iterable[RunRecord], endpoint: str, policy_k: Optional[int] = None
              ) -> dict[str, MethodAggregate]:
    """Per-method pass@k success with Wilson CI and cost statistics.

    Completion tokens average over parse-success rows only; total tokens
    average over all attempts of all rows.
    """
    if endpoint not in ENDPOINTS:
        raise ValueError(f"unknown endpoint {endpoint!r}")
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    by_method: dict[str, list[RunRecord]] = {}
    for record in records:
        by_method.setdefault(record.method, []).append(record)
    out: dict[str, MethodAggregate] = {}
    for method, rows in by_method.items():
        k = policy_k if policy_k is not None else max(len(r.attempt_verdicts) for r in rows)
        successes = 0
        n = 0
        comp_tokens = []
        total_tokens = []
        totals = []
        apis = []
        template_routed = 0
        for row in rows:
            ok = _row_success(row, endpoint, k)
            if ok is not None:
                n += 1
                successes += int(ok)
            if row.success_index is not None and row.success_index < k:
                tokens = row.tokens.get("completion_accepted")
                if tokens is not None:
                    comp_tokens.append(tokens)
            total_tokens.append(row.tokens.get("total_all_attempts", 0))
            totals.append(row.latency["total_s"])
            apis.append(row.latency["api_s"])
            if row.route == "template":
                template_routed += 1
        if n == 0:
            continue
        out[method] = MethodAggregate(
            method=method,
            endpoint=endpoint,
            successes=successes,
            n=n,
            rate=successes / n,
            wilson_ci=stats.wilson_ci(successes, n),
            avg_completion_tokens_success_rows=(
                statistics.fmean(comp_tokens) if comp_tokens else None
            ),
            avg_total_tokens_all_attempts=statistics.fmean(total_tokens),
            latency_total=_latency_stats(totals),
            latency_api_mean=statistics.fmean(apis),
            template_routed=template_routed,
        )
    return out


# -- pairwise report ------------------------------------------------------------------

@dataclass(frozen=True)
class PairwiseRow:
    endpoint: str
    method_a: str
    method_b: str
    successes_a: int
    n_a: int
    successes_b: int
    n_b: int
    rate_a: float
    rate_b: float
    risk_diff_pp: float
    relative_risk: float
    odds_ratio: float
    fisher_p: float

    def to_json(self) -> dict:
        return asdict(self)


def pairwise_report(aggregates: dict[str, MethodAggregate],
                    contrasts: Sequence[tuple[str, str]]) -> list[PairwiseRow]:
    """One row per ordered contrast with the full pairwise-matrix columns.

    Relative risk and odds ratio use the Haldane +0.5 correction on every
    cell (the convention of the pairwise matrices, which must stay finite
    for saturated arms); the headline effect sizes in stats.effect_sizes
    stay uncorrected.
    """
    rows = []
    for method_a, method_b in contrasts:
        for name in (method_a, method_b):
            if name not in aggregates:
                raise ValueError(f"unknown method {name!r} in contrasts")
        agg_a, agg_b = aggregates[method_a], aggregates[method_b]
        summary = stats.ContingencySummary(
            successes_a=agg_a.successes, n_a=agg_a.n,
            successes_b=agg_b.successes, n_b=agg_b.n,
        )
        rows.append(
            PairwiseRow(
                endpoint=agg_a.endpoint,
                method_a=method_a,
                method_b=method_b,
                successes_a=agg_a.successes,
                n_a=agg_a.n,
                successes_b=agg_b.successes,
                n_b=agg_b.n,
                rate_a=agg_a.rate,
                rate_b=agg_b.rate,
                risk_diff_pp=100.0 * (agg_a.rate - agg_b.rate),
                relative_risk=stats.relative_risk(summary, haldane=True),
                odds_ratio=stats.odds_ratio(summary, haldane=True),
                fisher_p=stats.fisher_exact_two_sided(summary),
            )
        )
    return rows


def write_summary_csv(aggregates: dict[str, MethodAggregate], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([
            "method", "endpoint", "successes", "n", "rate", "wilson_lo", "wilson_hi",
            "avg_completion_tokens_success_rows", "avg_total_tokens_all_attempts",
            "latency_mean_s", "latency_sd_s", "latency_median_s", "latency_iqr_s",
            "template_routed",
        ])
        for agg in aggregates.values():
            writer.writerow([
                agg.method, agg.endpoint, agg.successes, agg.n, f"{agg.rate:.6f}",
                f"{agg.wilson_ci[0]:.6f}", f"{agg.wilson_ci[1]:.6f}",
                "" if agg.avg_completion_tokens_success_rows is None
                else f"{agg.avg_completion_tokens_success_rows:.2f}",
                f"{agg.avg_total_tokens_all_attempts:.2f}",
                f"{agg.latency_total['mean']:.4f}", f"{agg.latency_total['sd']:.4f}",
                f"{agg.latency_total['median']:.4f}", f"{agg.latency_total['iqr']:.4f}",
                agg.template_routed,
            ])


def write_pairwise_csv(rows: Sequence[PairwiseRow], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([
            "endpoint", "method_a", "method_b", "rate_a", "rate_b",
            "risk_difference_pp", "relative_risk", "odds_ratio", "fisher_p",
        ])
        for row in rows:
            writer.writerow([
                row.endpoint, row.method_a, row.method_b,
                f"{row.rate_a:.6f}", f"{row.rate_b:.6f}", f"{row.risk_diff_pp:.2f}",
                f"{row.relative_risk:.4f}", f"{row.odds_ratio:.4f}", f"{row.fisher_p:.6f}",
            ])


# -- protocol snapshot -----------------------------------------------------------------

def protocol_snapshot(config: Optional[gateway.GatewayConfig] = None,
                      seed: int = 0) -> dict:
    """The fixed-settings document: model, prompt lengths, temperature
    schedule, retry defaults, and per-block token budgets. Pure function of
    the configuration."""
    config = config or gateway.GatewayConfig()
    strategies = gateway.load_strategies(config.max_tokens)
    order = ("simple_cga", "shenlong_cga", "euclidean_mat4", "compact_se3")
    prompt_lengths = {name: len(strategies[name].system_prompt) for name in order}
    return {
        "model": config.model,
        "provider": config.provider,
        "prompt_lengths": prompt_lengths,
        "prompt_lengths_row": " / ".join(str(prompt_lengths[name]) for name in order),
        "temperature_schedule": TEMPERATURE_SCHEDULE,
        "retry_defaults": dict(RETRY_DEFAULTS),
        "core33_max_tokens": {k: list(v) for k, v in CORE33_MAX_TOKENS.items()},
        "strategy_max_tokens": {name: strategies[name].max_tokens for name in order},
        "seed": seed,
    }
