"""Benchmark command line: run suites, build reports, print the protocol
snapshot.

Exit status is nonzero only for configuration errors (bad suite, unknown
method, missing fixture); task failures are data, not errors.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench, gateway


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Scene-editing representation benchmark."""


@main.command()
@click.option("--suite", required=True, help="suite file path or packaged suite name")
@click.option("--methods", default=None, help="comma-separated method subset")
@click.option("--policy-k", type=int, default=None, help="retry budget override")
@click.option("--trials", type=int, default=None, help="trials-per-task override")
@click.option("--provider", type=click.Choice(["live", "mock"]), default="mock")
@click.option("--fixture", default=None, help="mock fixture path or packaged fixture name")
@click.option("--model", default="gpt-4o-mini", help="live model name")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=0)
def run(suite, methods, policy_k, trials, provider, fixture, model, out_dir, seed):
    """Run a benchmark suite and persist records + per-endpoint summaries."""
    try:
        suite_def = bench.load_suite(suite)
    except (bench.SuiteError, json.JSONDecodeError, OSError) as exc:
        _fail(f"cannot load suite: {exc}")
    overrides = {}
    if methods:
        overrides["methods"] = tuple(m.strip() for m in methods.split(",") if m.strip())
    if policy_k is not None:
        overrides["policy_k"] = policy_k
    if trials is not None:
        overrides["trials_per_task"] = trials
    if overrides:
        from dataclasses import replace
        try:
            suite_def = replace(suite_def, **overrides)
        except bench.SuiteError as exc:
            _fail(str(exc))
    try:
        if provider == "mock":
            fixture_path = _resolve_fixture(fixture)
            provider_obj = gateway.MockProvider(fixture_path)
        else:
            provider_obj = gateway.OpenAICompatProvider(model=model)
        records = bench.run_suite(suite_def, provider_obj, out_dir=out_dir, seed=seed)
    except (bench.SuiteError, gateway.GatewayError) as exc:
        _fail(str(exc))
    out = Path(out_dir)
    for endpoint in bench.ENDPOINTS:
        try:
            aggregates = bench.aggregate(records, endpoint, policy_k=suite_def.policy_k)
        except ValueError:
            continue
        if aggregates:
            bench.write_summary_csv(aggregates, out / f"summary_{endpoint}.csv")
    snapshot = bench.protocol_snapshot(
        gateway.GatewayConfig(provider=provider, model=model), seed=seed
    )
    (out / "protocol_snapshot.json").write_text(json.dumps(snapshot, indent=2) + "\n")
    click.echo(f"wrote {len(records)} records to {out / 'records.jsonl'}")


def _resolve_fixture(fixture: str | None) -> str:
    if not fixture:
        _fail("mock provider needs --fixture")
    path = Path(fixture)
    if path.exists():
        return str(path)
    from importlib import resources
    packaged = resources.files("cgascene.data.fixtures").joinpath(f"{fixture}.json")
    if packaged.is_file():
        return str(packaged)
    _fail(f"no such fixture file or packaged fixture: {fixture!r}")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(exists=True))
@click.option("--endpoint", type=click.Choice(list(bench.ENDPOINTS)), default="parse")
@click.option("--policy-k", type=int, default=None)
@click.option("--contrasts", default=None,
              help="comma-separated a:b method pairs for the pairwise table")
@click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False))
def report(records_path, endpoint, policy_k, contrasts, out_dir):
    """Aggregate stored records and print (optionally persist) the report."""
    records = bench.load_records(records_path)
    try:
        aggregates = bench.aggregate(records, endpoint, policy_k=policy_k)
    except ValueError as exc:
        _fail(str(exc))
    for agg in aggregates.values():
        lo, hi = agg.wilson_ci
        click.echo(
            f"{agg.method:>20} {endpoint}: {agg.successes}/{agg.n} "
            f"({100 * agg.rate:.1f}% [{100 * lo:.1f}%, {100 * hi:.1f}%])"
        )
    rows = []
    if contrasts:
        try:
            pairs = [tuple(pair.split(":", 1)) for pair in contrasts.split(",") if pair]
            rows = bench.pairwise_report(aggregates, pairs)
        except ValueError as exc:
            _fail(str(exc))
        for row in rows:
            click.echo(
                f"{row.method_a} vs {row.method_b}: "
                f"RD {row.risk_diff_pp:+.1f}pp RR {row.relative_risk:.3f} "
                f"OR {row.odds_ratio:.3f} Fisher p={row.fisher_p:.4f}"
            )
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        bench.write_summary_csv(aggregates, out / f"summary_{endpoint}.csv")
        if rows:
            bench.write_pairwise_csv(rows, out / f"pairwise_{endpoint}.csv")


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", type=int, default=0)
def snapshot(config_path, seed):
    """Print the protocol snapshot for the current configuration."""
    try:
        config = gateway.load_gateway_config(config_path)
    except gateway.GatewayError as exc:
        _fail(str(exc))
    click.echo(json.dumps(bench.protocol_snapshot(config, seed=seed), indent=2))


if __name__ == "__main__":
    main()
