"""Operator CLI: serve, scan, review, bench, corpus, synthesize."""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

import click

from ..gateway import FixtureBackend, LLMGateway, RetryPolicy
from ..guard import (
    AttackCategory,
    GuardConfig,
    build_corpus,
    scan as guard_scan,
    synthesize_attack,
)
from ..model import SubmissionKind, SubmissionVersion, utc_now
from ..pairwise import Mitigation, evaluate_benchmark, format_result_table, load_pairs
from ..review import review_single
from ..metareview import run_meta_review
from .config import load_config
from .stubs import demo_gateway

_CATEGORY_BY_NAME = {c.value: c for c in AttackCategory}


def _gateway(fixtures: str | None) -> LLMGateway:
    if fixtures:
        return LLMGateway(
            FixtureBackend(fixtures), retry=RetryPolicy(max_attempts=1, sleep=lambda s: None)
        )
    return demo_gateway()


@click.group()
def main() -> None:
    """Self-hostable engine for agent-driven research review."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_path, host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .app import create_app

    config = load_config(config_path)
    uvicorn.run(
        create_app(config), host=host or config.host, port=port or config.port
    )


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", type=float, default=None, help="Risk-score threshold.")
@click.option("--json", "as_json", is_flag=True, help="Emit the full JSON report.")
@click.option("--no-semantic", is_flag=True, help="Skip the semantic stage.")
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False), default=None,
              help="Fixture dir for the semantic-stage model.")
def scan(file, threshold, as_json, no_semantic, fixtures) -> None:
    """Scan a PDF for prompt-injection content. Exit 0 clean, 2 flagged, 1 error."""
    config = GuardConfig(semantic=not no_semantic)
    if threshold is not None:
        config = GuardConfig(threshold=threshold, semantic=not no_semantic)
    gateway = _gateway(fixtures) if (fixtures and not no_semantic) else None
    try:
        report = guard_scan(Path(file).read_bytes(), config, gateway)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if as_json:
        click.echo(report.to_json(indent=2, sort_keys=True))
    else:
        verdict = "FLAGGED" if report.flagged else "clean"
        click.echo(
            f"{verdict}  score={report.risk_score:.2f} threshold={report.threshold:.2f} "
            f"categories={sorted(c.value for c in report.categories)}"
        )
    sys.exit(2 if report.flagged else 0)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(["proposal", "paper"]), default="proposal")
@click.option("--mode", type=click.Choice(["single", "meta"]), default="single")
@click.option("--model", default="model-a")
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False), default=None)
def review(file, kind, mode, model, fixtures) -> None:
    """Review a plain-text document and print the JSON report."""
    body = Path(file).read_text(encoding="utf-8")
    version = SubmissionVersion(version=1, body=body, created_at=utc_now())
    gateway = _gateway(fixtures)
    submission_kind = SubmissionKind(kind)
    if mode == "meta":
        report = run_meta_review(version, submission_kind, model, gateway).to_dict()
    else:
        report = review_single(version, submission_kind, model, gateway).to_dict()
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@click.argument("pairs_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", default="model-a")
@click.option(
    "--mitigation",
    type=click.Choice([m.value for m in Mitigation]),
    default=Mitigation.BOTH_ORDERS.value,
)
@click.option("--seed", type=int, default=0)
@click.option("--filter-borderline", is_flag=True)
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False), default=None)
def bench(pairs_file, model, mitigation, seed, filter_borderline, fixtures) -> None:
    """Run the pairwise benchmark over a JSONL pair file."""
    pairs = load_pairs(pairs_file, filter_borderline=filter_borderline)
    result = evaluate_benchmark(
        pairs, model, _gateway(fixtures), mitigation=Mitigation(mitigation), seed=seed
    )
    click.echo(format_result_table({model: result}))


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--category", type=click.Choice(sorted(_CATEGORY_BY_NAME)), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def synthesize(file, category, seed, out) -> None:
    """Inject a synthetic attack of the given category into a clean PDF."""
    data = synthesize_attack(Path(file).read_bytes(), _CATEGORY_BY_NAME[category], seed)
    out_path = Path(out) if out else Path(file).with_suffix(f".{category.lower()}.pdf")
    out_path.write_bytes(data)
    click.echo(str(out_path))


@main.command()
@click.option("--clean-dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--attack-rate", type=float, default=0.35, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def corpus(clean_dir, out_dir, attack_rate, seed) -> None:
    """Build an evaluation corpus from a directory of clean PDFs."""
    paths = sorted(Path(clean_dir).glob("*.pdf"))
    if not paths:
        click.echo("error: no PDFs in clean dir", err=True)
        sys.exit(1)
    entries = build_corpus(
        [p.read_bytes() for p in paths], attack_rate=attack_rate, seed=seed
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for entry in entries:
        name = f"doc_{entry.source_index:04d}.pdf"
        (out / name).write_bytes(entry.data)
        manifest.append(
            {
                "file": name,
                "source": paths[entry.source_index].name,
                "category": entry.category.value if entry.category else None,
            }
        )
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )
    hist = Counter(m["category"] for m in manifest if m["category"])
    total_attacks = sum(hist.values())
    click.echo(f"{len(manifest)} documents, {total_attacks} adversarial")
    for name in sorted(hist, key=lambda n: -hist[n]):
        click.echo(f"  {name:<16} {hist[name]}")


if __name__ == "__main__":
    main()
