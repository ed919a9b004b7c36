"""Batch entry points: induce, evaluate (baseline/ablation matrix), serve,
proxy-run.

Configuration comes from a flat key=value file named by SLOTFORGE_CONFIG (or
--config) with command-line flags winning over file values. All results are
printed without wall-clock content, so identical inputs produce byte-identical
stdout.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .config import InductionConfig, ProviderSpec, canonical_method, load_config_file
from .corpus import load_corpus
from .errors import SlotforgeError
from .pipeline import run_induction
from .proxy import make_agent, run_episode
from .session import restore, snapshot
from .slotmap import render_f1_table, render_report_table

CONFIG_ENV = "SLOTFORGE_CONFIG"


def _method(name: str) -> str:
    try:
        return canonical_method(name)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _parse_scale(pairs: tuple[str, ...]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"--scale expects word=factor, got {pair!r}")
        word, _, factor = pair.partition("=")
        try:
            out[word.strip().lower()] = float(factor)
        except ValueError:
            raise click.UsageError(f"--scale factor must be numeric, got {factor!r}")
    return out


def _parse_seeds(spec: str) -> list[int]:
    spec = spec.strip()
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in spec.split(",") if s.strip()]


def _parse_providers(value: str | None) -> ProviderSpec:
    if not value or value == "builtin":
        return ProviderSpec(mode="builtin")
    if value.startswith(("http://", "https://")):
        return ProviderSpec(mode="http", url=value)
    return ProviderSpec(mode="fixture", path=value)


def _file_config(explicit: str | None) -> dict:
    path = explicit or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    if not Path(path).exists():
        raise click.UsageError(f"config file not found: {path}")
    return load_config_file(path)


def _build_config(file_cfg: dict, **flags) -> InductionConfig:
    merged: dict = {}
    for key in ("k", "seed", "method", "tau", "top_k", "theta"):
        if key in file_cfg:
            merged[key] = file_cfg[key]
    if "scale" in file_cfg:
        merged["scale"] = dict(file_cfg["scale"])
    for key, value in flags.items():
        if value is None:
            continue
        if key == "scale":
            merged.setdefault("scale", {})
            merged["scale"].update(value)
        else:
            merged[key] = value
    providers = merged.pop("providers", None)
    config = InductionConfig(**merged)
    if providers is not None:
        config.providers = providers
    return config


@click.group()
def cli():
    """Question-driven template induction over raw document collections."""


corpus_option = click.option("--corpus", "corpus_path", required=True, help="corpus file")
format_option = click.option("--format", "format_id", default="jsonl",
                             type=click.Choice(["jsonl", "triples"]), show_default=True)
common_options = [
    click.option("--k", type=int, default=None, help="cluster count (default: |slot inventory|)"),
    click.option("--top-k", "top_k", type=int, default=None, help="global representatives per cluster"),
    click.option("--tau", type=float, default=None, help="document-representative cosine threshold"),
    click.option("--theta", type=float, default=None, help="fuzzy-match threshold for evaluation"),
    click.option("--scale", "scale", multiple=True, metavar="WORD=FACTOR",
                 help="upweight a token (repeatable)"),
    click.option("--providers", "providers", default=None,
                 help="builtin | fixture jsonl path | http(s) url"),
    click.option("--config", "config_path", default=None,
                 help=f"flat key=value config file (or ${CONFIG_ENV})"),
]


def add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@cli.command()
@corpus_option
@format_option
@add_options(common_options)
@click.option("--seed", type=int, default=None)
@click.option("--method", default=None, help="random | ai-only | ai-only+bl | ai-only+bl+sc")
@click.option("--out", "out_path", default=None, help="write the session snapshot here")
def induce(corpus_path, format_id, k, top_k, tau, theta, scale, providers, config_path,
           seed, method, out_path):
    """Run the full induction pipeline and print the evaluation report."""
    file_cfg = _file_config(config_path)
    config = _build_config(
        file_cfg, k=k, top_k=top_k, tau=tau, theta=theta,
        scale=_parse_scale(scale) if scale else None,
        seed=seed, method=_method(method) if method else None,
        providers=_parse_providers(providers) if providers else None,
    )
    corpus = load_corpus(corpus_path, format_id)
    session = run_induction(corpus, config)
    if out_path:
        snapshot(session, out_path)
        click.echo(f"snapshot written to {out_path}")
    click.echo(render_report_table({config.method: session.report},
                                   sorted(corpus.slot_inventory)))
    counts = session.stage_counts
    click.echo(
        f"documents={counts.get('documents', 0)} questions={counts.get('questions', 0)} "
        f"clusters={counts.get('clusters', 0)}"
    )


@cli.command()
@corpus_option
@format_option
@add_options(common_options)
@click.option("--seeds", default="1", show_default=True, help="e.g. 1..10 or 1,2,3")
@click.option("--methods", default="random,ai-only,ai-only+bl,ai-only+bl+sc", show_default=True)
def evaluate(corpus_path, format_id, k, top_k, tau, theta, scale, providers, config_path,
             seeds, methods):
    """Run the method x seed matrix and print mean per-slot F1 (Table-style)."""
    file_cfg = _file_config(config_path)
    seed_list = _parse_seeds(seeds)
    if not seed_list:
        raise click.UsageError("--seeds parsed to an empty list")
    method_list = [_method(m) for m in methods.split(",") if m.strip()]
    if not method_list:
        raise click.UsageError("--methods parsed to an empty list")
    corpus = load_corpus(corpus_path, format_id)
    slots = sorted(corpus.slot_inventory)
    rows: dict[str, dict[str, float]] = {}
    for method in method_list:
        per_slot_sums = {slot: 0.0 for slot in slots}
        micro_sum = 0.0
        macro_sum = 0.0
        for seed in seed_list:
            config = _build_config(
                file_cfg, k=k, top_k=top_k, tau=tau, theta=theta,
                scale=_parse_scale(scale) if scale else None,
                seed=seed, method=method,
                providers=_parse_providers(providers) if providers else None,
            )
            report = run_induction(corpus, config).report
            for slot in slots:
                per_slot_sums[slot] += report.per_slot[slot].f1
            micro_sum += report.micro.f1
            macro_sum += report.macro_f1
        n = len(seed_list)
        rows[method] = {slot: per_slot_sums[slot] / n for slot in slots}
        rows[method]["micro-F1"] = micro_sum / n
        rows[method]["macro-F1"] = macro_sum / n
    click.echo(f"seeds: {','.join(map(str, seed_list))}")
    click.echo(render_f1_table(rows, slots))


@cli.command()
@click.option("--store-dir", default="sessions", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(store_dir, host, port):
    """Start the HTTP service (and the web UI when its assets are built)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store_dir), host=host, port=port)


@cli.command("proxy-run")
@click.option("--snapshot", "snapshot_path", required=True, help="session snapshot file")
@click.option("--agent", "agent_spec", default="gold", show_default=True,
              help="gold | random[:seed] | noisy[:epsilon] | fixture:PATH | http:URL")
@click.option("--budgets", default="0,5,10,15,20", show_default=True)
@click.option("--policy", default="recluster_only", show_default=True,
              type=click.Choice(["recluster_only", "recluster_plus_add"]))
@click.option("--rho", type=float, default=0.5, show_default=True,
              help="confidence threshold marking a question representative")
@click.option("--out", "out_path", default=None, help="trajectory CSV path (default: stdout)")
def proxy_run(snapshot_path, agent_spec, budgets, policy, rho, out_path):
    """Replay a proxy-human episode against a session snapshot."""
    session = restore(snapshot_path)
    spec = _parse_agent_spec(agent_spec)
    agent = make_agent(spec, session.corpus)
    budget_list = [int(b) for b in budgets.split(",") if b.strip()]
    trajectory = run_episode(session, agent, budgets=budget_list, policy=policy, rho=rho)
    csv_text = trajectory.to_csv()
    if out_path:
        Path(out_path).write_text(csv_text, "utf-8")
        click.echo(f"trajectory written to {out_path}")
    else:
        click.echo(csv_text, nl=False)


def _parse_agent_spec(value: str) -> dict:
    kind, _, arg = value.partition(":")
    if kind == "gold":
        return {"kind": "gold"}
    if kind == "random":
        return {"kind": "random", "seed": int(arg) if arg else 0}
    if kind == "noisy":
        return {"kind": "noisy", "epsilon": float(arg) if arg else 0.2}
    if kind == "fixture":
        if not arg:
            raise click.UsageError("fixture agent needs fixture:PATH")
        return {"kind": "fixture", "path": arg}
    if kind == "http":
        if not arg:
            raise click.UsageError("http agent needs http:URL")
        return {"kind": "http", "url": arg if arg.startswith("http") else f"http:{arg}"}
    raise click.UsageError(f"unknown agent kind {kind!r}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="slotforge", standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return 0 if exc.exit_code == 0 else 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except SlotforgeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
