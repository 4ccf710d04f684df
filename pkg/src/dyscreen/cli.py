"""Operator command line: train, evaluate, calibrate, and serve screening models.

Every randomized command defaults to seed DEFAULT_SEED (never wall clock), so
repeated runs with the same flags produce identical output. Exit codes: 0 ok,
2 usage error, 3 data error, 4 internal error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .core import (
    VARIANTS,
    load_manifest,
    read_dataset,
    read_sessions,
    variant_by_name,
    write_dataset,
)
from .errors import DyscreenError
from .evaluation import (
    calibrate_threshold,
    cross_validate,
    question_importance,
    sweep as run_sweep,
    synth_generate,
    type_importance,
)
from .features import sessions_to_dataset
from .forest import TrainConfig, load_model, save_model, train
from .forest.training import class_weights, instance_weights

DEFAULT_SEED = 196

_VARIANT_CHOICE = click.Choice(sorted(VARIANTS), case_sensitive=True)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _kv_table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _ranked_table(header: tuple[str, str], rows: list[tuple[str, float]]) -> str:
    name_w = max(len(header[0]), *(len(n) for n, _ in rows)) if rows else len(header[0])
    lines = [f"{'#':>3}  {header[0].ljust(name_w)}  {header[1]}"]
    for rank, (name, value) in enumerate(rows, start=1):
        lines.append(f"{rank:>3}  {name.ljust(name_w)}  {value:8.3f}")
    return "\n".join(lines)


def _parse_depths(ctx, param, value: str) -> tuple:
    out = []
    for tok in value.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.lower() == "none":
            out.append(None)
            continue
        try:
            d = int(tok)
        except ValueError:
            raise click.BadParameter(f"depth {tok!r} is not an integer or 'none'")
        if d < 1:
            raise click.BadParameter(f"depth {d} must be >= 1")
        out.append(d)
    if not out:
        raise click.BadParameter("empty depth list")
    return tuple(out)


def _parse_mtrys(ctx, param, value: str) -> tuple:
    out = []
    for tok in value.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            m = int(tok)
        except ValueError:
            raise click.BadParameter(f"mtry {tok!r} is not an integer")
        if m < 1:
            raise click.BadParameter(f"mtry {m} must be >= 1")
        out.append(m)
    if not out:
        raise click.BadParameter("empty mtry list")
    return tuple(out)


_data_opt = click.option(
    "--data",
    "data_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Dataset CSV.",
)
_variant_opt = click.option(
    "--variant", "variant_name", default="Full", show_default=True, type=_VARIANT_CHOICE
)
_seed_opt = click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
_trees_opt = click.option(
    "--trees", default=200, show_default=True, type=click.IntRange(min=1)
)
_depth_opt = click.option(
    "--depth", default=None, type=click.IntRange(min=1), help="Tree depth cap; omit for unlimited."
)
_mtry_opt = click.option(
    "--mtry", default=None, type=click.IntRange(min=1), help="Features tried per split; default floor(log2 F)+1."
)
_jobs_opt = click.option(
    "--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Worker threads."
)
_grid_opt = click.option(
    "--threshold-grid",
    "grid_step",
    default=0.005,
    show_default=True,
    type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
    help="Step of the fixed threshold candidate grid.",
)


@click.group()
def cli() -> None:
    """Dyslexia screening pipeline: data, models, evaluation, service."""


@cli.command("train")
@_data_opt
@_variant_opt
@_trees_opt
@_depth_opt
@_mtry_opt
@_seed_opt
@_jobs_opt
@click.option("--threshold", default=None, type=click.FloatRange(min=0, max=1, min_open=True, max_open=True), help="Decision threshold to store; default 0.5.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Model artifact JSON.")
def train_cmd(data_path, variant_name, trees, depth, mtry, seed, jobs, threshold, out_path):
    """Fit a class-weighted random forest on a labeled CSV."""
    dataset = read_dataset(data_path, variant_by_name(variant_name))
    config = TrainConfig(n_trees=trees, max_depth=depth, mtry=mtry, seed=seed)
    model = train(dataset, config, n_jobs=jobs)
    if threshold is not None:
        model = model.with_threshold(threshold)
    save_model(model, out_path)
    n_pos = int(dataset.labels().sum())
    click.echo(
        _kv_table(
            [
                ("variant", model.variant.name),
                ("records", len(dataset.records)),
                ("positives", n_pos),
                ("trees", len(model.trees)),
                ("mtry", config.resolved_mtry(model.variant.feature_count)),
                ("threshold", model.threshold),
                ("artifact", out_path),
            ]
        )
    )


@cli.command("evaluate")
@_data_opt
@_variant_opt
@click.option("--k", default=10, show_default=True, type=click.IntRange(min=2))
@_seed_opt
@_trees_opt
@_depth_opt
@_mtry_opt
@_grid_opt
@_jobs_opt
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False, path_type=Path), help="Write the full report as JSON.")
def evaluate_cmd(data_path, variant_name, k, seed, trees, depth, mtry, grid_step, jobs, out_path):
    """Stratify-free k-fold cross-validation with pooled-score calibration."""
    dataset = read_dataset(data_path, variant_by_name(variant_name))
    config = TrainConfig(n_trees=trees, max_depth=depth, mtry=mtry, seed=seed)
    report = cross_validate(dataset, config, k=k, seed=seed, n_jobs=jobs, grid_step=grid_step)
    click.echo(report.text_table())
    if out_path is not None:
        out_path.write_text(report.to_json() + "\n", encoding="utf-8")


@cli.command("calibrate")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_data_opt
@_grid_opt
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False, path_type=Path), help="Write the recalibrated artifact; default: overwrite --model.")
def calibrate_cmd(model_path, data_path, grid_step, out_path):
    """Re-pick the decision threshold on a labeled holdout CSV."""
    model = load_model(model_path)
    dataset = read_dataset(data_path, model.variant)
    X, y = dataset.to_arrays()
    scores = model.predict_scores(X)
    w_pos, w_neg = class_weights(y)
    threshold = calibrate_threshold(scores, y, instance_weights(y, w_pos, w_neg), grid_step=grid_step)
    updated = model.with_threshold(threshold)
    target = out_path if out_path is not None else model_path
    save_model(updated, target)
    click.echo(
        _kv_table(
            [
                ("records", len(dataset.records)),
                ("old threshold", model.threshold),
                ("new threshold", threshold),
                ("artifact", target),
            ]
        )
    )


@cli.command("importance")
@_data_opt
@_variant_opt
@click.option("--by", "group_by", default="both", show_default=True, type=click.Choice(["question", "type", "both"]))
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False, path_type=Path))
def importance_cmd(data_path, variant_name, group_by, out_path):
    """Rank questions and task types by normalized information gain."""
    dataset = read_dataset(data_path, variant_by_name(variant_name))
    payload: dict = {}
    if group_by in ("question", "both"):
        ranking = question_importance(dataset)
        payload["question"] = [{"name": n, "importance": v} for n, v in ranking]
        click.echo(_ranked_table(("question", "importance"), ranking))
    if group_by in ("type", "both"):
        ranking = type_importance(dataset)
        payload["type"] = [{"name": n, "importance": v} for n, v in ranking]
        if group_by == "both":
            click.echo("")
        click.echo(_ranked_table(("type", "importance"), ranking))
    if out_path is not None:
        _write_json(out_path, payload)


@cli.command("sweep")
@_data_opt
@_variant_opt
@click.option("--depths", required=True, callback=_parse_depths, help="Comma list of depth caps; 'none' = unlimited.")
@click.option("--mtrys", required=True, callback=_parse_mtrys, help="Comma list of mtry values.")
@click.option("--k", default=10, show_default=True, type=click.IntRange(min=2))
@_seed_opt
@_trees_opt
@_jobs_opt
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False, path_type=Path))
def sweep_cmd(data_path, variant_name, depths, mtrys, k, seed, trees, jobs, out_path):
    """Cross-validate every (depth, mtry) cell on one shared fold partition."""
    dataset = read_dataset(data_path, variant_by_name(variant_name))
    cells = run_sweep(dataset, depths, mtrys, k=k, seed=seed, n_trees=trees, n_jobs=jobs)
    header = f"{'depth':>6}  {'mtry':>4}  {'roc_auc':>8}  {'bal_acc':>8}"
    click.echo(header)
    for cell in cells:
        depth_txt = "none" if cell.max_depth is None else str(cell.max_depth)
        click.echo(f"{depth_txt:>6}  {cell.mtry:>4}  {cell.roc_auc:8.4f}  {cell.balanced_accuracy:8.4f}")
    if out_path is not None:
        _write_json(
            out_path,
            {
                "cells": [
                    {
                        "max_depth": c.max_depth,
                        "mtry": c.mtry,
                        "roc_auc": c.roc_auc,
                        "balanced_accuracy": c.balanced_accuracy,
                    }
                    for c in cells
                ]
            },
        )


@cli.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--features", "features_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="CSV of rows to score; label column may be blank.")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False, path_type=Path))
def predict_cmd(model_path, features_path, out_path):
    """Score feature rows with a saved model; flag rows at or above threshold."""
    model = load_model(model_path)
    dataset = read_dataset(features_path, model.variant, allow_unlabeled=True)
    X = np.array([fv.values for _, fv in dataset.records], dtype=np.float64)
    scores = model.predict_scores(X)
    rows = []
    id_w = max(2, *(len(r.id) for r, _ in dataset.records))
    click.echo(f"{'id'.ljust(id_w)}  {'score':>7}  flagged")
    for (record, _), score in zip(dataset.records, scores):
        flagged = bool(score >= model.threshold)
        rows.append({"id": record.id, "score": float(score), "flagged": flagged})
        click.echo(f"{record.id.ljust(id_w)}  {score:7.4f}  {'yes' if flagged else 'no'}")
    if out_path is not None:
        _write_json(
            out_path,
            {"variant": model.variant.name, "threshold": model.threshold, "rows": rows},
        )


@cli.command("synth")
@click.option("--n", "n_records", required=True, type=click.IntRange(min=10))
@click.option("--prevalence", required=True, type=click.FloatRange(min=0, max=1, min_open=True, max_open=True))
@click.option("--separation", default=0.0, show_default=True, type=click.FloatRange(min=0, max=1))
@_seed_opt
@_variant_opt
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Dataset CSV to write.")
def synth_cmd(n_records, prevalence, separation, seed, variant_name, out_path):
    """Generate a labeled synthetic dataset with a known class separation."""
    dataset = synth_generate(
        n_records, prevalence, separation, seed, variant=variant_by_name(variant_name)
    )
    write_dataset(dataset, out_path)
    n_pos = int(dataset.labels().sum())
    click.echo(
        _kv_table(
            [
                ("variant", dataset.variant.name),
                ("records", len(dataset.records)),
                ("positives", n_pos),
                ("csv", out_path),
            ]
        )
    )


@cli.command("extract")
@click.option("--sessions", "sessions_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="JSONL session log stream.")
@click.option("--manifest", "manifest_path", default=None, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Question manifest; default: packaged content.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Dataset CSV to write.")
def extract_cmd(sessions_path, manifest_path, out_path):
    """Convert raw session logs into a feature dataset CSV."""
    manifest = load_manifest(manifest_path)
    sessions = read_sessions(sessions_path)
    dataset = sessions_to_dataset(sessions, manifest, require_labels=False)
    write_dataset(dataset, out_path)
    click.echo(
        _kv_table(
            [
                ("variant", dataset.variant.name),
                ("sessions", len(dataset.records)),
                ("csv", out_path),
            ]
        )
    )


@cli.command("serve")
@click.option("--data-dir", "data_dir", default=None, type=click.Path(file_okay=False, path_type=Path), help="Session and model state directory; default $DYSCREEN_DATA_DIR.")
@click.option("--manifest", "manifest_path", default=None, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--host", default=None)
@click.option("--port", default=None, type=click.IntRange(min=1, max=65535))
@click.option("--token", default=None, help="Require this x-api-token header on /v1 routes.")
def serve_cmd(data_dir, manifest_path, host, port, token):
    """Run the HTTP screening service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_env(
        data_dir=data_dir, manifest_path=manifest_path, api_token=token, host=host, port=port
    )
    uvicorn.run(create_app(config), host=config.host, port=config.port)


def main(argv: list[str] | None = None) -> None:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.ClickException as e:
        e.show()
        sys.exit(2)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(2)
    except (DyscreenError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(3)
    except Exception as e:  # pragma: no cover - last-resort guard
        click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()
