"""Command-line pipeline: validate | similarity | detect | decompose | evaluate.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import functools
import json
import sys
from itertools import combinations
from pathlib import Path

import click

from . import __version__
from .decomposition import build_graph, classify_type, split, sweep, threshold_interval, to_dot
from .detection import detect_god_classes
from .engine import SimilarityEngine
from .evaluation import GroundTruth, load_ground_truth, score
from .model import CodeModel, ModelError, ParseError, ValidationError, load_model
from .refinement import WeightConfig, load_weight_overrides
from .report import (
    decomposition_to_json,
    detection_to_csv,
    detection_to_json,
    evaluation_to_csv,
    evaluation_to_json,
    sweep_to_json,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


class InputError(Exception):
    """Invalid input content (model, class id, threshold, ground truth)."""


def handle_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (FileNotFoundError, IsADirectoryError, PermissionError, OSError) as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(EXIT_IO)
        except (ModelError, InputError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except (ValueError, KeyError) as exc:
            message = exc.args[0] if exc.args else exc
            click.echo(f"error: {message}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


def model_options(f):
    f = click.option("--include-libraries", is_flag=True, default=False, help="Keep library entities in the analysis.")(f)
    f = click.option("--model", "model_path", required=True, type=click.Path(), help="Code-model JSON file.")(f)
    return f


def weight_options(f):
    f = click.option("--tapping", type=click.Choice(["off", "clamp"]), default="off", show_default=True, help="Cap refined similarity at the taxonomy maximum.")(f)
    f = click.option("--weights", "weights_path", type=click.Path(), default=None, help="JSON file of relationship-kind -> weight overrides.")(f)
    return f


def output_options(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True, help="Report format.")(f)
    f = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True, help="Output directory.")(f)
    return f


def _weight_config(weights_path: str | None, tapping: str) -> WeightConfig:
    config = WeightConfig()
    if weights_path is not None:
        config = config.with_overrides(load_weight_overrides(weights_path))
    if tapping != config.tapping:
        from dataclasses import replace

        config = replace(config, tapping=tapping)
    return config


def _load_engine(model_path: str, include_libraries: bool, weights_path: str | None, tapping: str) -> SimilarityEngine:
    model = load_model(model_path, include_libraries=include_libraries)
    return SimilarityEngine(model, weights=_weight_config(weights_path, tapping))


def _require_class(model: CodeModel, class_id: str) -> None:
    ent = model.entities.get(class_id)
    if ent is None:
        raise InputError(f"unknown class id: {class_id!r}")
    if ent.kind != "class":
        raise InputError(f"{class_id!r} is a {ent.kind}, not a class")


def _write(out_dir: str, filename: str, text: str) -> Path:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / filename
    path.write_text(text, encoding="utf-8")
    click.echo(f"wrote {path}")
    return path


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


@click.group()
@click.version_option(version=__version__, prog_name="godsplit")
def main():
    """Detect god classes in a code model and split them into responsibilities."""


@main.command()
@model_options
@handle_errors
def validate(model_path: str, include_libraries: bool):
    """Check the model file against all structural invariants."""
    try:
        load_model(model_path, include_libraries=include_libraries)
    except ValidationError as exc:
        for diag in exc.diagnostics:
            click.echo(str(diag), err=True)
        sys.exit(EXIT_VALIDATION)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo("ok")


@main.command()
@model_options
@weight_options
@output_options
@click.option("--class", "class_id", required=True, help="Class whose method pairs to dump.")
@handle_errors
def similarity(model_path, include_libraries, weights_path, tapping, out_dir, fmt, class_id):
    """Dump structural, refined and interaction similarity for one class."""
    engine = _load_engine(model_path, include_libraries, weights_path, tapping)
    _require_class(engine.model, class_id)
    methods = engine.model.methods_of(class_id)
    if len(methods) < 2:
        raise InputError(f"class {class_id!r} defines {len(methods)} methods; nothing to compare")
    pairs = [
        {
            "a": a,
            "b": b,
            "structural": engine.structural(a, b),
            "refined": engine.refined(a, b),
            "iss": engine.iss(a, b),
        }
        for a, b in combinations(methods, 2)
    ]
    if fmt == "json":
        doc = {"class": class_id, "pairs": pairs}
        _write(out_dir, f"similarity_{_safe(class_id)}.json", json.dumps(doc, indent=2) + "\n")
    else:
        lines = ["a,b,structural,refined,iss"]
        lines += [f"{p['a']},{p['b']},{p['structural']:.6f},{p['refined']:.6f},{p['iss']:.6f}" for p in pairs]
        _write(out_dir, f"similarity_{_safe(class_id)}.csv", "\n".join(lines) + "\n")


@main.command()
@model_options
@weight_options
@output_options
@click.option("--quartile", type=float, default=0.75, show_default=True, help="Quantile for the metric cutoffs.")
@handle_errors
def detect(model_path, include_libraries, weights_path, tapping, out_dir, fmt, quartile):
    """Compute per-class metrics and flag god classes."""
    if not 0.0 < quartile < 1.0:
        raise click.UsageError(f"--quartile must be in (0, 1), got {quartile}")
    engine = _load_engine(model_path, include_libraries, weights_path, tapping)
    report = detect_god_classes(engine.model, engine, quartile=quartile)
    if fmt == "json":
        _write(out_dir, "detect.json", json.dumps(detection_to_json(report), indent=2) + "\n")
    else:
        _write(out_dir, "detect.csv", detection_to_csv(report))
    if report.detected:
        click.echo(f"detected {len(report.detected)} god class(es): {', '.join(report.detected)}")
    else:
        click.echo("no god classes detected")


@main.command()
@model_options
@weight_options
@output_options
@click.option("--class", "class_id", required=True, help="Class to decompose.")
@click.option("--threshold", type=float, default=None, help="Single cut threshold (default: mean edge weight).")
@click.option("--sweep", "sweep_spec", default=None, help="Threshold sweep as start:end:step.")
@click.option("--force", is_flag=True, default=False, help="Allow a threshold outside the recommended interval.")
@handle_errors
def decompose(model_path, include_libraries, weights_path, tapping, out_dir, fmt, class_id, threshold, sweep_spec, force):
    """Split one class's method graph into responsibility groups."""
    if threshold is not None and sweep_spec is not None:
        raise click.UsageError("--threshold and --sweep are mutually exclusive")
    engine = _load_engine(model_path, include_libraries, weights_path, tapping)
    _require_class(engine.model, class_id)
    graph = build_graph(engine, class_id)
    interval = threshold_interval(graph)
    stem = f"decompose_{_safe(class_id)}"

    if sweep_spec is not None:
        try:
            start, end, step = (float(x) for x in sweep_spec.split(":"))
        except ValueError:
            raise click.UsageError(f"--sweep expects start:end:step, got {sweep_spec!r}") from None
        if step <= 0 or start > end:
            raise click.UsageError(f"--sweep needs start <= end and step > 0, got {sweep_spec!r}")
        results = sweep(graph, start, end, step)
        for _, d in results:
            d.type_label = classify_type(engine.model, d) if len(d.groups) >= 2 else None
        doc = sweep_to_json(class_id, results)
        doc["interval"] = {"low": interval.low, "high": interval.high}
        _write(out_dir, f"{stem}.json", json.dumps(doc, indent=2) + "\n")
        _write(out_dir, f"{stem}.dot", to_dot(graph))
        counts = ", ".join(f"{t:g}->{len(d.groups)}" for t, d in results)
        click.echo(f"swept {len(results)} thresholds (groups per t: {counts})")
        return

    t = graph.mean if threshold is None else threshold
    try:
        decomposition = split(graph, t, enforce_interval=not force)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    decomposition.type_label = classify_type(engine.model, decomposition) if len(decomposition.groups) >= 2 else None
    doc = decomposition_to_json(decomposition)
    doc["interval"] = {"low": interval.low, "high": interval.high}
    _write(out_dir, f"{stem}.json", json.dumps(doc, indent=2) + "\n")
    _write(out_dir, f"{stem}.dot", to_dot(graph, threshold=t))
    label = decomposition.type_label or "n/a"
    click.echo(
        f"threshold {t:.4f}: {len(decomposition.groups)} group(s), "
        f"{decomposition.removed_edges} edge(s) removed, type {label}"
    )


@main.command()
@model_options
@output_options
@click.option("--truth", "truth_path", required=True, type=click.Path(), help="Ground-truth JSON file.")
@click.option("--decomposition", "decomposition_path", required=True, type=click.Path(), help="Decomposition report from 'decompose'.")
@handle_errors
def evaluate(model_path, include_libraries, out_dir, fmt, truth_path, decomposition_path):
    """Score a decomposition against manually identified responsibilities."""
    model = load_model(model_path, include_libraries=include_libraries)
    truth = _checked_truth(load_ground_truth(truth_path), model)
    doc = json.loads(Path(decomposition_path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or "class" not in doc:
        raise InputError("decomposition file must be an object with a 'class' field")
    if doc["class"] != truth.class_id:
        raise InputError(
            f"decomposition is for class {doc['class']!r} but ground truth is for {truth.class_id!r}"
        )

    if "sweep" in doc:
        entries = doc["sweep"]
        results = [
            evaluation_to_json(score(truth, _checked_groups(model, truth.class_id, entry)), entry.get("threshold"))
            for entry in entries
        ]
        best = max(results, key=lambda r: r["class_f"]) if results else None
        out = {"class": truth.class_id, "results": results}
        if best is not None:
            out["best_threshold"] = best.get("threshold")
            out["best_class_f"] = best["class_f"]
    else:
        result = score(truth, _checked_groups(model, truth.class_id, doc))
        out = evaluation_to_json(result, doc.get("threshold"))
        results = [out]

    if fmt == "json":
        _write(out_dir, "evaluate.json", json.dumps(out, indent=2) + "\n")
    else:
        _write(out_dir, "evaluate.csv", evaluation_to_csv(results))
    top = max(results, key=lambda r: r["class_f"])
    click.echo(f"class F-measure: {top['class_f']:.4f}")


def _checked_truth(truth: GroundTruth, model: CodeModel) -> GroundTruth:
    ent = model.entities.get(truth.class_id)
    if ent is None or ent.kind != "class":
        raise InputError(f"ground-truth class {truth.class_id!r} is not a class in the model")
    methods = set(model.methods_of(truth.class_id))
    for resp in truth.responsibilities:
        missing = [m for m in resp if m not in methods]
        if missing:
            raise InputError(
                f"ground truth references methods not defined in {truth.class_id!r}: {missing}"
            )
    return truth


def _checked_groups(model: CodeModel, class_id: str, doc: dict) -> list[list[str]]:
    groups = doc.get("groups")
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups) or not groups:
        raise InputError("decomposition file must carry a non-empty 'groups' list of method-id lists")
    produced = [str(m) for g in groups for m in g]
    expected = set(model.methods_of(class_id))
    if set(produced) != expected or len(produced) != len(expected):
        raise InputError(f"decomposition groups must partition the methods of {class_id!r}")
    return [[str(m) for m in g] for g in groups]


if __name__ == "__main__":
    main()
